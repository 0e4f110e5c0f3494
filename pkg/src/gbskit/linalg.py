"""Dense complex linear algebra kernel.

Thin, validated wrappers around LAPACK (via numpy) plus the Takagi-Autonne
decomposition of complex symmetric matrices, which is the one primitive the
rest of the toolkit needs that numpy does not ship.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ValidationError

__all__ = ["TakagiFactorization", "as_matrix", "det", "inverse", "takagi"]

_SINGULAR_TOL = 1e-12


def as_matrix(m, square: bool = True) -> np.ndarray:
    """Coerce to a complex128 2-D array and validate finiteness."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2:
        raise ValidationError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if square and a.shape[0] != a.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix contains NaN or Inf entries")
    return a


def _check_symmetric(a: np.ndarray, tol: float) -> None:
    scale = max(np.linalg.norm(a), 1.0)
    if np.linalg.norm(a - a.T) > tol * scale:
        raise ValidationError("matrix is not symmetric within tolerance")


def det(m) -> complex:
    """Determinant via pivoted LU."""
    a = as_matrix(m)
    if a.shape[0] == 0:
        return 1.0 + 0.0j
    return complex(np.linalg.det(a))


def inverse(m) -> np.ndarray:
    """Matrix inverse; rejects numerically singular inputs."""
    a = as_matrix(m)
    if a.shape[0] == 0:
        return a.copy()
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= _SINGULAR_TOL * sv[0]:
        raise ValidationError("matrix is singular to working precision")
    return np.linalg.inv(a)


@dataclass(frozen=True)
class TakagiFactorization:
    """S = U diag(values) U^T with unitary U and values >= 0, sorted descending."""

    unitary: np.ndarray
    values: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.unitary @ np.diag(self.values) @ self.unitary.T


def takagi(s, tol: float = 1e-10) -> TakagiFactorization:
    """Takagi-Autonne decomposition of a complex symmetric matrix.

    Route: SVD S = U0 diag(d) Vh, then U = U0 sqrt(W) with W = U0^H Vh^T.
    W is unitary and satisfies W diag(d) = diag(d) W^T, which makes the
    principal square root land on a valid Takagi unitary. A final polar
    projection pins unitarity down to machine precision.
    """
    a = as_matrix(s)
    _check_symmetric(a, tol)
    n = a.shape[0]
    if n == 0:
        return TakagiFactorization(unitary=a.copy(), values=np.zeros(0))
    a = (a + a.T) / 2.0

    u0, d, vh = np.linalg.svd(a)
    w = u0.conj().T @ vh.T
    sq = scipy.linalg.sqrtm(w)
    q = u0 @ sq
    # project to the nearest unitary (q is unitary up to sqrtm roundoff)
    pu, _, pvh = np.linalg.svd(q)
    q = pu @ pvh

    vals = np.abs(d)  # svd already returns them sorted descending
    return TakagiFactorization(unitary=q, values=vals)
