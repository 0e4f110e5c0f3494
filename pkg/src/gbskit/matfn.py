"""Exact Hafnian and Torontonian evaluation.

Both functions are #P-hard in general; the implementations here are exact
exponential-time algorithms sized for desk-scale inputs (Hafnian dimension
<= 24, Torontonian mode count <= 16), guarded by explicit cost caps.
"""

from __future__ import annotations

import numpy as np

from .errors import CostGuardError, PhysicalityError, ValidationError
from .linalg import as_matrix

__all__ = ["hafnian", "hafnian_sq_mod", "torontonian"]

HAFNIAN_MAX_DIM = 24
TORONTONIAN_MAX_MODES = 16

_SYM_TOL = 1e-10
_IMAG_TOL = 1e-8


def _exp_poly_coeff(power_traces: np.ndarray, m: int) -> complex:
    # coefficient of x^m in exp(sum_k t_k x^k / (2k)); f' = g' f recurrence
    g = np.zeros(m + 1, dtype=np.complex128)
    for k in range(1, m + 1):
        g[k] = power_traces[k - 1] / (2 * k)
    f = np.zeros(m + 1, dtype=np.complex128)
    f[0] = 1.0
    for j in range(1, m + 1):
        acc = 0.0 + 0.0j
        for k in range(1, j + 1):
            acc += k * g[k] * f[j - k]
        f[j] = acc / j
    return complex(f[m])


def hafnian(m) -> complex:
    """Hafnian: sum over perfect matchings of products of paired entries.

    Uses the inclusion-exclusion power-trace algorithm, O(2^(n/2) n^3).
    The diagonal never enters a perfect matching and is ignored.
    """
    a = as_matrix(m)
    n = a.shape[0]
    if n % 2 != 0:
        raise ValidationError(f"hafnian requires even dimension, got {n}")
    if n > HAFNIAN_MAX_DIM:
        raise CostGuardError(
            f"hafnian dimension {n} exceeds the cost cap of {HAFNIAN_MAX_DIM}"
        )
    if n == 0:
        return 1.0 + 0.0j
    scale = np.linalg.norm(a)
    if scale > 0 and np.linalg.norm(a - a.T) > _SYM_TOL * scale:
        raise ValidationError("hafnian requires a symmetric matrix")
    a = (a + a.T) / 2.0
    np.fill_diagonal(a, 0.0)

    half = n // 2
    pair_rows = np.arange(n).reshape(half, 2)
    total = 0.0 + 0.0j
    for mask in range(1 << half):
        pairs = [i for i in range(half) if (mask >> i) & 1]
        npairs = len(pairs)
        if npairs == 0:
            continue  # [x^half] of the empty product is 0 for half >= 1
        idx = pair_rows[pairs].reshape(-1)
        sub = a[np.ix_(idx, idx)]
        # B = X sub with X the direct sum of 2x2 swaps: swap row pairs
        b = sub.reshape(npairs, 2, 2 * npairs)[:, ::-1, :].reshape(
            2 * npairs, 2 * npairs
        )
        ev = np.linalg.eigvals(b)
        traces = np.array([np.sum(ev**k) for k in range(1, half + 1)])
        coeff = _exp_poly_coeff(traces, half)
        total += (-1) ** (half - npairs) * coeff
    return complex(total)


def hafnian_sq_mod(graph, subset) -> float:
    """|Haf(adjacency restricted to subset)|^2. Subset size must be even."""
    verts = list(subset)
    if len(verts) % 2 != 0:
        raise ValidationError("hafnian objective requires an even subset size")
    if len(set(verts)) != len(verts):
        raise ValidationError("subset vertices must be distinct")
    n = graph.n
    if any(v < 0 or v >= n for v in verts):
        raise ValidationError("subset vertex out of range")
    if not verts:
        return 1.0
    sub = graph.adjacency[np.ix_(verts, verts)]
    return float(abs(hafnian(sub)) ** 2)


def torontonian(o) -> float:
    """Torontonian of a 2m x 2m matrix in (first-block, second-block) ordering.

    Tor(O) = sum over Z subset of {1..m} of (-1)^(m-|Z|) / sqrt(det(I - O_Z)),
    where O_Z keeps rows/columns {i, i+m : i in Z}. Every det(I - O_Z) must be
    a positive real; anything else marks an unphysical input.
    """
    a = as_matrix(o)
    n = a.shape[0]
    if n % 2 != 0:
        raise ValidationError(f"torontonian requires even dimension, got {n}")
    m = n // 2
    if m > TORONTONIAN_MAX_MODES:
        raise CostGuardError(
            f"torontonian mode count {m} exceeds the cost cap of "
            f"{TORONTONIAN_MAX_MODES}"
        )
    total = float((-1) ** m)  # empty subset: det of the 0x0 matrix is 1
    eye_cache = [np.eye(2 * k, dtype=np.complex128) for k in range(m + 1)]
    for mask in range(1, 1 << m):
        sel = [i for i in range(m) if (mask >> i) & 1]
        k = len(sel)
        idx = sel + [i + m for i in sel]
        d = np.linalg.det(eye_cache[k] - a[np.ix_(idx, idx)])
        if d.real <= 0 or abs(d.imag) > _IMAG_TOL * abs(d):
            raise PhysicalityError(
                f"det(I - O_Z) = {d} is not positive real; input is unphysical"
            )
        total += (-1) ** (m - k) / np.sqrt(d.real)
    return total
