"""Exact threshold-detector sampling and sample-pool management.

Sampling works mode by mode through the chain rule: the conditional click
probability of mode k given a prefix outcome is a ratio of two marginal
pattern probabilities on the first k modes. Marginals only depend on the
prefix bits, so they are memoized; pools of many samples reuse almost all of
the expensive Torontonian evaluations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import gaussian
from .errors import CostGuardError, PhysicalityError, ValidationError

__all__ = ["SamplePool", "sample", "postselect", "save_pool", "load_pool"]

MAX_MODES = 24
MAX_EXPECTED_CLICKS = 14


@dataclass(frozen=True)
class SamplePool:
    """Ordered collection of click patterns from one device or file."""

    modes: int
    samples: tuple
    provenance: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        for pat in self.samples:
            if len(pat) != self.modes:
                raise ValidationError(
                    f"pattern length {len(pat)} does not match modes={self.modes}"
                )

    def __len__(self) -> int:
        return len(self.samples)

    def click_counts(self) -> np.ndarray:
        return np.array([sum(p) for p in self.samples], dtype=int)


class _ChainRuleSampler:
    """Per-state cache of reduced-state marginals keyed by prefix bits.

    The Torontonian of a prefix is an inclusion-exclusion sum over clicked
    subsets; its per-subset determinants are shared by every prefix whose
    clicked set is a superset, so they get their own cache layer.
    """

    def __init__(self, state: gaussian.GaussianState):
        self.modes = state.modes
        self._o = []
        self._norm = []
        for k in range(1, state.modes + 1):
            red = gaussian.reduce_modes(state, range(k))
            o = np.eye(2 * k) - np.linalg.inv(red.husimi)
            det = np.linalg.det(red.husimi).real
            self._o.append(o)
            self._norm.append(np.sqrt(det))
        self._cache: dict[tuple, float] = {(): 1.0}
        self._inv_sqrt_det: dict[tuple[int, int], float] = {}

    def _subset_term(self, k: int, mask: int) -> float:
        """1/sqrt(det(I - O_Z)) for clicked-mode bitmask Z at prefix length k."""
        val = self._inv_sqrt_det.get((k, mask))
        if val is None:
            clicked = [i for i in range(k) if (mask >> i) & 1]
            idx = clicked + [i + k for i in clicked]
            o = self._o[k - 1]
            d = np.linalg.det(
                np.eye(2 * len(clicked)) - o[np.ix_(idx, idx)]
            )
            if d.real <= 0 or abs(d.imag) > 1e-8 * abs(d):
                raise PhysicalityError(
                    f"det(I - O_Z) = {d} is not positive real during sampling"
                )
            val = 1.0 / np.sqrt(d.real)
            self._inv_sqrt_det[(k, mask)] = val
        return val

    def prefix_probability(self, bits: tuple) -> float:
        p = self._cache.get(bits)
        if p is not None:
            return p
        k = len(bits)
        full = 0
        for i, b in enumerate(bits):
            if b:
                full |= 1 << i
        c = bin(full).count("1")
        # Tor(O_S) over the clicked set S: iterate submasks of S
        tor = float((-1) ** c)  # empty subset
        sub = full
        while sub:
            tor += (-1) ** (c - bin(sub).count("1")) * self._subset_term(k, sub)
            sub = (sub - 1) & full
        p = tor / self._norm[k - 1]
        p = min(max(p, 0.0), 1.0)
        self._cache[bits] = p
        return p

    def draw(self, uniforms: np.ndarray) -> tuple:
        bits: tuple = ()
        p_prefix = 1.0
        for k in range(self.modes):
            p1 = self.prefix_probability(bits + (1,))
            cond = p1 / p_prefix if p_prefix > 0 else 0.0
            if uniforms[k] < cond:
                bits = bits + (1,)
                p_prefix = p1
            else:
                bits = bits + (0,)
                p_prefix = max(p_prefix - p1, 0.0)
                self._cache.setdefault(bits, p_prefix)
        return bits


def sample(state: gaussian.GaussianState, count: int, seed: int) -> SamplePool:
    """Draw i.i.d. exact samples from a state's threshold-click distribution."""
    if count < 0:
        raise ValidationError("sample count must be nonnegative")
    if state.modes > MAX_MODES:
        raise CostGuardError(
            f"sampling supports at most {MAX_MODES} modes, got {state.modes}"
        )
    expected = gaussian.mean_clicks(state)
    if expected > MAX_EXPECTED_CLICKS:
        raise CostGuardError(
            f"expected click count {expected:.2f} exceeds the sampling cost "
            f"guard of {MAX_EXPECTED_CLICKS}"
        )
    chain = _ChainRuleSampler(state)
    rng = np.random.default_rng(seed)
    uniforms = rng.random((count, state.modes))
    samples = tuple(chain.draw(uniforms[i]) for i in range(count))
    return SamplePool(
        modes=state.modes,
        samples=samples,
        provenance={"kind": "simulated", "count": count},
        seed=seed,
    )


def postselect(pool: SamplePool, k: int) -> SamplePool:
    """Keep only patterns with exactly k clicks, order preserved."""
    if not 0 <= k <= pool.modes:
        raise ValidationError(f"click count {k} out of range [0, {pool.modes}]")
    kept = tuple(p for p in pool.samples if sum(p) == k)
    prov = dict(pool.provenance)
    prov["postselected_clicks"] = k
    return SamplePool(modes=pool.modes, samples=kept, provenance=prov, seed=pool.seed)


def save_pool(pool: SamplePool, path) -> None:
    """Write the pool in the plain-text sample format."""
    lines = [f"# provenance: {json.dumps(pool.provenance, sort_keys=True)}"]
    if pool.seed is not None:
        lines.append(f"# seed: {pool.seed}")
    lines.append(f"modes={pool.modes}")
    for pat in pool.samples:
        lines.append("".join(str(int(b)) for b in pat))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_pool(path) -> SamplePool:
    """Read a sample file: 'modes=M' header, one 0/1 string per line,
    '#' lines ignored (provenance/seed comments are restored if present)."""
    provenance: dict = {}
    seed = None
    modes = None
    samples = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("provenance:"):
                    try:
                        provenance = json.loads(body[len("provenance:"):].strip())
                    except json.JSONDecodeError:
                        pass
                elif body.startswith("seed:"):
                    try:
                        seed = int(body[len("seed:"):].strip())
                    except ValueError:
                        pass
                continue
            if modes is None:
                if not line.startswith("modes="):
                    raise ValidationError(
                        f"{path}:{lineno}: expected 'modes=M' header, got {line!r}"
                    )
                try:
                    modes = int(line[len("modes="):])
                except ValueError:
                    raise ValidationError(
                        f"{path}:{lineno}: malformed mode count in header"
                    ) from None
                if modes <= 0:
                    raise ValidationError(f"{path}:{lineno}: modes must be positive")
                continue
            if len(line) != modes or any(c not in "01" for c in line):
                raise ValidationError(
                    f"{path}:{lineno}: expected a {modes}-character 0/1 pattern, "
                    f"got {line!r}"
                )
            samples.append(tuple(int(c) for c in line))
    if modes is None:
        raise ValidationError(f"{path}: missing 'modes=M' header")
    return SamplePool(
        modes=modes, samples=tuple(samples), provenance=provenance, seed=seed
    )
