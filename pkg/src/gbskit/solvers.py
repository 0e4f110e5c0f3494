"""Subgraph objectives and stochastic search algorithms.

Two objectives (largest |Hafnian|^2 and largest density), two stochastic
searchers (random search and simulated annealing) that can draw proposals
either uniformly or from a sample pool, and the deterministic greedy-peeling
baseline for dense subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .encoding import Graph
from .errors import ValidationError
from .matfn import hafnian_sq_mod
from .sampler import SamplePool

__all__ = [
    "Objective",
    "ProposalSource",
    "RunTrace",
    "density",
    "random_search",
    "simulated_annealing",
    "greedy_peel",
]


def density(g: Graph, subset) -> float:
    """Subgraph density |sum over the induced submatrix| (both edge
    directions counted, diagonal included as stored)."""
    verts = list(subset)
    if len(set(verts)) != len(verts):
        raise ValidationError("subset vertices must be distinct")
    if any(v < 0 or v >= g.n for v in verts):
        raise ValidationError("subset vertex out of range")
    sub = g.adjacency[np.ix_(verts, verts)]
    return float(abs(sub.sum()))


@dataclass
class Objective:
    """Either 'maxhaf' (|Hafnian|^2) or 'density' at fixed subgraph size k."""

    kind: str
    graph: Graph
    k: int
    _haf_cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in ("maxhaf", "density"):
            raise ValidationError(f"unknown objective kind {self.kind!r}")
        if not 0 < self.k < self.graph.n:
            raise ValidationError(
                f"subgraph size k must lie in (0, {self.graph.n}), got {self.k}"
            )
        if self.kind == "maxhaf" and self.k % 2 != 0:
            raise ValidationError("maxhaf requires an even subgraph size")

    def value(self, subset) -> float:
        if self.kind == "density":
            return density(self.graph, subset)
        key = tuple(sorted(subset))
        v = self._haf_cache.get(key)
        if v is None:
            v = hafnian_sq_mod(self.graph, key)
            self._haf_cache[key] = v
        return v


@dataclass(frozen=True)
class ProposalSource:
    """Uniform k-subsets or the clicked vertex sets of a sample pool."""

    kind: str = "uniform"
    pool: SamplePool | None = None

    def __post_init__(self):
        if self.kind not in ("uniform", "pool"):
            raise ValidationError(f"unknown proposal source {self.kind!r}")
        if self.kind == "pool" and (self.pool is None or len(self.pool) == 0):
            raise ValidationError("pool source requires a nonempty sample pool")


@dataclass(frozen=True)
class RunTrace:
    """Best-so-far objective values per step, plus the winning subset."""

    best_values: np.ndarray
    best_subset: tuple
    steps_used: int
    seed: int
    pool_wrapped: bool = False

    def value_at(self, step: int) -> float:
        if not 1 <= step <= self.steps_used:
            raise ValidationError(f"step {step} outside [1, {self.steps_used}]")
        return float(self.best_values[step - 1])

    def steps_to_reach(self, target: float) -> int | None:
        """First step at which the best value reached the target, or None."""
        hits = np.flatnonzero(self.best_values >= target)
        return int(hits[0]) + 1 if hits.size else None


class _PoolCursor:
    """Sequential pool consumption with wrap-around."""

    def __init__(self, pool: SamplePool, k: int):
        bad = [i for i, p in enumerate(pool.samples) if sum(p) != k]
        if bad:
            raise ValidationError(
                f"pool pattern {bad[0]} has {sum(pool.samples[bad[0]])} clicks, "
                f"expected {k}"
            )
        self._subsets = [
            tuple(i for i, b in enumerate(p) if b) for p in pool.samples
        ]
        self._pos = 0
        self.wrapped = False

    def next(self) -> tuple:
        sub = self._subsets[self._pos]
        self._pos += 1
        if self._pos >= len(self._subsets):
            self._pos = 0
            self.wrapped = True
        return sub


def _check_pool(obj: Objective, source: ProposalSource) -> _PoolCursor | None:
    if source.kind != "pool":
        return None
    if source.pool.modes != obj.graph.n:
        raise ValidationError(
            f"pool mode count {source.pool.modes} does not match graph size "
            f"{obj.graph.n}"
        )
    return _PoolCursor(source.pool, obj.k)


def _uniform_subset(rng: np.random.Generator, n: int, k: int) -> tuple:
    return tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))


def random_search(
    obj: Objective, source: ProposalSource, steps: int, seed: int
) -> RunTrace:
    """Draw one k-subset per step and keep the running best."""
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    cursor = _check_pool(obj, source)
    rng = np.random.default_rng(seed)
    best_values = np.empty(steps)
    best_val = -np.inf
    best_sub: tuple = ()
    for t in range(steps):
        sub = cursor.next() if cursor else _uniform_subset(rng, obj.graph.n, obj.k)
        v = obj.value(sub)
        if v > best_val:
            best_val, best_sub = v, sub
        best_values[t] = best_val
    return RunTrace(
        best_values=best_values,
        best_subset=best_sub,
        steps_used=steps,
        seed=seed,
        pool_wrapped=bool(cursor.wrapped) if cursor else False,
    )


def simulated_annealing(
    obj: Objective,
    source: ProposalSource,
    steps: int,
    t0: float = 1.0,
    alpha: float = 0.995,
    jump_prob: float = 0.0,
    seed: int = 0,
) -> RunTrace:
    """Single-swap simulated annealing with geometric cooling.

    With a pool source, the initial subset comes from the pool and each step
    proposes a whole-subset jump to the next pool pattern with probability
    jump_prob; otherwise one inside vertex is swapped with one outside vertex.
    """
    if steps < 1:
        raise ValidationError("steps must be >= 1")
    if t0 <= 0:
        raise ValidationError("initial temperature must be positive")
    if not 0.0 < alpha < 1.0:
        raise ValidationError("cooling factor alpha must lie in (0, 1)")
    if not 0.0 <= jump_prob < 1.0:
        raise ValidationError("jump probability must lie in [0, 1)")
    cursor = _check_pool(obj, source)
    if cursor is None:
        jump_prob = 0.0
    rng = np.random.default_rng(seed)
    n, k = obj.graph.n, obj.k

    cur = cursor.next() if cursor else _uniform_subset(rng, n, k)
    cur_val = obj.value(cur)
    best_val, best_sub = cur_val, cur
    best_values = np.empty(steps)
    temp = t0
    for t in range(steps):
        if cursor and rng.random() < jump_prob:
            prop = cursor.next()
        else:
            inside = list(cur)
            outside = [v for v in range(n) if v not in cur]
            i = int(rng.integers(len(inside)))
            j = int(rng.integers(len(outside)))
            inside[i] = outside[j]
            prop = tuple(sorted(inside))
        prop_val = obj.value(prop)
        if prop_val >= cur_val or rng.random() < np.exp(
            -(cur_val - prop_val) / temp
        ):
            cur, cur_val = prop, prop_val
        if cur_val > best_val:
            best_val, best_sub = cur_val, cur
        best_values[t] = best_val
        temp *= alpha
    return RunTrace(
        best_values=best_values,
        best_subset=best_sub,
        steps_used=steps,
        seed=seed,
        pool_wrapped=bool(cursor.wrapped) if cursor else False,
    )


def greedy_peel(g: Graph, k: int) -> tuple:
    """Repeatedly remove the minimum weighted-degree vertex (ties broken by
    lowest index) until k vertices remain. Defined for real nonnegative
    weights only."""
    if not 0 < k < g.n:
        raise ValidationError(f"k must lie in (0, {g.n}), got {k}")
    a = g.adjacency
    if np.any(np.abs(a.imag) > 0) or np.any(a.real < 0):
        raise ValidationError(
            "greedy peeling is defined for real nonnegative weights only"
        )
    w = a.real
    alive = list(range(g.n))
    while len(alive) > k:
        degrees = w[np.ix_(alive, alive)].sum(axis=1)
        drop = int(np.argmin(degrees))  # argmin takes the lowest index on ties
        alive.pop(drop)
    return tuple(alive)
