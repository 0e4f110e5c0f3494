"""Independent brute-force oracles used to pin expected values in tests.

These deliberately avoid the library's algorithms: determinants by cofactor
expansion, Hafnians by explicit perfect-matching enumeration, rank
correlations by direct rank-pair counting.
"""

import itertools

import numpy as np


def cofactor_det(a):
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return a[0, 0]
    total = 0.0 + 0.0j
    rest = list(range(1, n))
    for j in range(n):
        cols = [c for c in range(n) if c != j]
        minor = a[np.ix_(rest, cols)]
        total += (-1) ** j * a[0, j] * cofactor_det(minor)
    return total


def matching_hafnian(a):
    """Sum over all perfect matchings of the index set, enumerated directly."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]

    def rec(idx):
        if not idx:
            return 1.0 + 0.0j
        i = idx[0]
        total = 0.0 + 0.0j
        for pos in range(1, len(idx)):
            j = idx[pos]
            total += a[i, j] * rec(idx[1:pos] + idx[pos + 1:])
        return total

    return rec(tuple(range(n)))


def perfect_matching_count(adj01):
    """Count perfect matchings of a 0/1 graph by enumerating pairings."""
    return round(matching_hafnian(np.asarray(adj01, dtype=float)).real)


def all_patterns(modes):
    return list(itertools.product([0, 1], repeat=modes))


def rank_pair_spearman(x, y):
    """Spearman rho via explicit average ranks and the Pearson formula on
    ranks, O(n^2) rank computation."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def ranks(v):
        r = np.empty(len(v))
        for i, vi in enumerate(v):
            less = np.sum(v < vi)
            equal = np.sum(v == vi)
            r[i] = less + (equal + 1) / 2.0
        return r

    rx, ry = ranks(x), ranks(y)
    rx -= rx.mean()
    ry -= ry.mean()
    return float(np.sum(rx * ry) / np.sqrt(np.sum(rx**2) * np.sum(ry**2)))
