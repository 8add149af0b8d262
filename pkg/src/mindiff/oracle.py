"""Exact Min-Diff DP by enumerating every m-subset.

Independent of the incremental machinery in :mod:`mindiff.model`: each subset
is scored from its own distance sub-matrix, in lexicographic batches.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import TOL, MinDiffError, Instance

DEFAULT_LIMIT = 10**7


class EnumerationLimitError(MinDiffError):
    pass


@dataclass(frozen=True)
class OracleResult:
    optimum: float
    optimal_subset: tuple
    subsets_enumerated: int


def subset_objectives(dist: np.ndarray, subsets: np.ndarray) -> np.ndarray:
    """f(S) for each row of ``subsets`` (shape (B, m)), straight from the definition."""
    sub = dist[subsets[:, :, None], subsets[:, None, :]]
    sums = sub.sum(axis=2)
    return sums.max(axis=1) - sums.min(axis=1)


def solve_exact(instance: Instance, limit: int = DEFAULT_LIMIT) -> OracleResult:
    n, m = instance.n, instance.m
    total = math.comb(n, m)
    if total > limit:
        raise EnumerationLimitError(
            f"C({n},{m}) = {total} subsets exceeds the enumeration limit {limit}"
        )
    batch = max(1, (1 << 21) // (m * m))
    combos = itertools.combinations(range(n), m)
    best_val = math.inf
    best_subset = None
    seen = 0
    while True:
        chunk = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(combos, batch)), dtype=np.int64
        )
        if chunk.size == 0:
            break
        chunk = chunk.reshape(-1, m)
        vals = subset_objectives(instance.dist, chunk)
        k = int(np.argmax(vals <= vals.min() + TOL))
        # lexicographically first optimum: later batches must beat it by more than TOL
        if vals[k] < best_val - TOL:
            best_val = float(vals[k])
            best_subset = tuple(int(i) for i in chunk[k])
        seen += chunk.shape[0]
    return OracleResult(best_val, best_subset, seen)
