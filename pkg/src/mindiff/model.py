"""Problem instance, solution state and swap-move evaluation for Min-Diff DP.

A solution keeps ``delta[w]``, the sum of distances from ``w`` to the selected
elements, for *every* element ``w`` (selected or not).  With that cache a swap
gain costs O(m) and applying a swap costs O(n).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

TOL = 1e-9

# upper bound on the number of floats materialised per block in neighborhood_gains
_BLOCK_ELEMS = 1 << 15


class MinDiffError(Exception):
    """Base class for errors raised by this package."""


class ConfigurationError(MinDiffError, ValueError):
    pass


class ContractError(MinDiffError, ValueError):
    """A move or subset violates the preconditions of an operation."""


@dataclass(frozen=True, eq=False)
class Instance:
    """Symmetric distance matrix plus subset cardinality ``m``."""

    dist: np.ndarray
    m: int
    name: str = ""
    n: int = field(init=False)

    def __post_init__(self):
        d = np.array(self.dist, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ConfigurationError(f"distance matrix must be square, got shape {d.shape}")
        n = d.shape[0]
        if n < 2:
            raise ConfigurationError("instance needs at least 2 elements")
        m = int(self.m)
        if not 1 < m < n:
            raise ConfigurationError(f"need 1 < m < n, got n={n}, m={m}")
        if np.any(np.diag(d) != 0):
            raise ConfigurationError("distance matrix must have a zero diagonal")
        if not np.array_equal(d, d.T):
            raise ConfigurationError("distance matrix must be symmetric")
        if np.any(d < 0):
            raise ConfigurationError("distances must be non-negative")
        off = ~np.eye(n, dtype=bool)
        if np.any(d[off] == 0):
            warnings.warn("instance has zero distances between distinct elements", stacklevel=3)
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    def __repr__(self):
        label = f"{self.name!r}, " if self.name else ""
        return f"Instance({label}n={self.n}, m={self.m})"

    def with_m(self, m: int) -> "Instance":
        return Instance(self.dist, m, self.name)


@dataclass(frozen=True)
class Move:
    p: int
    q: int
    gain: float


class Solution:
    """A selected m-subset together with its delta cache and objective.

    ``inside`` and ``outside`` hold the selected and unselected elements;
    ``where[w]`` is the position of ``w`` in whichever of the two it belongs to.
    Swaps keep positions stable, so both arrays can be indexed directly by the
    vectorised neighborhood code.
    """

    __slots__ = ("instance", "inside", "outside", "where", "mask", "delta", "objective")

    def __init__(self, instance, inside, outside, where, mask, delta, objective):
        self.instance = instance
        self.inside = inside
        self.outside = outside
        self.where = where
        self.mask = mask
        self.delta = delta
        self.objective = objective

    @property
    def selected(self) -> tuple:
        return tuple(sorted(int(i) for i in self.inside))

    @property
    def m(self) -> int:
        return self.inside.size

    def copy(self) -> "Solution":
        return Solution(
            self.instance,
            self.inside.copy(),
            self.outside.copy(),
            self.where.copy(),
            self.mask.copy(),
            self.delta.copy(),
            self.objective,
        )

    def recompute_objective(self) -> float:
        vals = self.delta[self.inside]
        self.objective = float(vals.max() - vals.min())
        return self.objective

    def __repr__(self):
        return f"Solution(objective={self.objective:.6g}, selected={list(self.selected)})"


def _spread(values: np.ndarray) -> float:
    return float(values.max() - values.min())


def evaluate_full(instance: Instance, selected: Iterable[int]) -> Solution:
    """Build a solution from scratch: delta over all n elements and f(S)."""
    n, m = instance.n, instance.m
    idx = np.fromiter((int(i) for i in selected), dtype=np.int64)
    if idx.size != m:
        raise ContractError(f"subset has {idx.size} elements, instance needs m={m}")
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise ContractError(f"subset index out of range [0, {n})")
    if np.unique(idx).size != m:
        raise ContractError("subset contains duplicate indices")
    idx = np.sort(idx)
    mask = np.zeros(n, dtype=bool)
    mask[idx] = True
    outside = np.flatnonzero(~mask)
    where = np.empty(n, dtype=np.int64)
    where[idx] = np.arange(m)
    where[outside] = np.arange(outside.size)
    delta = instance.dist[:, idx].sum(axis=1)
    return Solution(instance, idx, outside, where, mask, delta, _spread(delta[idx]))


def _check_swap(sol: Solution, p: int, q: int):
    n = sol.instance.n
    if not (0 <= p < n and sol.mask[p]):
        raise ContractError(f"element {p} is not in the selected subset")
    if not (0 <= q < n) or sol.mask[q]:
        raise ContractError(f"element {q} is not an unselected element")


def gain_of_swap(sol: Solution, p: int, q: int) -> float:
    """Objective change f(S - p + q) - f(S), computed in O(m) from the cache."""
    _check_swap(sol, p, q)
    d = sol.instance.dist
    keep = sol.inside[sol.inside != p]
    vals = sol.delta[keep] - d[keep, p] + d[keep, q]
    dq = sol.delta[q] - d[q, p]
    hi = max(vals.max(), dq)
    lo = min(vals.min(), dq)
    return float(hi - lo) - sol.objective


def apply_swap(sol: Solution, p: int, q: int) -> Solution:
    """Swap ``p`` out and ``q`` in, updating the cache in place (O(n))."""
    _check_swap(sol, p, q)
    d = sol.instance.dist
    # d[p,p] = d[q,q] = 0 makes this one update correct for every element, p and q included
    sol.delta += d[q] - d[p]
    i, j = sol.where[p], sol.where[q]
    sol.inside[i] = q
    sol.outside[j] = p
    sol.where[p], sol.where[q] = j, i
    sol.mask[p] = False
    sol.mask[q] = True
    sol.recompute_objective()
    return sol


def neighborhood_gains(sol: Solution) -> np.ndarray:
    """Gains of all m*(n-m) swaps at once.

    Entry ``[i, j]`` is the gain of swapping ``inside[i]`` out for
    ``outside[j]``.
    """
    d = sol.instance.dist
    S, Q = sol.inside, sol.outside
    m, k = S.size, Q.size
    # retained element w after swap(p, q): delta[w] - d[w,p] + d[w,q]
    base = sol.delta[S][:, None] + d[np.ix_(S, Q)]  # (w, q)
    d_SS = d[np.ix_(S, S)]  # (p, w)
    # incoming q: delta[q] - d[q,p]
    incoming = sol.delta[Q][None, :] - d[np.ix_(S, Q)]  # (p, q)
    out = np.empty((m, k))
    block = max(1, _BLOCK_ELEMS // max(1, m * k))
    for start in range(0, m, block):
        stop = min(m, start + block)
        vals = base[None, :, :] - d_SS[start:stop, :, None]  # (p, w, q)
        rows = np.arange(stop - start)
        vals[rows, rows + start, :] = -np.inf
        hi = vals.max(axis=1)
        vals[rows, rows + start, :] = np.inf
        lo = vals.min(axis=1)
        inc = incoming[start:stop]
        out[start:stop] = np.maximum(hi, inc) - np.minimum(lo, inc)
    out -= sol.objective
    return out


def sampled_gains(sol: Solution, ps: np.ndarray, qs: np.ndarray) -> np.ndarray:
    """Gains of the swaps ``(ps[k], qs[k])``, vectorised over k (each O(m))."""
    d = sol.instance.dist
    S = sol.inside
    vals = sol.delta[S][None, :] - d[np.ix_(ps, S)] + d[np.ix_(qs, S)]
    own = S[None, :] == ps[:, None]
    hi = np.where(own, -np.inf, vals).max(axis=1)
    lo = np.where(own, np.inf, vals).min(axis=1)
    inc = sol.delta[qs] - d[qs, ps]
    return np.maximum(hi, inc) - np.minimum(lo, inc) - sol.objective


def random_solution(instance: Instance, rng: np.random.Generator) -> Solution:
    idx = rng.choice(instance.n, size=instance.m, replace=False)
    return evaluate_full(instance, idx)


def objective_of(instance: Instance, selected: Iterable[int]) -> float:
    return evaluate_full(instance, selected).objective


def cache_error(sol: Solution, fresh: Optional[Solution] = None) -> float:
    """Largest absolute deviation of the cache from a scratch recomputation."""
    if fresh is None:
        fresh = evaluate_full(sol.instance, sol.inside)
    return max(
        float(np.abs(sol.delta - fresh.delta).max()),
        abs(sol.objective - fresh.objective),
    )
