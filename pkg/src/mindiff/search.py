"""Iterated local search for Min-Diff DP.

Three phases repeated until the time budget runs out: best-improvement
descent, local optima exploring (weak perturbation + descent) and a strong
random perturbation to escape the current region.

All randomness comes from one ``numpy.random.Generator`` seeded from
``SearchParams.seed``.  It is consumed in this order: initial subsets and the
tie-breaks of their descents, then per cycle the descent tie-breaks, the
weak-perturbation draws and the escape swaps.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .model import (
    TOL,
    ConfigurationError,
    Instance,
    Solution,
    apply_swap,
    evaluate_full,
    neighborhood_gains,
    random_solution,
    sampled_gains,
)

DEFAULT_SEED = 20170101


@dataclass(frozen=True)
class SearchParams:
    t_max: float
    nbr_max: int = 5
    p_w: int = 3
    alpha: float = 1.0
    seed: int = DEFAULT_SEED
    init_restarts: int = 10
    random_init_threshold: int = 3000
    # optional extra stopping rules, both off by default
    max_iterations: Optional[int] = None
    target: Optional[float] = None

    def __post_init__(self):
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise ConfigurationError(f"t_max must be a positive number of seconds, got {self.t_max}")
        for name in ("nbr_max", "p_w", "init_restarts", "random_init_threshold"):
            if int(getattr(self, name)) < 1:
                raise ConfigurationError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not 1.0 <= self.alpha < 2.0:
            raise ConfigurationError(f"alpha must lie in [1.0, 2.0), got {self.alpha}")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be >= 1")


@dataclass
class SearchStats:
    descent_calls: int = 0
    descent_iterations: int = 0
    gain_evaluations: int = 0
    moves_applied: int = 0
    explore_cycles: int = 0


@dataclass
class RunResult:
    best_solution: Solution
    best_objective: float
    elapsed_to_best: float
    elapsed_total: float
    iterations: int
    seed: int
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def selected(self) -> tuple:
        return self.best_solution.selected


def default_params_for(instance: Instance, **overrides) -> SearchParams:
    """Time limit n seconds, depth 5, alpha 1.0; p_w=3 for small or dense instances, else 2."""
    n, m = instance.n, instance.m
    p_w = 3 if n < 500 or (n == 500 and n < 10 * m) else 2
    kw = dict(t_max=float(n), nbr_max=5, p_w=p_w, alpha=1.0)
    kw.update(overrides)
    return SearchParams(**kw)


def strong_strength(n: int, m: int, alpha: float) -> int:
    # epsilon guards values like 1.3 * 30 / 3 = 12.999999999999998
    return max(1, math.floor(alpha * n / m + 1e-9))


def _expired(deadline: Optional[float]) -> bool:
    return deadline is not None and time.monotonic() >= deadline


def _pick_min(values: np.ndarray, rng: np.random.Generator) -> int:
    """Flat index of a minimum of ``values``, ties broken uniformly at random."""
    flat = values.ravel()
    best = flat.min()
    ties = np.flatnonzero(flat <= best + TOL)
    if ties.size == 1:
        return int(ties[0])
    return int(ties[rng.integers(ties.size)])


def descent(sol: Solution, rng: np.random.Generator, deadline: Optional[float] = None,
            stats: Optional[SearchStats] = None) -> Solution:
    """Best-improvement swap descent, in place, until no move has negative gain."""
    if stats is not None:
        stats.descent_calls += 1
    while True:
        gains = neighborhood_gains(sol)
        if stats is not None:
            stats.descent_iterations += 1
            stats.gain_evaluations += gains.size
        if gains.min() >= -TOL:
            return sol
        i, j = divmod(_pick_min(gains, rng), gains.shape[1])
        apply_swap(sol, int(sol.inside[i]), int(sol.outside[j]))
        if stats is not None:
            stats.moves_applied += 1
        if _expired(deadline):
            return sol


def weak_perturb(sol: Solution, p_w: int, rng: np.random.Generator) -> Solution:
    """Apply ``p_w`` times the best of n+1 random swaps, whatever its sign."""
    n = sol.instance.n
    for _ in range(p_w):
        ps = sol.inside[rng.integers(sol.inside.size, size=n + 1)]
        qs = sol.outside[rng.integers(sol.outside.size, size=n + 1)]
        k = _pick_min(sampled_gains(sol, ps, qs), rng)
        apply_swap(sol, int(ps[k]), int(qs[k]))
    return sol


def explore_local_optima(sol: Solution, params: SearchParams, rng: np.random.Generator,
                         deadline: Optional[float] = None,
                         stats: Optional[SearchStats] = None) -> Solution:
    """Perturb-and-descend around ``sol`` until ``nbr_max`` cycles bring no improvement.

    ``sol`` itself keeps following the perturbed trajectory; the best local
    optimum seen is returned as a separate copy.
    """
    best = sol.copy()
    nbr = 0
    while nbr < params.nbr_max and not _expired(deadline):
        weak_perturb(sol, params.p_w, rng)
        descent(sol, rng, deadline, stats)
        if stats is not None:
            stats.explore_cycles += 1
        if sol.objective < best.objective - TOL:
            best = sol.copy()
            nbr = 0
        else:
            nbr += 1
    return best


def escape(sol: Solution, params: SearchParams, rng: np.random.Generator) -> Solution:
    """Apply floor(alpha*n/m) (at least one) uniformly random swaps."""
    inst = sol.instance
    for _ in range(strong_strength(inst.n, inst.m, params.alpha)):
        p = sol.inside[rng.integers(sol.inside.size)]
        q = sol.outside[rng.integers(sol.outside.size)]
        apply_swap(sol, int(p), int(q))
    return sol


def initialize(instance: Instance, params: SearchParams, rng: np.random.Generator,
               deadline: Optional[float] = None,
               stats: Optional[SearchStats] = None) -> Solution:
    """Best of ``init_restarts`` descents from random subsets (one random subset for large n)."""
    if instance.n >= params.random_init_threshold:
        return random_solution(instance, rng)
    best = None
    for _ in range(params.init_restarts):
        sol = descent(random_solution(instance, rng), rng, deadline, stats)
        if best is None or sol.objective < best.objective:
            best = sol
        if _expired(deadline):
            break
    return best


def ils_mindiff(instance: Instance, params: SearchParams) -> RunResult:
    if not params.t_max > 0:
        raise ConfigurationError("t_max must be positive")
    rng = np.random.default_rng(params.seed)
    stats = SearchStats()
    start = time.monotonic()
    deadline = start + params.t_max

    def reached_target(s: Solution) -> bool:
        return params.target is not None and s.objective <= params.target + TOL

    sol = initialize(instance, params, rng, deadline, stats)
    best = sol.copy()
    t_best = time.monotonic() - start
    iterations = 0
    while not _expired(deadline) and not reached_target(best):
        if params.max_iterations is not None and iterations >= params.max_iterations:
            break
        iterations += 1
        descent(sol, rng, deadline, stats)
        sol = explore_local_optima(sol, params, rng, deadline, stats)
        if sol.objective < best.objective - TOL:
            best = sol.copy()
            t_best = time.monotonic() - start
        escape(sol, params, rng)
    elapsed = time.monotonic() - start
    # report the best subset re-evaluated from scratch, free of cache drift
    final = evaluate_full(instance, best.inside)
    return RunResult(
        best_solution=final,
        best_objective=final.objective,
        elapsed_to_best=t_best,
        elapsed_total=elapsed,
        iterations=iterations,
        seed=params.seed,
        stats=stats,
    )
