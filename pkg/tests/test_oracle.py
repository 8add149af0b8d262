import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mindiff.instances import InstanceSpec, generate
from mindiff.model import Instance, evaluate_full, random_solution
from mindiff.oracle import EnumerationLimitError, solve_exact
from mindiff.search import SearchParams, descent, ils_mindiff

from conftest import brute_objective, brute_optimum, instances, random_instance


def test_example_enumeration(tiny4):
    # hand values: f({0,1,2})=2, f({0,1,3})=4, f({0,2,3})=4, f({1,2,3})=3
    for sub, f in [((0, 1, 2), 2), ((0, 1, 3), 4), ((0, 2, 3), 4), ((1, 2, 3), 3)]:
        assert brute_objective(tiny4.dist, sub) == f
    res = solve_exact(tiny4)
    assert res.optimum == 2
    assert res.optimal_subset == (0, 1, 2)
    assert res.subsets_enumerated == 4


def test_m2_lexicographic_tie():
    inst = random_instance(np.random.default_rng(0), 9, 2)
    res = solve_exact(inst)
    assert res.optimum == 0
    assert res.optimal_subset == (0, 1)
    assert res.subsets_enumerated == math.comb(9, 2)


def test_limit_refusal():
    inst = random_instance(np.random.default_rng(0), 30, 10)
    with pytest.raises(EnumerationLimitError, match="30045015"):
        solve_exact(inst, limit=10**6)


@settings(max_examples=40, deadline=None)
@given(instances(max_n=9))
def test_matches_brute_force(inst):
    res = solve_exact(inst)
    f, sub = brute_optimum(inst)
    assert res.optimum == pytest.approx(f, abs=1e-9)
    assert res.optimal_subset == sub
    assert evaluate_full(inst, res.optimal_subset).objective == pytest.approx(res.optimum, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(instances(max_n=9), st.integers(0, 2**32 - 1))
def test_dominance(inst, seed):
    r = np.random.default_rng(seed)
    opt = solve_exact(inst).optimum
    sol = descent(random_solution(inst, r), r)
    assert opt <= sol.objective + 1e-9


@settings(max_examples=30, deadline=None)
@given(instances(max_n=9), st.integers(0, 2**32 - 1))
def test_permutation_invariance(inst, seed):
    perm = np.random.default_rng(seed).permutation(inst.n)
    relabeled = Instance(inst.dist[np.ix_(perm, perm)], inst.m)
    assert solve_exact(relabeled).optimum == pytest.approx(solve_exact(inst).optimum, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(instances(max_n=9), st.sampled_from([0.5, 2.0, 4.0, 10.0]))
def test_scaling_covariance(inst, c):
    base = solve_exact(inst)
    scaled = solve_exact(Instance(inst.dist * c, inst.m))
    assert scaled.optimum == pytest.approx(c * base.optimum, abs=1e-9)
    # powers of two scale exactly, so the argmin is unchanged
    if c in (0.5, 2.0, 4.0):
        assert scaled.optimal_subset == base.optimal_subset


def test_cross_check_against_long_runs():
    inst = generate(InstanceSpec("gkd", 25, 7, seed=11))
    opt = solve_exact(inst).optimum
    found = min(ils_mindiff(inst, SearchParams(t_max=0.5, seed=s)).best_objective for s in range(10))
    assert found == pytest.approx(opt, abs=1e-9)
