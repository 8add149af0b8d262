import itertools
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

from mindiff.model import Instance

DATA = Path(__file__).parent / "data"


def brute_objective(dist, subset):
    """f(S) straight from the definition, in plain Python."""
    sums = [sum(float(dist[u][v]) for v in subset if v != u) for u in subset]
    return max(sums) - min(sums)


def brute_optimum(inst):
    best = None
    for sub in itertools.combinations(range(inst.n), inst.m):
        f = brute_objective(inst.dist, sub)
        if best is None or f < best[0] - 1e-9:
            best = (f, sub)
    return best


def random_instance(rng, n, m, integer=False):
    if integer:
        vals = rng.integers(1, 10, size=(n, n)).astype(float)
    else:
        vals = np.round(rng.uniform(0.01, 10.0, size=(n, n)), 2)
    d = np.triu(vals, 1)
    return Instance(d + d.T, m)


@st.composite
def instances(draw, min_n=4, max_n=10):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(2, n - 1))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_instance(np.random.default_rng(seed), n, m, integer=draw(st.booleans()))


@pytest.fixture
def tiny4():
    """n=4 instance with d01=1, d02=2, d03=4, d12=3, d13=5, d23=6 and m=3."""
    d = np.zeros((4, 4))
    for (i, j), v in {(0, 1): 1, (0, 2): 2, (0, 3): 4, (1, 2): 3, (1, 3): 5, (2, 3): 6}.items():
        d[i, j] = d[j, i] = v
    return Instance(d, 3, name="tiny4")


@pytest.fixture
def tri3():
    d = np.array([[0, 1, 2], [1, 0, 3], [2, 3, 0]], dtype=float)
    return Instance(d, 2, name="tri3")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
