import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mindiff.instances import FAMILIES, InstanceSpec, ParseError, generate, read_instance, write_instance
from mindiff.model import ConfigurationError
from mindiff.oracle import solve_exact

from conftest import brute_objective


def test_upper_triangle_layout(tmp_path, tiny4):
    f = tmp_path / "a.txt"
    f.write_text("4 2\n1 2 4\n3 5\n6\n")
    inst = read_instance(f)
    assert inst.m == 2
    np.testing.assert_array_equal(inst.dist, tiny4.dist)


def test_triple_layout(tmp_path, tiny4):
    f = tmp_path / "b.txt"
    f.write_text("4 2\n0 1 1.0\n0 2 2.0\n0 3 4.0\n1 2 3.0\n1 3 5.0\n2 3 6.0\n")
    np.testing.assert_array_equal(read_instance(f).dist, tiny4.dist)


def test_triple_layout_one_based(tmp_path, tiny4):
    f = tmp_path / "c.txt"
    f.write_text("4 3\n1 2 1\n1 3 2\n1 4 4\n2 3 3\n2 4 5\n3 4 6\n")
    inst = read_instance(f)
    np.testing.assert_array_equal(inst.dist, tiny4.dist)
    assert inst.m == 3


def test_lower_triangle_triples_are_mirrored(tmp_path, tiny4):
    f = tmp_path / "d.txt"
    f.write_text("4 2\n1 0 1\n2 0 2\n3 0 4\n2 1 3\n3 1 5\n3 2 6\n")
    np.testing.assert_array_equal(read_instance(f).dist, tiny4.dist)


def test_m_override_and_missing_m(tmp_path):
    f = tmp_path / "e.txt"
    f.write_text("4\n1 2 4 3 5 6\n")
    with pytest.raises(ConfigurationError):
        read_instance(f)
    assert read_instance(f, m_override=3).m == 3
    g = tmp_path / "g.txt"
    g.write_text("4 2\n1 2 4 3 5 6\n")
    assert read_instance(g, m_override=3).m == 3


@pytest.mark.parametrize("body,match", [
    ("1 2 3", "expected 6 distances or 18"),
    ("0 1 1\n0 2 2\n0 3 4\n1 2 3\n1 3 5\n2 9 6", "out of range"),
    ("1 2 x 3 5 6", "could not convert"),
])
def test_parse_errors(tmp_path, body, match):
    f = tmp_path / "bad.txt"
    f.write_text("4 2\n" + body + "\n")
    with pytest.raises(ParseError, match=match):
        read_instance(f)


def test_zero_distance_warns(tmp_path):
    f = tmp_path / "z.txt"
    f.write_text("3 2\n0 1 2\n")
    with pytest.warns(UserWarning):
        read_instance(f)


def test_round_trip(tmp_path, tiny4):
    f = tmp_path / "t.txt"
    write_instance(tiny4, f)
    assert f.read_text().splitlines()[0] == "4 3"
    back = read_instance(f)
    np.testing.assert_array_equal(back.dist, tiny4.dist)
    assert back.m == tiny4.m


@pytest.mark.parametrize("family", FAMILIES)
def test_round_trip_generated(tmp_path, family):
    inst = generate(InstanceSpec(family, 50, 10, seed=4))
    f = tmp_path / "g.txt"
    write_instance(inst, f)
    back = read_instance(f)
    assert back.n == 50 and back.m == 10
    assert np.array_equal(back.dist, inst.dist)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(3, 40), st.integers(0, 2**32 - 1))
def test_generator_invariants(family, n, seed):
    spec = InstanceSpec(family, n, 2, seed)
    a, b = generate(spec), generate(spec)
    assert np.array_equal(a.dist, b.dist)
    d = a.dist
    assert np.array_equal(d, d.T)
    assert np.all(np.diag(d) == 0)
    assert np.all(d[~np.eye(n, dtype=bool)] > 0)
    hi = {"som": 9, "gkd": 10 * math.sqrt(2), "mdg-a": 10, "mdg-b": 1000, "mdg-c": 1000}[family]
    assert d.max() <= hi


def test_gkd_geometry():
    d = generate(InstanceSpec("gkd", 30, 5, seed=9)).dist
    assert d.max() <= 10 * math.sqrt(2)
    for i, j, k in itertools.permutations(range(30), 3):
        assert d[i, k] <= d[i, j] + d[j, k] + 0.02


def test_integer_families_have_integer_objectives():
    for fam in ("som", "mdg-c"):
        inst = generate(InstanceSpec(fam, 10, 4, seed=2))
        for sub in itertools.combinations(range(10), 4):
            f = brute_objective(inst.dist, sub)
            assert f == int(f)


def test_two_decimal_families():
    for fam in ("gkd", "mdg-a", "mdg-b"):
        d = generate(InstanceSpec(fam, 20, 4, seed=1)).dist
        assert np.allclose(np.round(d * 100), d * 100)


def test_spec_validation():
    with pytest.raises(ConfigurationError):
        InstanceSpec("tsp", 10, 3)
    with pytest.raises(ConfigurationError):
        InstanceSpec("gkd", 10, 10)


def test_generated_m2_optimum_zero():
    assert solve_exact(generate(InstanceSpec("gkd", 25, 2, seed=1))).optimum == 0
