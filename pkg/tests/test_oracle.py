import itertools
import math
import random
from pathlib import Path

import numpy as np
import pytest

from fertile_hc.model import HINGE, WAND, FiniteVolume, ModelParams, is_admissible
from fertile_hc.oracle import (OracleBudgetError, agm_classes, agm_fields, all_marginals,
                               check_consistency, enumerate_admissible, exact_marginal,
                               finite_measure, fixture_record, load_fixture, uniform_fields,
                               write_fixture)
from fertile_hc.recursion import AGMPattern, BoundaryField
from fertile_hc.solvers import solve_i3, solve_i4, solve_symmetric, solve_ti

FIXTURE = Path(__file__).parent / "fixtures" / "oracle_v1.json"


def brute_force(graph, volume):
    return [c for c in itertools.product(range(3), repeat=volume.size)
            if is_admissible(graph, volume, c)]


@pytest.mark.parametrize("graph", [WAND, HINGE])
@pytest.mark.parametrize("k,n,root", [(2, 0, "half"), (2, 1, "half"), (2, 2, "half"),
                                      (2, 1, "full"), (3, 1, "half"), (3, 1, "full")])
def test_enumeration_matches_brute_force(graph, k, n, root):
    v = FiniteVolume(k, n, root)
    count, it = enumerate_admissible(graph, v)
    configs = list(it)
    assert count == len(configs) == len(set(configs))
    assert sorted(configs) == brute_force(graph, v)


def test_enumeration_examples():
    assert enumerate_admissible(WAND, FiniteVolume(2, 0))[0] == 3
    c = enumerate_admissible(WAND, FiniteVolume(2, 1, "half"))[0]
    c2 = enumerate_admissible(HINGE, FiniteVolume(2, 1, "half"))[0]
    assert (c, c2) == (12, 17)


def test_budget_refusal():
    v = FiniteVolume(2, 4, "half")     # 31 vertices
    with pytest.raises(OracleBudgetError) as exc:
        enumerate_admissible(WAND, v)
    assert exc.value.required == 3 ** 31
    assert "3^|V|" in str(exc.value)
    with pytest.raises(OracleBudgetError):
        enumerate_admissible(WAND, FiniteVolume(2, 1, "half"), budget=26)


def test_single_vertex_measures():
    v = FiniteVolume(2, 0)
    mu = finite_measure(WAND, v, 1.0, {0: (1.0, 1.0)})
    assert exact_marginal(mu, 0) == pytest.approx((1 / 3, 1 / 3, 1 / 3), abs=1e-15)
    mu = finite_measure(WAND, v, 2.0, {0: (2.0, 2.0)})      # z = z'/lam = 1
    assert exact_marginal(mu, 0) == pytest.approx((0.2, 0.4, 0.4), abs=1e-15)
    with pytest.raises(IndexError):
        exact_marginal(mu, 1)
    with pytest.raises(KeyError):
        finite_measure(WAND, FiniteVolume(2, 1), 1.0, {0: (1.0, 1.0)})


def test_fixture_regression():
    for rec in load_fixture(FIXTURE):
        v = FiniteVolume(rec["k"], rec["n"], rec["root"])
        g = WAND if rec["graph"] == "wand" else HINGE
        z = solve_symmetric(g, ModelParams(rec["k"], rec["lambda"]))
        assert z == pytest.approx(rec["field"], rel=1e-12)
        fields = {x: (z, z) for x in range(v.size)}
        mu = finite_measure(g, v, rec["lambda"], fields)
        assert len(mu) == rec["admissible_count"]
        assert mu.partition == pytest.approx(rec["partition"], rel=1e-12)
        assert all_marginals(mu) == pytest.approx(np.array(rec["marginals"]), abs=1e-12)


def test_fixture_round_trip(tmp_path):
    v = FiniteVolume(2, 1, "half")
    rec = fixture_record(WAND, v, 1.0, uniform_fields(v, (1.0, 1.0)))
    write_fixture(tmp_path / "f.json", [rec])
    assert load_fixture(tmp_path / "f.json") == [rec]


def test_probabilities_sum_and_support():
    v = FiniteVolume(2, 2, "half")
    mu = finite_measure(HINGE, v, 3.0, uniform_fields(v, (0.7, 2.0)))
    assert math.fsum(mu.probabilities.values()) == pytest.approx(1.0, abs=1e-12)
    assert all(is_admissible(HINGE, v, c) for c in mu.probabilities)


def test_partition_counts_configurations():
    v = FiniteVolume(2, 2, "full")
    mu = finite_measure(WAND, v, 1.0, uniform_fields(v, (1.0, 1.0), WAND, 1.0))
    assert mu.partition == enumerate_admissible(WAND, v)[0]


@pytest.mark.parametrize("graph", [WAND, HINGE])
def test_spin_swap_symmetry(graph):
    v = FiniteVolume(2, 2, "half")
    a = finite_measure(graph, v, 1.3, uniform_fields(v, (0.4, 1.9)))
    b = finite_measure(graph.swapped(), v, 1.3, uniform_fields(v, (1.9, 0.4)))
    assert a.partition == pytest.approx(b.partition, rel=1e-13)


def test_symmetric_fields_give_symmetric_marginals():
    v = FiniteVolume(2, 2, "half")
    z = solve_symmetric(HINGE, ModelParams(2, 1.0))
    m = all_marginals(finite_measure(HINGE, v, 1.0, uniform_fields(v, (z, z))))
    assert m[:, 1] == pytest.approx(m[:, 2], abs=1e-15)


@pytest.mark.parametrize("graph", [WAND, HINGE])
@pytest.mark.parametrize("root", ["half", "full"])
def test_consistency_of_ti_fixed_points(graph, root):
    for lam in (0.5, 1.0, 4.0):
        for s in solve_ti(graph, ModelParams(2, lam)).solutions:
            for n in (1, 2):
                v = FiniteVolume(2, n, root)
                assert check_consistency(graph, v, lam, uniform_fields(v, s.z, graph, lam)) <= 1e-12


def test_perturbed_fields_are_inconsistent():
    v = FiniteVolume(2, 2, "half")
    d = check_consistency(WAND, v, 1.0, uniform_fields(v, (1.5, 1.5)))
    assert d > 1e-3
    # deriving the W_{n-1} fields from W_n makes any boundary law consistent
    assert check_consistency(WAND, v, 1.0, uniform_fields(v, (1.5, 1.5)), parent_fields="derived") < 1e-12
    with pytest.raises(ValueError):
        check_consistency(WAND, v, 1.0, uniform_fields(v, (1.5, 1.5)), parent_fields="other")
    with pytest.raises(ValueError):
        check_consistency(WAND, FiniteVolume(2, 0), 1.0, {0: (1.0, 1.0)})


def test_agm_classes_follow_counts():
    v = FiniteVolume(4, 2, "half")
    cls = agm_classes(v, AGMPattern(4, 1, 2))
    assert cls[0] == "z"
    for x in range(v.size):
        kids = [cls[y] for y in v.children(x)]
        if not kids:
            continue
        if cls[x] == "z":
            assert kids == ["z"] + ["t"] * 3
        else:
            assert kids == ["t", "t", "z", "z"]


@pytest.mark.parametrize("k,m,r,lam,n", [(2, 0, 0, 0.5, 2), (3, 1, 0, 0.5, 2), (3, 0, 1, 1.1, 2),
                                         (4, 1, 0, 6.0, 1), (4, 1, 1, 0.5, 1), (4, 2, 0, 1.2, 1)])
def test_consistency_of_i4_fixed_points(k, m, r, lam, n):
    pattern = AGMPattern(k, m, r)
    rep = solve_i4(ModelParams(k, lam), pattern)
    assert rep.count == 3
    for root in ("half", "full"):
        if root == "full" and k == 3 and n == 2:
            continue        # 3^22 configurations, over budget
        v = FiniteVolume(k, n, root)
        for s in rep.solutions:
            f = agm_fields(v, pattern, s.z, s.t, WAND, lam)
            assert check_consistency(WAND, v, lam, f) <= 1e-10


def test_consistency_of_i3_fixed_points():
    rep = solve_i3(ModelParams(4, 2.0), 3)
    v = FiniteVolume(4, 1, "half")
    for s in rep.solutions:
        assert check_consistency(WAND, v, 2.0, agm_fields(v, AGMPattern(4, 3, 3), s.z, s.t)) <= 1e-10


def test_random_fields_are_inconsistent():
    rng = random.Random(11)
    v = FiniteVolume(2, 2, "half")
    hits = 0
    for _ in range(100):
        fields = {x: BoundaryField(math.exp(rng.uniform(-3, 3)), math.exp(rng.uniform(-3, 3)))
                  for x in range(v.size)}
        hits += check_consistency(WAND, v, 1.0, fields) > 1e-4
    assert hits >= 99


def test_full_root_needs_parameters():
    with pytest.raises(ValueError):
        uniform_fields(FiniteVolume(2, 1, "full"), (1.0, 1.0))
