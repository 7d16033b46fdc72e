import math
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq

from fertile_hc.model import ModelParams
from fertile_hc.polynomial import count_positive_roots, solve_cubic_cardano
from fertile_hc.recursion import AGMPattern, agm_map, residual, weakly_periodic_map, WeaklyPeriodicPattern
from fertile_hc.solvers import (SolutionLabel, lambda3, lambda3_maximizer, prop1_lambda,
                                prop4_closed_form, prop5_quartic_roots, solve_i3, solve_i4,
                                solve_weakly_periodic, w_polynomial_in_z1, w_polynomial_value)
from fertile_hc.solvers.agm import (MAXIMIZER_CUBIC, i4_conjugate, prop2_cubic,
                                    prop2_depressed)
from fertile_hc.phase import _multistart_i3, _multistart_i4


def i4_elimination_roots(k, m, r, lam):
    """Independent count of I4 solutions z != t by eliminating t.

    The first equation gives (1+t)/(2t) = c(z) explicitly, hence t(z); the
    second equation's defect is scanned for sign changes on a dense grid.
    """
    def defect(u):
        z = math.exp(u)
        rz = (1 + z) / (2 * z)
        if k == m:
            return None
        c = (z / (lam * rz ** m)) ** (1.0 / (k - m))
        if c <= 0.5:
            return None
        t = 1.0 / (2 * c - 1)
        return math.log(t) - math.log(lam) - r * math.log(c) - (k - r) * math.log(rz)

    us = np.linspace(-25, 25, 200001)
    vals = [defect(float(u)) for u in us]
    roots = []
    for i in range(len(us) - 1):
        a, b = vals[i], vals[i + 1]
        if a is None or b is None or a == 0 or (a > 0) == (b > 0):
            continue
        u = brentq(lambda x: defect(x), us[i], us[i + 1], xtol=1e-14)
        z = math.exp(u)
        rz = (1 + z) / (2 * z)
        c = (z / (lam * rz ** m)) ** (1.0 / (k - m))
        roots.append((z, 1.0 / (2 * c - 1)))
    return roots


# ------------------------------------------------------------------ I4 ---

def test_prop2_fold_point():
    rep = solve_i4(ModelParams(3, 32 / 27), AGMPattern(3, 1, 0))
    assert rep.count == 2 and rep.critical
    assert rep.solutions[1].z == pytest.approx((2.0, 2.0), abs=1e-12)
    assert rep.solutions[1].t == pytest.approx((0.5, 0.5), abs=1e-12)
    assert rep.max_residual <= 1e-10


@pytest.mark.parametrize("lam", [0.1, 0.5, 0.9, 1.1, 1.18])
def test_prop2_vieta(lam):
    roots = solve_cubic_cardano(prop2_cubic(lam))
    assert sum(roots) == pytest.approx(8 / lam - 3, rel=1e-9)
    pair = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
    assert pair == pytest.approx(3.0, rel=1e-9)
    assert np.prod(roots) == pytest.approx(-1.0, rel=1e-9)


def test_prop2_depressed_cubic_double_root():
    p, q = prop2_depressed(Fraction(32, 27))
    assert (p, q) == (Fraction(-27, 16), Fraction(27, 32))
    ys = solve_cubic_cardano((1, 0, float(p), float(q)))
    assert ys == pytest.approx([-1.5, 0.75, 0.75], abs=1e-9)
    # the shift z = y + 8/(3 lam) - 1 maps y = 3/4 to the fold point z = 2
    assert 0.75 + 8 / (3 * Fraction(32, 27)) - 1 == 2


def test_prop2_depressed_matches_cubic_for_any_lambda():
    for lam in [Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(7, 3)]:
        p, q = prop2_depressed(lam)
        shift = Fraction(8, 3) / lam - 1
        for y in [Fraction(-2), Fraction(0), Fraction(1, 3), Fraction(5)]:
            z = y + shift
            cubic = z ** 3 + (3 - 8 / lam) * z ** 2 + 3 * z + 1
            assert cubic == y ** 3 + p * y + q


def test_prop3_values():
    z3, lam3 = lambda3_maximizer()
    assert z3 == pytest.approx(3.510929776, abs=1e-6)
    assert lam3 == pytest.approx(6.913562404, abs=1e-6)
    assert count_positive_roots(MAXIMIZER_CUBIC) == 2
    # maximum: nearby values are smaller
    assert lambda3(z3 * 1.001) < lam3 and lambda3(z3 / 1.001) < lam3
    assert lambda3(2.0) == pytest.approx(512 / 81, rel=1e-14)


def test_prop3_fold():
    z3, lam3 = lambda3_maximizer()
    rep = solve_i4(ModelParams(4, lam3), AGMPattern(4, 1, 0))
    assert rep.count == 2 and rep.critical
    assert rep.solutions[1].fields[0] == pytest.approx(z3, rel=1e-9)


def test_prop4_closed_form_values():
    z1, z2 = prop4_closed_form(0.64)
    # (2 - 0.8 -+ 2 sqrt(0.2)) / 0.8
    assert (z1, z2) == pytest.approx((0.3819660112501051, 2.618033988749895), rel=1e-14)
    assert z1 * z2 == pytest.approx(1.0, abs=1e-12)
    pt = (z1, z1, z2, z2)
    assert residual(agm_map(ModelParams(4, 0.64), AGMPattern(4, 1, 1), pt), pt) < 1e-12
    assert solve_i4(ModelParams(4, 0.64), AGMPattern(4, 1, 1)).count == 3


def test_prop5_values():
    rep = solve_i4(ModelParams(4, 27 / 16), AGMPattern(4, 2, 0))
    assert rep.count == 2 and rep.critical
    assert rep.solutions[1].z == pytest.approx((3.0, 3.0), rel=1e-12)
    assert prop5_quartic_roots(2.0) == []
    xs = prop5_quartic_roots(1.2)
    a = 1.2 ** -0.25
    assert all(abs(x ** 4 - 2 * a * x ** 3 + 1) < 1e-12 for x in xs) and len(xs) == 2


@pytest.mark.parametrize("k,m,r", [(3, 1, 0), (3, 0, 1), (4, 1, 0), (4, 0, 1), (4, 1, 1),
                                   (4, 2, 0), (4, 0, 2)])
def test_closed_forms_agree_with_curve_scan(k, m, r):
    pattern = AGMPattern(k, m, r)
    for lam in [0.05, 0.3, 0.8, 0.999, 1.05, 1.5, 3.0, 6.0, 6.5, 6.9, 8.0]:
        a = solve_i4(ModelParams(k, lam), pattern)
        b = solve_i4(ModelParams(k, lam), pattern, method="curve")
        assert a.count == b.count, lam
        for s in a.solutions:
            assert any(max(abs(u - v) / v for u, v in zip(s.fields, o.fields)) < 1e-7
                       for o in b.solutions)


@pytest.mark.parametrize("k,m,r,lam", [(5, 1, 0, 1.0), (5, 1, 0, 23.0), (5, 2, 1, 0.8),
                                       (6, 1, 2, 2.0), (3, 0, 0, 3.0), (5, 0, 0, 10.0),
                                       (6, 2, 2, 0.5), (4, 0, 0, 2.0)])
def test_generic_i4_against_elimination_oracle(k, m, r, lam):
    rep = solve_i4(ModelParams(k, lam), AGMPattern(k, m, r))
    asym = [s for s in rep.solutions if s.label is not SolutionLabel.TI_SYMMETRIC]
    oracle = [p for p in i4_elimination_roots(k, m, r, lam) if abs(p[0] - p[1]) > 1e-6 * max(p)]
    assert len(asym) == len(oracle)
    for z, t in oracle:
        assert any(abs(s.fields[0] - z) / z < 1e-8 and abs(s.fields[2] - t) / t < 1e-8 for s in asym)
    assert rep.max_residual <= 1e-10


@pytest.mark.parametrize("k,m,r", [(4, 2, 1), (4, 3, 0), (5, 2, 2), (3, 1, 1), (2, 1, 0)])
def test_no_asymmetric_i4_when_m_plus_r_large(k, m, r):
    for lam in [0.01, 0.5, 1.0, 2.0, 50.0]:
        assert solve_i4(ModelParams(k, lam), AGMPattern(k, m, r)).count == 1


def test_i4_conjugate_property():
    for n in (2, 3, 5):
        for z in (1e-6, 0.3, n - 1.0 - 1e-4, n - 1 + 1e-3, 40.0):
            t = i4_conjugate(n, z)
            g = lambda x: (1 - n) * math.log(x) + n * math.log1p(x)
            assert g(t) == pytest.approx(g(z), rel=1e-10, abs=1e-12)
            assert (z - (n - 1)) * (t - (n - 1)) <= 0


def test_periodic_label():
    rep = solve_i4(ModelParams(2, 0.5), AGMPattern(2, 0, 0))
    assert [s.label for s in rep.solutions][1:] == [SolutionLabel.PERIODIC] * 2


# ------------------------------------------------------------------ I3 ---

def test_w_polynomial():
    assert w_polynomial_value(2, 3.0, 0.5) == pytest.approx(0.5)
    assert w_polynomial_in_z1(2, 2).coeffs == (-1, 2)
    assert count_positive_roots(w_polynomial_in_z1(2, 2)) == 1
    for n in range(2, 7):
        for z2 in (Fraction(1, 3), Fraction(2), Fraction(7, 2)):
            p = w_polynomial_in_z1(n, z2)
            assert count_positive_roots(p) == 1
            assert p(Fraction(5, 4)) == pytest.approx(w_polynomial_value(n, 1.25, float(z2)))


def test_prop1_examples():
    rep = solve_i3(ModelParams(4, 2.0), 3)
    assert rep.count == 3
    for s in rep.solutions[1:]:
        assert s.fields[0] * s.fields[1] == pytest.approx(1.0, abs=1e-10)
        assert s.label is SolutionLabel.AGM_I3
    assert solve_i3(ModelParams(4, 0.5), 3).count == 1
    assert solve_i3(ModelParams(4, 1.0), 3).critical
    assert prop1_lambda(2.0) == pytest.approx(625 / 324, rel=1e-14)


@pytest.mark.parametrize("k,m", [(5, 3), (5, 2), (4, 2), (6, 3), (3, 2)])
def test_no_asymmetric_i3_when_k_ge_2m_minus_1(k, m):
    for lam in [0.01, 0.5, 1.0, 3.0, 100.0]:
        assert solve_i3(ModelParams(k, lam), m).count == 1


@pytest.mark.parametrize("k,m,lam", [(4, 3, 2.0), (5, 4, 1.0), (6, 4, 3.0), (6, 5, 5.0), (7, 5, 2.0)])
def test_i3_against_multistart(k, m, lam):
    rep = solve_i3(ModelParams(k, lam), m)
    found = _multistart_i3(k, m, lam, span=10.0, starts=15)
    assert rep.count == len(found)
    for z1, z2 in found:
        assert any(abs(s.fields[0] - z1) / z1 < 1e-7 and abs(s.fields[1] - z2) / z2 < 1e-7
                   for s in rep.solutions)


def test_i3_m_equal_k_is_ti():
    rep = solve_i3(ModelParams(4, 1 / 40), 4)
    assert rep.count == 3


# -------------------------------------------------------- weakly periodic ---

@pytest.mark.parametrize("k,i,lam", [(3, 1, 0.5), (3, 2, 1.1), (4, 2, 1.2), (4, 4, 3.0)])
def test_weakly_periodic_solutions_are_fixed_points(k, i, lam):
    rep = solve_weakly_periodic(ModelParams(k, lam), i)
    pattern = WeaklyPeriodicPattern(k, i)
    for s in rep.solutions:
        assert len(s.fields) == 8
        assert residual(weakly_periodic_map(ModelParams(k, lam), pattern, s.fields), s.fields) < 1e-10


def test_two_periodic_k3_threshold():
    # (0, 0) is the two-periodic system; its non-TI branch meets z = t = 2 at 128/27
    pat = AGMPattern(3, 0, 0)
    lam_c = 128 / 27
    assert solve_i4(ModelParams(3, lam_c), pat).critical
    assert solve_i4(ModelParams(3, 0.99 * lam_c), pat).count == 3
    assert solve_i4(ModelParams(3, 1.01 * lam_c), pat).count == 1
    ms = _multistart_i4(3, 0, 0, 0.99 * lam_c)
    assert sum(abs(z - t) > 1e-6 for z, t in ms) == 2
