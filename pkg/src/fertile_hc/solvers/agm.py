"""Alternative (two-class) fixed points of the wand recursion on the half-tree.

The general strategy on I3 and I4 is the same.  Dividing the two equations
removes lambda and leaves a curve of candidate points; along that curve the
first equation gives lambda explicitly, so finding all fixed points for a given
lambda is a one-dimensional root count on a tabulated, cached curve.  The
special cases for k = 3 and k = 4 use the closed forms instead (Cardano, the
explicit lambda branch, the quadratic in sqrt(lambda), and the quartic
x^4 - 2 a x^3 + 1) and are cross-checked against the generic route in tests.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np
from scipy.optimize import brentq, root

from ..model import WAND, ModelParams
from ..polynomial import Polynomial, solve_cubic_cardano
from ..recursion import (AGMPattern, WeaklyPeriodicPattern, agm_map, residual,
                         weakly_periodic_map)
from .common import (DEDUP_TOL, FOLD_MERGE_TOL, RESIDUAL_TOL, MonotoneCurve, Solution,
                     SolutionLabel, SolutionReport, assign_swap_pairs, dedupe, near_critical,
                     newton_polish, rel_distance)
from .ti import solve_symmetric, solve_ti

_EPS = float(np.finfo(float).eps)


def _log_r(x: float) -> float:
    """log((1+x)/(2x))."""
    return math.log1p(x) - math.log(2.0 * x)


def _swap_zt(f):
    return (f[2], f[3], f[0], f[1])


def _swap_i3(f):
    return (f[1], f[0], f[3], f[2])


# ---------------------------------------------------------------- I4 ------


def i4_log_lambda(k: int, m: int, z: float, t: float) -> float:
    """log of the activity for which (z, t) satisfies the first I4 equation."""
    return math.log(z) - m * _log_r(z) - (k - m) * _log_r(t)


def _i4_ratio_log(n: int, x: float) -> float:
    # (1 - n) log x + n log(1 + x): equal at z and t iff the two I4 equations agree
    return (1 - n) * math.log(x) + n * math.log1p(x)


def _i4_ratio_offset(n: int, s: float) -> float:
    # ratio log at z0 * e^s minus its minimum at z0, accurate for small s
    return (1 - n) * s + n * math.log1p((n - 1) / n * math.expm1(s))


def _i4_conjugate_offset(n: int, s: float) -> float:
    """Offset s' of opposite sign with equal ratio offset."""
    if s == 0.0:
        return 0.0
    target = _i4_ratio_offset(n, s)
    g = lambda v: _i4_ratio_offset(n, v) - target
    sign = -1.0 if s > 0 else 1.0
    far = abs(s)
    while g(sign * far) < 0:
        far *= 2.0
    lo, hi = sorted((0.0, sign * far))
    return brentq(g, lo, hi, xtol=1e-300, rtol=4 * _EPS, maxiter=400)


def i4_conjugate(n: int, z: float) -> float:
    """The other point t != z with the same value of x^{1-n} (1+x)^n (n >= 2)."""
    z0 = n - 1.0
    return z0 * math.exp(_i4_conjugate_offset(n, math.log(z / z0)))


def _i4_newton(k, m, r, lam, z, t):
    log_lam = math.log(lam)

    def f(u):
        z_, t_ = math.exp(u[0]), math.exp(u[1])
        F = np.array([u[0] - log_lam - m * _log_r(z_) - (k - m) * _log_r(t_),
                      u[1] - log_lam - r * _log_r(t_) - (k - r) * _log_r(z_)])
        J = np.array([[1 + m / (1 + z_), (k - m) / (1 + t_)],
                      [(k - r) / (1 + z_), 1 + r / (1 + t_)]])
        return F, J

    u = newton_polish(f, np.array([math.log(z), math.log(t)]))
    return math.exp(u[0]), math.exp(u[1])


class _I4Curve:
    """The curve z != t with equal I4 ratio, in both orientations (z<t, z>t)."""

    def __init__(self, k: int, m: int, r: int, points: int = 1500):
        self.k, self.m, self.r = k, m, r
        self.n = k - m - r
        self.z0 = self.n - 1.0
        lo, hi = -18.0, 4.0
        # a = z0 * exp(-e^y) < z0 < b = conj(a); orientation A is (z, t) = (a, b)
        self.a_curve = MonotoneCurve(lambda y: self._log_lam(y, False), lo, hi, points)
        self.b_curve = MonotoneCurve(lambda y: self._log_lam(y, True), lo, hi, points)

    @lru_cache(maxsize=None)
    def pair(self, y: float) -> tuple[float, float]:
        s = -math.exp(y)
        return self.z0 * math.exp(s), self.z0 * math.exp(_i4_conjugate_offset(self.n, s))

    def point(self, y: float, flipped: bool) -> tuple[float, float]:
        a, b = self.pair(y)
        return (b, a) if flipped else (a, b)

    def _log_lam(self, y: float, flipped: bool) -> float:
        z, t = self.point(y, flipped)
        return i4_log_lambda(self.k, self.m, z, t)

    @property
    def crossing_lambda(self) -> float:
        z0 = self.z0
        return math.exp(i4_log_lambda(self.k, self.m, z0, z0))

    @property
    def critical_values(self) -> list[float]:
        return self.a_curve.fold_values + self.b_curve.fold_values + [self.crossing_lambda]

    def fold_points(self) -> list[tuple[float, tuple[float, float]]]:
        out = []
        for curve, flipped in ((self.a_curve, False), (self.b_curve, True)):
            for y, v, _ in curve.extrema:
                out.append((math.exp(v), self.point(y, flipped)))
        return out

    def solve(self, lam: float) -> list[tuple[float, float]]:
        target = math.log(lam)
        pts = [self.point(y, False) for y in self.a_curve.solve(target)]
        pts += [self.point(y, True) for y in self.b_curve.solve(target)]
        return pts


@lru_cache(maxsize=None)
def i4_curve(k: int, m: int, r: int) -> _I4Curve:
    if k - m - r < 2:
        raise ValueError("the I4 curve z != t exists only for m + r <= k - 2")
    return _I4Curve(k, m, r)


def lambda3(z: float) -> float:
    """Positive lambda branch of the k=4, (m, r)=(1, 0) reduced equation."""
    # 4z^3 + 9z^2 + 6z + 1 = (1+z)^2 (4z+1)
    return (24.0 * z + 8.0 + 8.0 * (1.0 + z) * math.sqrt(4.0 * z + 1.0)) * z * z / (1.0 + z) ** 4


MAXIMIZER_CUBIC = Polynomial((10, 41, -16, 1))   # z^3 - 16 z^2 + 41 z + 10


def lambda3_maximizer() -> tuple[float, float]:
    """Location and value of the maximum of :func:`lambda3`.

    The stationary points satisfy a squared equation whose admissible roots
    are among those of z^3 - 16 z^2 + 41 z + 10; the one inside the
    squaring bracket is the maximiser.
    """
    lo = (7.0 + math.sqrt(73.0)) / 6.0
    hi = (9.0 + math.sqrt(97.0)) / 4.0
    inside = [z for z in solve_cubic_cardano(MAXIMIZER_CUBIC) if lo <= z <= hi]
    if len(inside) != 1:
        raise ArithmeticError(f"expected one maximiser candidate in bracket, got {inside}")
    z3 = inside[0]
    return z3, lambda3(z3)


PROP2_LAMBDA_CR = Fraction(32, 27)
PROP4_LAMBDA_CR = Fraction(1)
PROP5_LAMBDA_CR = Fraction(27, 16)


def prop2_cubic(lam: float) -> tuple[float, float, float, float]:
    """Descending coefficients of z^3 + (3 - 8/lam) z^2 + 3 z + 1."""
    return (1.0, 3.0 - 8.0 / lam, 3.0, 1.0)


def prop2_depressed(lam: Fraction | float) -> tuple:
    """(p, q) of the depressed cubic y^3 + p y + q after z = y + 8/(3 lam) - 1."""
    p = 16 * (3 * lam - 4) / (3 * lam ** 2)
    q = -8 * (27 * lam ** 2 - 144 * lam + 128) / (27 * lam ** 3)
    return p, q


def prop4_closed_form(lam: float) -> tuple[float, float]:
    s = math.sqrt(lam)
    d = 2.0 * math.sqrt(1.0 - s)
    return (2.0 - s - d) / s, (2.0 - s + d) / s


def _special_i4(k, m, r, lam):
    """Closed-form asymmetric I4 points for the cases worked out by hand.

    Returns (points, critical_values, fold point or None, method) or None if
    (k, m, r) is not special.  Patterns with m < r are handled by swapping
    the z and t classes.
    """
    flip = False
    if (k, m, r) in ((3, 0, 1), (4, 0, 1), (4, 0, 2)):
        m, r, flip = r, m, True
    key = (k, m, r)
    if key == (3, 1, 0):
        lam_c = float(PROP2_LAMBDA_CR)
        fold = (2.0, 0.5)
        if near_critical(lam, [lam_c]) is not None:
            pts = [fold]
        else:
            pts = [(z, 1.0 / z) for z in solve_cubic_cardano(prop2_cubic(lam)) if z > 0]
        crit, method = [lam_c, 1.0], "cardano"
    elif key == (4, 1, 0):
        z3, lam_c = lambda3_maximizer()
        fold = (z3, lam_c * _ipow_r(z3, 4))
        pts = []
        if near_critical(lam, [lam_c]) is not None:
            pts = [fold]
        elif lam < lam_c:
            for lo, hi in ((z3, None), (None, z3)):
                z = _invert_lambda3(lam, lo, hi)
                pts.append((z, lam * _ipow_r(z, 4)))
        crit, method = [lam_c, lambda3(2.0)], "lambda3-branch"
    elif key == (4, 1, 1):
        fold = None
        pts = []
        if lam < 1.0 and near_critical(lam, [1.0]) is None:
            z1, z2 = prop4_closed_form(lam)
            pts = [(z1, z2), (z2, z1)]
        crit, method = [1.0], "closed-form"
    elif key == (4, 2, 0):
        lam_c = float(PROP5_LAMBDA_CR)
        fold = (3.0, 1.0 / 3.0)
        if near_critical(lam, [lam_c]) is not None:
            pts = [fold]
        elif lam < lam_c:
            pts = [(x ** 4, x ** -4) for x in prop5_quartic_roots(lam)]
        else:
            pts = []
        crit, method = [lam_c, 1.0], "quartic"
    else:
        return None
    if flip:
        pts = [(t, z) for z, t in pts]
        fold = None if fold is None else (fold[1], fold[0])
    return pts, crit, fold, method


def _ipow_r(z: float, e: int) -> float:
    return ((1.0 + z) / (2.0 * z)) ** e


def _invert_lambda3(lam: float, lo: float | None, hi: float | None) -> float:
    g = lambda u: math.log(lambda3(math.exp(u))) - math.log(lam)
    if lo is None:
        b = math.log(hi)
        a = b - 1.0
        while g(a) > 0:
            a -= 2.0 * (b - a)
    else:
        a = math.log(lo)
        b = a + 1.0
        while g(b) > 0:
            b += 2.0 * (b - a)
    return math.exp(brentq(g, a, b, xtol=1e-15, rtol=4 * _EPS, maxiter=300))


def prop5_quartic_roots(lam: float) -> list[float]:
    """Positive roots of x^4 - 2 a x^3 + 1 with a = lam^{-1/4}."""
    a = lam ** -0.25
    f = lambda x: x ** 4 - 2.0 * a * x ** 3 + 1.0
    x0 = 1.5 * a
    fmin = 1.0 - 27.0 * a ** 4 / 16.0
    if fmin > 0:
        return []
    if fmin == 0:
        return [x0]
    # f decreases on (0, x0), increases after, f(0) = f(2a) = 1
    return [brentq(f, 0.0, x0, xtol=1e-15, rtol=4 * _EPS),
            brentq(f, x0, 2.0 * a, xtol=1e-15, rtol=4 * _EPS)]


def _agm_label(pattern: AGMPattern, i3: bool) -> SolutionLabel:
    if pattern.m == 0 and pattern.r == 0:
        return SolutionLabel.PERIODIC
    return SolutionLabel.AGM_I3 if i3 else SolutionLabel.AGM_I4


def solve_i4(params: ModelParams, pattern: AGMPattern, method: str = "auto") -> SolutionReport:
    """All fixed points of the wand AGM system on I4 (z1 = z2 = z, t1 = t2 = t).

    ``method`` is ``"auto"`` (closed forms where available), or ``"curve"``
    to force the generic curve scan.
    """
    k, lam = params.k, params.lam
    m, r = pattern.m, pattern.r
    if pattern.k != k:
        raise ValueError("pattern and params disagree on k")
    zs = solve_symmetric(WAND, params)
    sym = (zs, zs, zs, zs)
    candidates: list[tuple[float, float]] = []
    crit_values: list[float] = []
    fold = None
    used = "symmetric-only"
    n = k - m - r
    if n >= 2:
        special = _special_i4(k, m, r, lam) if method == "auto" else None
        if special is not None:
            candidates, crit_values, fold, used = special
        else:
            curve = i4_curve(k, m, r)
            crit_values = curve.critical_values
            candidates = curve.solve(lam)
            if near_critical(lam, [curve.crossing_lambda]) is not None:
                # the conjugate branch passes through the symmetric point here
                candidates = [c for c in candidates
                              if rel_distance(c, (zs, zs)) > FOLD_MERGE_TOL]
            used = "curve-scan"
            hit = near_critical(lam, curve.a_curve.fold_values + curve.b_curve.fold_values)
            if hit is not None:
                fold_pt = min(curve.fold_points(), key=lambda fp: abs(fp[0] - hit))[1]
                candidates = [c for c in candidates
                              if rel_distance(c, fold_pt) > FOLD_MERGE_TOL] + [fold_pt]
                fold = fold_pt
    critical = near_critical(lam, crit_values) is not None

    points = [sym]
    for z, t in candidates:
        if used == "curve-scan" and (z, t) != fold:
            z, t = _i4_newton(k, m, r, lam, z, t)
        points.append((z, z, t, t))
    points = dedupe(points)

    label = _agm_label(pattern, i3=False)
    sols = []
    for idx, p in enumerate(points):
        res = residual(agm_map(params, pattern, p), p)
        lab = SolutionLabel.TI_SYMMETRIC if idx == 0 else label
        sols.append(Solution(tuple(p), res, lab))
    if m == r:
        sols = assign_swap_pairs(sols, _swap_zt)
    return SolutionReport(f"I4({m},{r})", k, lam, sols, m=m, r=r, critical=critical,
                          critical_values=tuple(sorted(set(crit_values))), method=used)


# ---------------------------------------------------------------- I3 ------


def w_polynomial_value(n: int, z1: float, z2: float) -> float:
    """z1 z2 sum_{j=2}^{n} C(n, j) h_{j-2}(z1, z2) - 1, h the complete symmetric sum."""
    total = 0.0
    for j in range(2, n + 1):
        d = j - 2
        h = math.fsum(z1 ** i * z2 ** (d - i) for i in range(d + 1))
        total += comb(n, j) * h
    return z1 * z2 * total - 1.0


def w_polynomial_in_z1(n: int, z2: Fraction | int) -> Polynomial:
    """w(., z2) as an exact polynomial in z1 for rational z2."""
    coeffs = [Fraction(0)] * n
    for j in range(2, n + 1):
        d = j - 2
        for i in range(d + 1):
            coeffs[i + 1] += comb(n, j) * Fraction(z2) ** (d - i + 1)
    coeffs[0] -= 1
    return Polynomial(coeffs)


def _w_root(n: int, z2: float, hi: float) -> float:
    """Unique positive z1 with w(z1, z2) = 0 (w is increasing in z1)."""
    return brentq(lambda x: w_polynomial_value(n, x, z2), 0.0, hi,
                  xtol=1e-300, rtol=4 * _EPS, maxiter=500)


def _i3_log_lambda(k, m, z1, z2):
    s = z1 + z2
    return math.log(z1) - m * (math.log1p(z1) - math.log(s)) - (k - m) * (math.log1p(z2) - math.log(s))


def _i3_newton(k, m, lam, z1, z2):
    log_lam = math.log(lam)

    def f(u):
        a, b = math.exp(u[0]), math.exp(u[1])
        s = a + b
        F = np.array([
            u[0] - log_lam - m * math.log1p(a) - (k - m) * math.log1p(b) + k * math.log(s),
            u[1] - log_lam - m * math.log1p(b) - (k - m) * math.log1p(a) + k * math.log(s)])
        J = np.array([
            [1 - m * a / (1 + a) + k * a / s, -(k - m) * b / (1 + b) + k * b / s],
            [-(k - m) * a / (1 + a) + k * a / s, 1 - m * b / (1 + b) + k * b / s]])
        return F, J

    u = newton_polish(f, np.array([math.log(z1), math.log(z2)]))
    return math.exp(u[0]), math.exp(u[1])


class _I3Curve:
    def __init__(self, k: int, m: int, points: int = 1500):
        self.k, self.m = k, m
        self.n = n = 2 * m - k
        self.c = brentq(lambda x: w_polynomial_value(n, x, x), 1e-12, 1e3, xtol=1e-300,
                        rtol=4 * _EPS)
        hi = math.log(min(50.0, 600.0 / (n + k)))
        self.curve = MonotoneCurve(self._log_lam, -18.0, hi, points)

    @lru_cache(maxsize=None)
    def point(self, y: float) -> tuple[float, float]:
        s = self.c * math.exp(math.exp(y))
        return _w_root(self.n, s, self.c), s

    def _log_lam(self, y: float) -> float:
        z1, z2 = self.point(y)
        return _i3_log_lambda(self.k, self.m, z1, z2)

    @property
    def crossing_lambda(self) -> float:
        return math.exp(_i3_log_lambda(self.k, self.m, self.c, self.c))

    @property
    def critical_values(self) -> list[float]:
        return self.curve.fold_values + [self.crossing_lambda]

    def solve(self, lam: float) -> list[tuple[float, float]]:
        return [self.point(y) for y in self.curve.solve(math.log(lam))]


@lru_cache(maxsize=None)
def i3_curve(k: int, m: int) -> _I3Curve:
    if not 2 * k > 2 * m >= k + 2:
        raise ValueError("the asymmetric I3 curve exists only for 2k > 2m >= k + 2")
    return _I3Curve(k, m)


def prop1_lambda(z2: float) -> float:
    """Activity along z1 z2 = 1 for k = 4, m = 3."""
    return (z2 * z2 + 1.0) ** 4 / (z2 * z2 * (z2 + 1.0) ** 4)


def solve_i3(params: ModelParams, m: int) -> SolutionReport:
    """All fixed points of the wand AGM system on I3 with r = m."""
    k, lam = params.k, params.lam
    if not 0 <= m <= k:
        raise ValueError(f"need 0 <= m <= k, got m={m}")
    pattern = AGMPattern(k, m, m)
    if m == k:
        # every child inherits its parent's class: the system is the TI one
        rep = solve_ti(WAND, params)
        sols = [Solution((s.fields[0], s.fields[1], s.fields[1], s.fields[0]), s.residual,
                         s.label, s.pairing) for s in rep.solutions]
        return SolutionReport(f"I3({m})", k, lam, sols, m=m, r=m, critical=rep.critical,
                              critical_values=rep.critical_values, method="ti-reduction",
                              notes=["m = k: all vertices carry the same class; solutions are TI"])
    zs = solve_symmetric(WAND, params)
    points = [(zs, zs, zs, zs)]
    crit_values: list[float] = []
    critical = False
    used = "symmetric-only"
    if 2 * k > 2 * m >= k + 2:
        curve = i3_curve(k, m)
        crit_values = curve.critical_values
        critical = near_critical(lam, crit_values) is not None
        used = "w-curve"
        if near_critical(lam, [curve.crossing_lambda]) is None:
            for z1, z2 in curve.solve(lam):
                z1, z2 = _i3_newton(k, m, lam, z1, z2)
                points.append((z1, z2, z2, z1))
                points.append((z2, z1, z1, z2))
    points = dedupe(points)
    sols = []
    for idx, p in enumerate(points):
        res = residual(agm_map(params, pattern, p), p)
        label = SolutionLabel.TI_SYMMETRIC if idx == 0 else _agm_label(pattern, i3=True)
        sols.append(Solution(tuple(p), res, label))
    sols = assign_swap_pairs(sols, _swap_i3)
    return SolutionReport(f"I3({m})", k, lam, sols, m=m, r=m, critical=critical,
                          critical_values=tuple(sorted(set(crit_values))), method=used)


# ------------------------------------------------------ weakly periodic ---


def embed_i3_weakly_periodic(fields4) -> tuple[float, ...]:
    """(z, t) on the AGM side -> (z, t, q, p) with q = t and p = z."""
    z1, z2, t1, t2 = fields4
    return (z1, z2, t1, t2, t1, t2, z1, z2)


def _agm_multistart(params: ModelParams, pattern: AGMPattern, grid: np.ndarray):
    log_lam = math.log(params.lam)

    def f(u):
        x = np.exp(u)
        img = agm_map(params, pattern, x)
        return np.log(img) - u

    out = []
    for u0 in itertools.product(grid, repeat=4):
        sol = root(f, np.array(u0) + log_lam, method="hybr", options={"xtol": 1e-14})
        if sol.success and np.all(np.isfinite(sol.x)):
            p = tuple(float(v) for v in np.exp(sol.x))
            if residual(agm_map(params, pattern, p), p) <= RESIDUAL_TOL:
                out.append(p)
    return dedupe(out, 1e-7)


def solve_weakly_periodic(params: ModelParams, i: int, search: bool = False) -> SolutionReport:
    """Weakly periodic fixed points restricted to I3 (z = p, q = t).

    On that set the eight equations coincide with the AGM system for the
    pattern (k - i, i - 1).  Solutions in I1/I2 are the TI ones; those in I4
    come from :func:`solve_i4`.  With ``search=True`` a multi-start root search
    on the full 4-dimensional AGM system is added.
    """
    wp = WeaklyPeriodicPattern(params.k, i)
    pattern = wp.agm_pattern()
    ti = solve_ti(WAND, params)
    points = [s.fields for s in ti.solutions]
    labels = [s.label for s in ti.solutions]
    i4 = solve_i4(params, pattern)
    for s in i4.solutions[1:]:
        points.append(s.fields)
        labels.append(SolutionLabel.WEAKLY_PERIODIC)
    if search:
        for p in _agm_multistart(params, pattern, np.linspace(-3.0, 3.0, 4)):
            points.append(p)
            labels.append(SolutionLabel.WEAKLY_PERIODIC)
    keep = []
    for p, lab in zip(points, labels):
        if all(rel_distance(p, q) > DEDUP_TOL for q, _ in keep):
            keep.append((p, lab))
    sols = []
    for p, lab in keep:
        p8 = embed_i3_weakly_periodic(p)
        res = residual(weakly_periodic_map(params, wp, p8), p8)
        sols.append(Solution(p8, res, lab))
    return SolutionReport(f"WP({i})", params.k, params.lam, sols, m=pattern.m, r=pattern.r,
                          critical=ti.critical or i4.critical,
                          critical_values=tuple(sorted(set(ti.critical_values + i4.critical_values))),
                          method="ti+i4" + ("+multistart" if search else ""))

