"""Translation-invariant fixed points for the wand and hinge graphs."""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, root

from ..model import HINGE, WAND, ActivityGraph, ModelParams, UnsupportedGraphError
from ..recursion import BoundaryField, residual, ti_map
from .common import (CRITICAL_BAND, DEDUP_TOL, RESIDUAL_TOL, Solution, SolutionLabel,
                     SolutionReport, assign_swap_pairs, dedupe)


def _preset_kind(graph: ActivityGraph) -> str:
    if graph.adjacency == WAND.adjacency:
        return "wand"
    if graph.adjacency == HINGE.adjacency:
        return "hinge"
    raise UnsupportedGraphError(
        f"closed-form treatment is only available for wand and hinge, not {graph.name!r}")


def critical_lambda(graph: ActivityGraph, k: int) -> Fraction:
    """Exact critical activity where the TI solution count jumps from 1 to 3."""
    if k < 2:
        raise ValueError("k must be >= 2")
    kind = _preset_kind(graph)
    num = 2 ** k if kind == "wand" else (k + 1) ** k
    return Fraction(num, (k - 1) * k ** k)


def _symmetric_ratio(graph: ActivityGraph, z: float) -> float:
    a = graph.adjacency
    return (a[1][0] + (a[1][1] + a[1][2]) * z) / (a[0][0] + (a[0][1] + a[0][2]) * z)


def solve_symmetric(graph: ActivityGraph, params: ModelParams) -> float:
    """The unique positive z with z = lam * ratio(z)**k, ratio taken at z1 = z2 = z."""
    a = graph.adjacency
    if not (a[1][1] == a[2][2] and a[0][1] == a[0][2] and a[1][0] == a[2][0]):
        raise UnsupportedGraphError("graph is not symmetric under exchanging spins 1 and 2")
    k, lam = params.k, params.lam

    def h(u: float) -> float:
        return u - math.log(lam) - k * math.log(_symmetric_ratio(graph, math.exp(u)))

    lo, hi = math.log(lam) - 1.0, math.log(lam) + 1.0
    while h(lo) > 0:
        lo -= 2.0 * (hi - lo)
    while h(hi) < 0:
        hi += 2.0 * (hi - lo)
    u = brentq(h, lo, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    return math.exp(u)


def _log_lambda_curve(t: float, k: int, kind: str) -> float:
    if t > 1.0:
        t = 1.0 / t  # the curve is invariant under t -> 1/t; evaluate where powers are <= 1
    powers = [t ** i for i in range(k + 1)]
    s_inner = math.fsum(powers[1:k])       # t + ... + t^{k-1}
    s_low = math.fsum(powers[:k])          # 1 + ... + t^{k-1}
    if kind == "wand":
        top = k * math.log1p(powers[k])    # (t^k + 1)^k
    else:
        top = k * math.log(math.fsum(powers))  # (1 + ... + t^k)^k
    return top - math.log(s_inner) - k * math.log(s_low)


def lambda_of_t(t: float, k: int) -> float:
    """Activity at which the wand TI system has the asymmetric solution labelled by t."""
    if not t > 0:
        raise ValueError("t must be positive")
    if k < 2:
        raise ValueError("k must be >= 2")
    return math.exp(_log_lambda_curve(t, k, "wand"))


def lambda_of_t_hinge(t: float, k: int) -> float:
    """Hinge counterpart of :func:`lambda_of_t`.

    The ratio condition z1/z2 = ((1+z1)/(1+z2))^k is the same for both graphs,
    so the wand parametrisation z2 = 1/(t + ... + t^{k-1}), z1 = t^k z2 carries
    over; only the activity changes because the vacant denominator gains a 1.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if k < 2:
        raise ValueError("k must be >= 2")
    return math.exp(_log_lambda_curve(t, k, "hinge"))


def asymmetric_pair_from_t(t: float, k: int) -> tuple[float, float]:
    y = 1.0 / math.fsum(t ** i for i in range(1, k))
    return t ** k * y, y


def solve_t(lam: float, k: int, kind: str = "wand") -> float:
    """The unique t > 1 on the increasing branch with lambda(t) = lam."""
    target = math.log(lam)
    if _log_lambda_curve(1.0, k, kind) >= target:
        raise ValueError("lambda is not above the critical value")
    hi = 1.0
    while _log_lambda_curve(math.exp(hi), k, kind) < target:
        hi *= 2.0
    g = lambda u: _log_lambda_curve(math.exp(u), k, kind) - target
    u = brentq(g, 0.0, hi, xtol=1e-16, rtol=4 * np.finfo(float).eps, maxiter=500)
    return math.exp(u)


def _ti_solution(graph, params, z1, z2, label) -> Solution:
    res = residual(ti_map(graph, params, (z1, z2)), (z1, z2))
    return Solution((z1, z2, z1, z2), res, label)


def _swap_ti(f):
    return (f[1], f[0], f[3], f[2])


def solve_ti(graph: ActivityGraph, params: ModelParams) -> SolutionReport:
    kind = _preset_kind(graph)
    k, lam = params.k, params.lam
    lam_cr = float(critical_lambda(graph, k))
    z = solve_symmetric(graph, params)
    sols = [_ti_solution(graph, params, z, z, SolutionLabel.TI_SYMMETRIC)]
    critical = abs(lam - lam_cr) <= CRITICAL_BAND * lam_cr
    if lam > lam_cr and not critical:
        t = solve_t(lam, k, kind)
        x, y = asymmetric_pair_from_t(t, k)
        sols.append(_ti_solution(graph, params, x, y, SolutionLabel.TI_ASYMMETRIC))
        sols.append(_ti_solution(graph, params, y, x, SolutionLabel.TI_ASYMMETRIC))
    sols = assign_swap_pairs(sols, _swap_ti)
    return SolutionReport(f"TI-{kind}", k, lam, sols, critical=critical,
                          critical_values=(lam_cr,), method="t-curve")


def solve_ti_generic(graph: ActivityGraph, params: ModelParams, starts: int = 13,
                     span: float = 8.0) -> SolutionReport:
    """Multi-start 2-D root search on the TI system, for any graph.

    Works in log coordinates from a ``starts x starts`` grid spanning
    ``exp(+-span)`` around lam.  Every candidate is residual-checked; the
    result makes no completeness claim.
    """
    k, lam = params.k, params.lam
    a = graph.adjacency
    log_lam = math.log(lam)

    def f(u):
        if not np.all(np.abs(u) < 700.0):
            return [1e6, 1e6]
        z1, z2 = math.exp(u[0]), math.exp(u[1])
        den = a[0][0] + a[0][1] * z1 + a[0][2] * z2
        n1 = a[1][0] + a[1][1] * z1 + a[1][2] * z2
        n2 = a[2][0] + a[2][1] * z1 + a[2][2] * z2
        if den <= 0 or n1 <= 0 or n2 <= 0:
            return [1e6, 1e6]
        return [u[0] - log_lam - k * math.log(n1 / den), u[1] - log_lam - k * math.log(n2 / den)]

    grid = np.linspace(log_lam - span, log_lam + span, starts)
    found = []
    for u0 in itertools.product(grid, grid):
        sol = root(f, np.array(u0), method="hybr", options={"xtol": 1e-14})
        if not sol.success:
            continue
        z1, z2 = (float(math.exp(v)) for v in sol.x)
        if not (math.isfinite(z1) and math.isfinite(z2)):
            continue
        try:
            res = residual(ti_map(graph, params, BoundaryField(z1, z2)), (z1, z2))
        except (ValueError, ArithmeticError):
            continue
        if res <= RESIDUAL_TOL:
            found.append((z1, z2))
    found = dedupe(found, max(DEDUP_TOL, 1e-7))
    found.sort(key=lambda p: (abs(p[0] - p[1]) > 1e-7 * max(p), p[0]))
    sols = []
    for z1, z2 in found:
        label = (SolutionLabel.TI_SYMMETRIC if abs(z1 - z2) <= 1e-7 * max(z1, z2)
                 else SolutionLabel.TI_ASYMMETRIC)
        sols.append(_ti_solution(graph, params, z1, z2, label))
    sols = assign_swap_pairs(sols, _swap_ti)
    return SolutionReport(f"TI-{graph.name}", k, lam, sols, method="multistart-2d")
