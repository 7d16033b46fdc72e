from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

# |lambda - lambda_c| <= CRITICAL_BAND * lambda_c is treated as exactly critical
CRITICAL_BAND = 1e-12
DEDUP_TOL = 1e-8
RESIDUAL_TOL = 1e-10
# near a fold, roots within this relative distance of the fold point are merged
FOLD_MERGE_TOL = 1e-4


class SolutionLabel(str, enum.Enum):
    TI_SYMMETRIC = "TI_symmetric"
    TI_ASYMMETRIC = "TI_asymmetric"
    AGM_I3 = "AGM_I3"
    AGM_I4 = "AGM_I4"
    PERIODIC = "Periodic"
    WEAKLY_PERIODIC = "WeaklyPeriodic"


@dataclass(frozen=True)
class Solution:
    """A verified fixed point.

    ``fields`` is the canonical 4-vector (z1, z2, t1, t2); translation-invariant
    solutions are embedded with t = z.  Weakly periodic solutions carry the
    full 8-vector (z, t, q, p).
    """

    fields: tuple[float, ...]
    residual: float
    label: SolutionLabel
    pairing: int | None = None

    @property
    def z(self) -> tuple[float, float]:
        return self.fields[0], self.fields[1]

    @property
    def t(self) -> tuple[float, float]:
        return self.fields[2], self.fields[3]

    def to_dict(self) -> dict:
        return {"fields": list(self.fields), "residual": self.residual,
                "label": self.label.value, "pairing": self.pairing}


@dataclass
class SolutionReport:
    scenario: str
    k: int
    lam: float
    solutions: list[Solution]
    m: int | None = None
    r: int | None = None
    critical: bool = False
    critical_values: tuple[float, ...] = ()
    method: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.solutions)

    @property
    def max_residual(self) -> float:
        return max((s.residual for s in self.solutions), default=0.0)

    def asymmetric(self) -> list[Solution]:
        return [s for s in self.solutions if s.label is not SolutionLabel.TI_SYMMETRIC]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario, "k": self.k, "m": self.m, "r": self.r,
            "lambda": self.lam, "count": self.count, "critical": self.critical,
            "critical_values": list(self.critical_values), "method": self.method,
            "notes": list(self.notes),
            "solutions": [s.to_dict() for s in self.solutions],
        }


def rel_distance(a: Sequence[float], b: Sequence[float]) -> float:
    return max(abs(x - y) / max(abs(x), abs(y)) for x, y in zip(a, b))


def dedupe(points: list[tuple[float, ...]], tol: float = DEDUP_TOL) -> list[tuple[float, ...]]:
    out: list[tuple[float, ...]] = []
    for p in points:
        if all(rel_distance(p, q) > tol for q in out):
            out.append(p)
    return out


def near_critical(lam: float, values: Sequence[float], band: float = CRITICAL_BAND) -> float | None:
    for v in values:
        if abs(lam - v) <= band * v:
            return v
    return None


def assign_swap_pairs(solutions: list[Solution], swap: Callable[[tuple], tuple],
                      tol: float = 1e-7) -> list[Solution]:
    """Link each solution to its image under ``swap`` when that image is also present."""
    out = list(solutions)
    for i, s in enumerate(out):
        if s.pairing is not None:
            continue
        image = swap(s.fields)
        for j, other in enumerate(out):
            if j != i and rel_distance(image, other.fields) <= tol:
                out[i] = Solution(s.fields, s.residual, s.label, j)
                out[j] = Solution(other.fields, other.residual, other.label, i)
                break
    return out


def newton_polish(func: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
                  x0: np.ndarray, steps: int = 6) -> np.ndarray:
    """A few undamped Newton steps; keeps the best iterate by residual norm."""
    x = np.asarray(x0, dtype=float)
    f, jac = func(x)
    best, best_norm = x, float(np.max(np.abs(f)))
    for _ in range(steps):
        try:
            dx = np.linalg.solve(jac, -f)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(dx)):
            break
        x = x + dx
        f, jac = func(x)
        norm = float(np.max(np.abs(f)))
        if not math.isfinite(norm):
            break
        if norm < best_norm:
            best, best_norm = x, norm
        if norm < 1e-15:
            break
    return best


class MonotoneCurve:
    """A one-parameter curve ``y -> log lambda(y)`` split at its extrema.

    The curve is tabulated once on ``[lo, hi]``; every interior local extremum
    is refined with a bounded scalar minimiser.  Between consecutive breakpoints
    the curve is monotone, so each piece holds at most one root of
    ``log lambda(y) = target``.
    """

    def __init__(self, log_lam: Callable[[float], float], lo: float, hi: float,
                 points: int = 1500):
        self.log_lam = log_lam
        ys = np.linspace(lo, hi, points)
        vals = np.array([log_lam(float(y)) for y in ys])
        finite = np.isfinite(vals)
        ys, vals = ys[finite], vals[finite]
        self.grid = ys
        self.values = vals
        self.extrema: list[tuple[float, float, str]] = []
        diffs = np.diff(vals)
        # steps at rounding level carry no direction; flat tails would otherwise
        # produce spurious extrema
        noise = 1e-11 * np.maximum(1.0, np.abs(vals[1:]))
        d = np.where(np.abs(diffs) > noise, np.sign(diffs), 0.0)
        signed = np.flatnonzero(d)
        for prev, cur in zip(signed, signed[1:]):
            if d[prev] == d[cur]:
                continue
            kind = "max" if d[prev] > 0 else "min"
            sgn = -1.0 if kind == "max" else 1.0
            res = minimize_scalar(lambda y: sgn * log_lam(y), method="bounded",
                                  bounds=(ys[prev], ys[cur + 1]),
                                  options={"xatol": 1e-13})
            self.extrema.append((float(res.x), float(log_lam(float(res.x))), kind))
        bps = [float(ys[0])] + [e[0] for e in self.extrema] + [float(ys[-1])]
        self.breakpoints = bps
        self.break_values = [float(vals[0])] + [e[1] for e in self.extrema] + [float(vals[-1])]

    @property
    def fold_values(self) -> list[float]:
        """lambda at each interior extremum."""
        return [math.exp(v) for _, v, _ in self.extrema]

    def solve(self, target: float) -> list[float]:
        """Parameters y with log lambda(y) = target, one per monotone piece."""
        roots = []
        for (a, fa), (b, fb) in zip(zip(self.breakpoints, self.break_values),
                                    zip(self.breakpoints[1:], self.break_values[1:])):
            ga, gb = fa - target, fb - target
            if ga == 0.0:
                roots.append(a)
            elif ga * gb < 0:
                roots.append(brentq(lambda y: self.log_lam(y) - target, a, b,
                                    xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
        if self.break_values[-1] == target:
            roots.append(self.breakpoints[-1])
        return roots
