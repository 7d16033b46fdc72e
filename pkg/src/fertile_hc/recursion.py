"""Boundary-law maps for the three-state hard-core model.

All fields are the normalised occupied-state weights (z1, z2) with the vacant
weight fixed to 1 and the activity already absorbed.  Every map here is a
pure function of floats; the AGM, I3, I4 and weakly periodic maps are
specific to the wand graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import ActivityGraph, ModelParams

FieldVector4 = tuple[float, float, float, float]
FieldVector8 = tuple[float, float, float, float, float, float, float, float]


class SingularFieldError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BoundaryField:
    z1: float
    z2: float

    def __post_init__(self):
        for name in ("z1", "z2"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"boundary field component {name}={v} must be positive and finite")
        object.__setattr__(self, "z1", float(self.z1))
        object.__setattr__(self, "z2", float(self.z2))

    def __iter__(self):
        yield self.z1
        yield self.z2

    def swapped(self) -> "BoundaryField":
        return BoundaryField(self.z2, self.z1)

    def scaled(self, c: float) -> "BoundaryField":
        return BoundaryField(c * self.z1, c * self.z2)


@dataclass(frozen=True)
class AGMPattern:
    """Child-class counts: a z-vertex has m z-children, a t-vertex has r t-children."""

    k: int
    m: int
    r: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not (0 <= self.m <= self.k and 0 <= self.r <= self.k):
            raise ValueError(f"need 0 <= m, r <= k; got m={self.m}, r={self.r}, k={self.k}")

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.m, self.k - self.m), (self.r, self.k - self.r))

    @property
    def n_i3(self) -> int:
        return 2 * self.m - self.k

    @property
    def n_i4(self) -> int:
        return self.m + self.r - self.k

    def swapped(self) -> "AGMPattern":
        """Pattern obtained by renaming the z and t classes."""
        return AGMPattern(self.k, self.r, self.m)


@dataclass(frozen=True)
class WeaklyPeriodicPattern:
    k: int
    i: int

    def __post_init__(self):
        if not 1 <= self.i <= self.k:
            raise ValueError(f"need 1 <= i <= k, got i={self.i}, k={self.k}")

    def agm_pattern(self) -> AGMPattern:
        """The AGM pattern that reproduces this system on I3."""
        return AGMPattern(self.k, self.k - self.i, self.i - 1)


def ipow(x: float, n: int) -> float:
    """x**n for integer n >= 0 by repeated squaring."""
    if n < 0:
        return 1.0 / ipow(x, -n)
    result = 1.0
    while n:
        if n & 1:
            result *= x
        x *= x
        n >>= 1
    return result


def generic_step(graph: ActivityGraph, lam: float,
                 child_fields: Iterable[BoundaryField | Sequence[float]]) -> BoundaryField:
    a = graph.adjacency
    out1 = out2 = float(lam)
    for child in child_fields:
        c1, c2 = child
        den = a[0][0] + a[0][1] * c1 + a[0][2] * c2
        if den <= 0:
            raise SingularFieldError("vacant-state denominator vanished for child field "
                                     f"({c1}, {c2})")
        out1 *= (a[1][0] + a[1][1] * c1 + a[1][2] * c2) / den
        out2 *= (a[2][0] + a[2][1] * c1 + a[2][2] * c2) / den
    return BoundaryField(out1, out2)


def ti_map(graph: ActivityGraph, params: ModelParams,
           field: BoundaryField | Sequence[float]) -> BoundaryField:
    a = graph.adjacency
    z1, z2 = field
    den = a[0][0] + a[0][1] * z1 + a[0][2] * z2
    if den <= 0:
        raise SingularFieldError(f"vacant-state denominator vanished at ({z1}, {z2})")
    r1 = (a[1][0] + a[1][1] * z1 + a[1][2] * z2) / den
    r2 = (a[2][0] + a[2][1] * z1 + a[2][2] * z2) / den
    return BoundaryField(params.lam * ipow(r1, params.k), params.lam * ipow(r2, params.k))


def _wand_ratios(x1: float, x2: float) -> tuple[float, float]:
    s = x1 + x2
    return (1.0 + x1) / s, (1.0 + x2) / s


def agm_map(params: ModelParams, pattern: AGMPattern, fields: Sequence[float]) -> FieldVector4:
    z1, z2, t1, t2 = fields
    k, m, r, lam = params.k, pattern.m, pattern.r, params.lam
    if pattern.k != k:
        raise ValueError(f"pattern built for k={pattern.k}, params have k={k}")
    rz1, rz2 = _wand_ratios(z1, z2)
    rt1, rt2 = _wand_ratios(t1, t2)
    return (
        lam * ipow(rz1, m) * ipow(rt1, k - m),
        lam * ipow(rz2, m) * ipow(rt2, k - m),
        lam * ipow(rt1, r) * ipow(rz1, k - r),
        lam * ipow(rt2, r) * ipow(rz2, k - r),
    )


def periodic_map(params: ModelParams, fields: Sequence[float]) -> FieldVector4:
    """Even/odd two-periodic system: z-vertices see only t-children and vice versa."""
    z1, z2, t1, t2 = fields
    k, lam = params.k, params.lam
    rz1, rz2 = _wand_ratios(z1, z2)
    rt1, rt2 = _wand_ratios(t1, t2)
    return (lam * ipow(rt1, k), lam * ipow(rt2, k), lam * ipow(rz1, k), lam * ipow(rz2, k))


def i3_map(params: ModelParams, m: int, field: BoundaryField | Sequence[float]) -> BoundaryField:
    # m = r is the caller's responsibility; the map itself is defined for any m
    z1, z2 = field
    k = params.k
    r1, r2 = _wand_ratios(z1, z2)
    return BoundaryField(params.lam * ipow(r1, m) * ipow(r2, k - m),
                         params.lam * ipow(r2, m) * ipow(r1, k - m))


def i4_map(params: ModelParams, pattern: AGMPattern, z: float, t: float) -> tuple[float, float]:
    k, m, r = params.k, pattern.m, pattern.r
    rz = (1.0 + z) / (2.0 * z)
    rt = (1.0 + t) / (2.0 * t)
    return (params.lam * ipow(rz, m) * ipow(rt, k - m),
            params.lam * ipow(rt, r) * ipow(rz, k - r))


def weakly_periodic_map(params: ModelParams, pattern: WeaklyPeriodicPattern,
                        fields: Sequence[float]) -> FieldVector8:
    z1, z2, t1, t2, q1, q2, p1, p2 = fields
    k, i, lam = params.k, pattern.i, params.lam
    rz1, rz2 = _wand_ratios(z1, z2)
    rt1, rt2 = _wand_ratios(t1, t2)
    rq1, rq2 = _wand_ratios(q1, q2)
    rp1, rp2 = _wand_ratios(p1, p2)
    return (
        lam * ipow(rz1, k - i) * ipow(rq1, i),
        lam * ipow(rz2, k - i) * ipow(rq2, i),
        lam * ipow(rz1, k + 1 - i) * ipow(rq1, i - 1),
        lam * ipow(rz2, k + 1 - i) * ipow(rq2, i - 1),
        lam * ipow(rp1, k + 1 - i) * ipow(rt1, i - 1),
        lam * ipow(rp2, k + 1 - i) * ipow(rt2, i - 1),
        lam * ipow(rp1, k - i) * ipow(rt1, i),
        lam * ipow(rp2, k - i) * ipow(rt2, i),
    )


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


def invariant_set_of(fields: Sequence[float], tolerance: float = 1e-12) -> frozenset[str]:
    """Labels of the invariant sets I1..I4 containing ``(z1, z2, t1, t2)``.

    Equalities are tested with a relative tolerance.  Membership in I3 also
    requires m = r, which is not visible from the point and is left to the
    caller.
    """
    z1, z2, t1, t2 = fields
    labels = set()
    if _close(z1, t1, tolerance) and _close(z2, t2, tolerance):
        labels.add("I2")
    if _close(z1, t2, tolerance) and _close(z2, t1, tolerance):
        labels.add("I3")
    if _close(z1, z2, tolerance) and _close(t1, t2, tolerance):
        labels.add("I4")
    if labels >= {"I2", "I4"}:
        labels.add("I1")
    return frozenset(labels)


def residual(image: Iterable[float], point: Iterable[float]) -> float:
    """Largest relative fixed-point defect max_i |F_i(x) - x_i| / |x_i|."""
    return max(abs(f - x) / abs(x) for f, x in zip(image, point))
