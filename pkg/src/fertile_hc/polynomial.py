"""Exact univariate polynomials over the rationals, plus real cubic roots.

Coefficients are stored in ascending order of degree as ``int`` or
``Fraction``; nothing in this module touches floating point except
:func:`solve_cubic_cardano` and :meth:`Polynomial.__call__` on float input.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Coeff = Union[int, Fraction]


def _norm(c) -> Coeff:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return int(c)
    raise TypeError(f"exact coefficient expected, got {type(c).__name__}")


class Polynomial:
    """Dense polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coeff] = ()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Coeff, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c: Coeff) -> "Polynomial":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable[Coeff]) -> "Polynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Coeff:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> Coeff:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, Rational):
            other = Polynomial((other,))
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}{'*' + mono if mono else ''}")
        return " + ".join(terms).replace("+ -", "- ")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return Polynomial((other,))

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Polynomial":
        if e < 0:
            raise ValueError("negative power")
        result, base = Polynomial((1,)), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other) -> tuple["Polynomial", "Polynomial"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        dq = other.degree
        lead = Fraction(other.leading)
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lead
            if c == 0:
                continue
            quot[i - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= c * b
        return Polynomial(quot), Polynomial(rem[:dq] if dq > 0 else [])

    def __floordiv__(self, other) -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Polynomial":
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + (c if not isinstance(x, float) else float(c))
        return acc

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def compose(self, other: "Polynomial") -> "Polynomial":
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def shift(self, a: Coeff) -> "Polynomial":
        """p(x + a)."""
        return self.compose(Polynomial((a, 1)))

    def monic(self) -> "Polynomial":
        lead = Fraction(self.leading)
        return Polynomial(Fraction(c) / lead for c in self.coeffs)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)


IntPolynomial = Polynomial


def gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    while not q.is_zero():
        p, q = q, p % q
    return p.monic() if not p.is_zero() else p


def squarefree_part(p: Polynomial) -> Polynomial:
    g = gcd(p, p.derivative())
    return p // g if g.degree > 0 else p


def sign_variations(values: Iterable) -> int:
    signs = [v > 0 for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def descartes_bound(p: Polynomial) -> int:
    """Sign variations of the coefficient list: an upper bound on positive roots."""
    return sign_variations(p.coeffs)


def sturm_sequence(p: Polynomial) -> list[Polynomial]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _sign_at_inf(p: Polynomial, negative: bool = False) -> int:
    lead = p.leading
    s = (lead > 0) - (lead < 0)
    return -s if negative and p.degree % 2 else s


def count_real_roots(p: Polynomial, lo=None, hi=None) -> int:
    """Distinct real roots in the half-open interval (lo, hi]; ``None`` means infinite."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    f = squarefree_part(p)
    seq = sturm_sequence(f)

    def variations(x):
        if x is None:
            return None
        return sign_variations(q(Fraction(x)) for q in seq)

    v_lo = variations(lo)
    v_hi = variations(hi)
    if v_lo is None:
        v_lo = sign_variations(_sign_at_inf(q, negative=True) for q in seq)
    if v_hi is None:
        v_hi = sign_variations(_sign_at_inf(q) for q in seq)
    return v_lo - v_hi


def count_positive_roots(p: Polynomial) -> int:
    """Exact number of distinct positive real roots (Sturm, exact rationals)."""
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    # strip roots at zero so that 0 is not itself a root of the sequence head
    cs = list(p.coeffs)
    while cs and cs[0] == 0:
        cs.pop(0)
    return count_real_roots(Polynomial(cs), 0, None)


class CubicError(ArithmeticError):
    pass


def cubic_discriminant_terms(a: float, b: float, c: float, d: float) -> tuple[float, float, float]:
    """Depressed form y^3 + p y + q of a x^3 + b x^2 + c x + d and D = (q/2)^2 + (p/3)^3."""
    b, c, d = b / a, c / a, d / a
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    return p, q, (q / 2.0) ** 2 + (p / 3.0) ** 3


def solve_cubic_cardano(poly: Polynomial | Sequence[float], rel_tol: float = 1e-12) -> list[float]:
    """All real roots of a cubic, with multiplicity, in ascending order.

    ``poly`` is either a degree-3 :class:`Polynomial` or the descending
    coefficients ``(a, b, c, d)`` of ``a x^3 + b x^2 + c x + d``.  Three real
    roots are taken from the trigonometric form; a discriminant within
    ``rel_tol`` of zero (relative to its two terms) is treated as a repeated
    root.
    """
    if isinstance(poly, Polynomial):
        if poly.degree != 3:
            raise CubicError(f"degree {poly.degree} polynomial is not a cubic")
        a, b, c, d = (float(poly[i]) for i in (3, 2, 1, 0))
    else:
        a, b, c, d = (float(v) for v in poly)
    if a == 0 or not math.isfinite(a):
        raise CubicError("leading coefficient of a cubic must be nonzero")

    p, q, disc = cubic_discriminant_terms(a, b, c, d)
    shift = -b / (3.0 * a)
    scale = max((q / 2.0) ** 2, abs(p / 3.0) ** 3)

    if scale == 0.0:
        ys = [0.0, 0.0, 0.0]
    elif abs(disc) <= rel_tol * scale:
        # repeated root: y = 3q/p simple, -3q/(2p) double
        ys = [3.0 * q / p, -1.5 * q / p, -1.5 * q / p]
    elif disc < 0:
        rho = 2.0 * math.sqrt(-p / 3.0)
        arg = max(-1.0, min(1.0, -(q / 2.0) / (-p / 3.0) ** 1.5))
        phi = math.acos(arg) / 3.0
        ys = [rho * math.cos(phi - 2.0 * math.pi * j / 3.0) for j in range(3)]
    else:
        sq = math.sqrt(disc)
        ys = [_cbrt(-q / 2.0 + sq) + _cbrt(-q / 2.0 - sq)]

    roots = sorted(_polish(y + shift, a, b, c, d) for y in ys)
    coef_scale = abs(a) + abs(b) + abs(c) + abs(d)
    for x in roots:
        val = ((a * x + b) * x + c) * x + d
        if abs(val) > 1e-9 * coef_scale * max(1.0, abs(x)) ** 3:
            raise CubicError(f"root {x} failed verification (residual {val})")
    return roots


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _polish(x: float, a: float, b: float, c: float, d: float) -> float:
    # one Newton step; skipped where the derivative vanishes (repeated roots)
    f = ((a * x + b) * x + c) * x + d
    df = (3.0 * a * x + 2.0 * b) * x + c
    if df == 0 or not math.isfinite(f / df):
        return x
    step = f / df
    if abs(step) > 1e-6 * max(1.0, abs(x)):
        return x
    return x - step
