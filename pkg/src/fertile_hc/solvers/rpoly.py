"""Exact check of the quartic factorisation behind the shape of lambda(t)."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..polynomial import Polynomial

T = Polynomial.x()


def _tpow(e: int) -> Polynomial:
    return Polynomial([0] * e + [1])


def r_polynomial(k: int) -> Polynomial:
    """(t^k-1)(t^2k-1) + k t (t^{k-2}-1)(t^2k-1) - 2 k^2 t^k (t-1)(t^{k-1}-1)."""
    one = Polynomial((1,))
    a = (_tpow(k) - one) * (_tpow(2 * k) - one)
    b = k * T * (_tpow(k - 2) - one) * (_tpow(2 * k) - one)
    c = 2 * k * k * _tpow(k) * (T - one) * (_tpow(k - 1) - one)
    return a + b - c


@dataclass
class RFactorizationReport:
    k: int
    passed: bool
    r1_coefficients: list[int]
    quotient_coefficients: list[int]
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"k": self.k, "passed": self.passed, "violations": self.violations,
                "r1_coefficients": self.r1_coefficients,
                "quotient_coefficients": self.quotient_coefficients}


def verify_R_factorization(k: int, k_max: int = 16) -> RFactorizationReport:
    """Check that t = 1 is a fourfold root of R(t, k) with a positive cofactor.

    In x = t - 1 the coefficients of x^0..x^3 must vanish and all others be
    strictly positive; R / (t-1)^4 must divide exactly and have nonnegative
    coefficients with positive sum.
    """
    if not 2 <= k <= k_max:
        raise ValueError(f"k must lie in [2, {k_max}]")
    r = r_polynomial(k)
    r1 = r.shift(1)
    violations = []
    for i in range(4):
        if r1[i] != 0:
            violations.append(f"coefficient of x^{i} in R1 is {r1[i]}, expected 0")
    for i in range(4, r1.degree + 1):
        if not r1[i] > 0:
            violations.append(f"coefficient of x^{i} in R1 is {r1[i]}, expected > 0")
    quot, rem = divmod(r, (T - 1) ** 4)
    if not rem.is_zero():
        violations.append(f"(t-1)^4 does not divide R: remainder {rem}")
    if any(c < 0 for c in quot.coeffs):
        violations.append(f"quotient has a negative coefficient: {quot}")
    if not sum(quot.coeffs) > 0:
        violations.append("quotient coefficients do not have positive sum")
    return RFactorizationReport(k, not violations, [int(c) for c in r1.coeffs],
                                [int(c) for c in quot.coeffs], violations)
