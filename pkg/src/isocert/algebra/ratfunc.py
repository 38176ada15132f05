"""Rational functions as (numerator, denominator) pairs of MultiPoly.

Fractions are never reduced by a multivariate GCD.  Normalisation strips the
sign, the integer content, a shared monomial factor and any shared power of
the pairwise differences m_i - m_j, which are the only irreducible factors
the elimination pipeline introduces in denominators.  Equality is decided by
cross-multiplication and does not depend on any of this.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence, Tuple

from .poly import Coefficient, MultiPoly, m1, m2, m3, pack, unpack

_DIFFERENCES = ((0, 1, m1 - m2), (0, 2, m1 - m3), (1, 2, m2 - m3))
_PROBE = (7919, 104729, 1299709, 15485863)


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den=1, *, normalize: bool = True):
        num = _as_poly(num)
        den = _as_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if normalize:
            num, den = _normalize(num, den)
        self.num: MultiPoly = num
        self.den: MultiPoly = den

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def as_poly(self) -> MultiPoly:
        """The value as a MultiPoly; raises if the denominator is not constant."""
        if not self.den.is_constant():
            raise ValueError("rational function has a non-constant denominator")
        return self.num.scale(Fraction(1) / Fraction(self.den.constant_value()))

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, normalize=False)

    def __sub__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc(1) / (self ** (-n))
        return RatFunc(self.num**n, self.den**n)

    # comparison -------------------------------------------------------
    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return rf_equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    # structure --------------------------------------------------------
    def evaluate(self, point: Sequence[Coefficient]) -> Fraction:
        d = self.den.evaluate(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(point) / d

    def diff_t(self) -> "RatFunc":
        return RatFunc(
            self.num.diff_t() * self.den - self.num * self.den.diff_t(), self.den * self.den
        )

    def degree_t(self) -> int:
        """t-degree of a fraction whose denominator is free of t."""
        self._require_t_free_den()
        return self.num.degree_t()

    def coeff_t(self, d: int) -> "RatFunc":
        self._require_t_free_den()
        return RatFunc(self.num.coeff_t(d), self.den)

    def _require_t_free_den(self) -> None:
        if self.den.degree_t() > 0:
            raise ValueError("t-structure requested for a fraction with t in the denominator")

    def __repr__(self) -> str:
        return f"RatFunc(({self.num}) / ({self.den}))"


def _as_poly(x) -> MultiPoly:
    if isinstance(x, MultiPoly):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return MultiPoly.constant(x)
    raise TypeError(f"cannot build a polynomial from {type(x).__name__}")


def _coerce(x):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (MultiPoly, int, Fraction)) and not isinstance(x, bool):
        return RatFunc(x, normalize=False)
    return NotImplemented


def _normalize(num: MultiPoly, den: MultiPoly) -> Tuple[MultiPoly, MultiPoly]:
    if num.is_zero():
        return num, MultiPoly.constant(1)
    shared = pack([min(x, y) for x, y in zip(unpack(num.monomial_gcd()), unpack(den.monomial_gcd()))])
    if shared:
        num, den = num.shift_down(shared), den.shift_down(shared)
    if not den.is_constant():
        for i, j, f in _DIFFERENCES:
            while _vanishes_on_diagonal(den, i, j) and _vanishes_on_diagonal(num, i, j):
                qd = den.exact_div(f)
                if qd is None:
                    break
                qn = num.exact_div(f)
                if qn is None:
                    break
                num, den = qn, qd
    cn, cd = num.content(), den.content()
    num = num.scale(1 / cn)
    den = den.scale(1 / cd)
    num = num.scale(cn / cd)
    if den.leading()[1] < 0:
        num, den = -num, -den
    return num, den


def _vanishes_on_diagonal(p: MultiPoly, i: int, j: int) -> bool:
    """Necessary condition for (m_i - m_j) | p: p vanishes at a probe with m_i = m_j."""
    probe = list(_PROBE)
    probe[i] = probe[j]
    return p.evaluate(probe) == 0


def rf_equal(a, b) -> bool:
    a, b = RatFunc.coerce(a), RatFunc.coerce(b)
    return (a.num * b.den - b.num * a.den).is_zero()


def rf_arith(op: str, a: RatFunc, b: RatFunc) -> RatFunc:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown rational-function operation {op!r}")
