"""Rational functions in named parameters, stored as numerator/denominator pairs.

No multivariate gcd is taken.  The denominator is kept primitive with a
positive leading coefficient, constant denominators are folded into the
numerator, and an exact division is attempted so that quotients such as
``(a^2 - b^2)/(a - b)`` collapse to polynomials.  Equality is decided by
cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .polynomial import ONE, ZERO, EvaluationError, Polynomial, _as_fraction


class ScalarExpr:
    __slots__ = ("num", "den")

    def __init__(self, num=ZERO, den=ONE):
        num = Polynomial.coerce(num)
        den = Polynomial.coerce(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = ONE
        elif den.is_constant():
            num = num.scale(1 / den.constant_value())
            den = ONE
        else:
            factor, den = den.primitive()
            if factor != 1:
                num = num.scale(1 / factor)
            q = num.divide_exact(den)
            if q is not None:
                num, den = q, ONE
            elif not num.is_constant():
                factor, prim = num.primitive()
                q = den.divide_exact(prim)
                if q is not None:
                    # q is primitive up to sign since prim and den are
                    sign, q = q.primitive()
                    num, den = Polynomial.constant(factor / sign), q
                    if den.is_constant():
                        num, den = num.scale(1 / den.constant_value()), ONE
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, x) -> "ScalarExpr":
        if isinstance(x, ScalarExpr):
            return x
        return cls(Polynomial.coerce(x))

    @classmethod
    def symbol(cls, name: str) -> "ScalarExpr":
        return cls(Polynomial.variable(name))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == ONE

    def is_constant(self) -> bool:
        return self.den == ONE and self.num.is_constant()

    def variables(self) -> tuple:
        return tuple(sorted(set(self.num.variables()) | set(self.den.variables())))

    def __add__(self, other):
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return ScalarExpr(self.num + other.num, self.den)
        if self.den == ONE:
            return ScalarExpr(self.num * other.den + other.num, other.den)
        if other.den == ONE:
            return ScalarExpr(self.num + other.num * self.den, self.den)
        q = other.den.divide_exact(self.den)
        if q is not None:
            return ScalarExpr(self.num * q + other.num, other.den)
        q = self.den.divide_exact(other.den)
        if q is not None:
            return ScalarExpr(self.num + other.num * q, self.den)
        return ScalarExpr(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return ScalarExpr(-self.num, self.den)

    def __sub__(self, other):
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return ScalarExpr.coerce(other) - self

    def __mul__(self, other):
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO_EXPR
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        n1, d2 = _cancel(n1, d2)
        n2, d1 = _cancel(n2, d1)
        return ScalarExpr(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero expression")
        return self * ScalarExpr(other.den, other.num)

    def __rtruediv__(self, other):
        return ScalarExpr.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        return ScalarExpr(self.num ** k, self.den ** k)

    def __eq__(self, other):
        try:
            other = ScalarExpr.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    def evaluate(self, at: Mapping[str, object]) -> Fraction:
        d = self.den.evaluate(at)
        if not d:
            raise EvaluationError(f"denominator {self.den} vanishes at {dict(at)}")
        return self.num.evaluate(at) / d

    def substitute(self, values: Mapping[str, object]) -> "ScalarExpr":
        subs = {n: ScalarExpr.coerce(v) for n, v in values.items()}
        return _substitute_poly(self.num, subs) / _substitute_poly(self.den, subs)

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"ScalarExpr({str(self)!r})"


def _cancel(num: Polynomial, den: Polynomial):
    """Drop ``den`` against ``num`` when one divides the other."""
    if den == ONE or den.is_constant():
        return num, den
    q = num.divide_exact(den)
    if q is not None:
        return q, ONE
    q = den.divide_exact(num)
    if q is not None:
        return ONE, q
    return num, den


def _substitute_poly(p: Polynomial, subs: dict) -> ScalarExpr:
    total = ZERO_EXPR
    for m, c in p.terms.items():
        term = ScalarExpr(Polynomial.constant(c))
        for n, e in m:
            term = term * (subs[n] ** e if n in subs else ScalarExpr.symbol(n) ** e)
        total = total + term
    return total


ZERO_EXPR = ScalarExpr()
ONE_EXPR = ScalarExpr(ONE)


def scalar_arith(op: str, x, y=None) -> ScalarExpr:
    x = ScalarExpr.coerce(x)
    if op == "neg":
        return -x
    y = ScalarExpr.coerce(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def scalar_equals(x, y) -> bool:
    return ScalarExpr.coerce(x) == ScalarExpr.coerce(y)


def scalar_eval(x, at: Mapping[str, object]) -> Fraction:
    return ScalarExpr.coerce(x).evaluate({k: _as_fraction(v) for k, v in at.items()})
