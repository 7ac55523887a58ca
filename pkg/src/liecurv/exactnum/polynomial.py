"""Sparse multivariate polynomials over the rationals.

A monomial is a tuple of ``(name, exponent)`` pairs sorted by name with no
zero exponents, e.g. ``(("a", 2), ("b", 1))`` for ``a^2*b``.  The empty tuple
is the unit monomial.  Terms are ordered graded-lexicographically with
parameter names compared alphabetically (``a > b > c ...``).
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Union

Monomial = tuple  # tuple[tuple[str, int], ...]
Number = Union[int, Fraction]

ONE_MONOMIAL: Monomial = ()


class EvaluationError(ValueError):
    """Raised when an expression cannot be evaluated at a point."""


def monomial(**exponents: int) -> Monomial:
    return make_monomial(exponents)


def make_monomial(exponents: Mapping[str, int]) -> Monomial:
    for name, e in exponents.items():
        if e < 0:
            raise ValueError(f"negative exponent for {name!r}")
    return tuple(sorted((n, int(e)) for n, e in exponents.items() if e))


def monomial_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def monomial_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for n, e in m2:
        exps[n] = exps.get(n, 0) + e
    return tuple(sorted(exps.items()))


def monomial_div(m1: Monomial, m2: Monomial):
    """Return m1 / m2 if m2 divides m1, else None."""
    exps = dict(m1)
    for n, e in m2:
        left = exps.get(n, 0) - e
        if left < 0:
            return None
        if left:
            exps[n] = left
        else:
            del exps[n]
    return tuple(sorted(exps.items()))


def _lex_cmp(m1: Monomial, m2: Monomial) -> int:
    for (n1, e1), (n2, e2) in zip(m1, m2):
        if n1 != n2:
            # the alphabetically earlier variable is present only in one side
            return 1 if n1 < n2 else -1
        if e1 != e2:
            return 1 if e1 > e2 else -1
    return (len(m1) > len(m2)) - (len(m1) < len(m2))


def grlex_cmp(m1: Monomial, m2: Monomial) -> int:
    d1, d2 = monomial_degree(m1), monomial_degree(m2)
    if d1 != d2:
        return 1 if d1 > d2 else -1
    return _lex_cmp(m1, m2)


grlex_key = functools.cmp_to_key(grlex_cmp)


def format_monomial(m: Monomial) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in m)


def format_rational(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int) and not isinstance(c, bool):
        return Fraction(c)
    raise TypeError(f"expected an exact rational, got {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("_terms", "_sorted")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = _as_fraction(c)
                if c:
                    clean[m] = c
        self._terms = clean
        self._sorted = None

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p._terms = terms
        p._sorted = None
        return p

    @classmethod
    def constant(cls, c: Number) -> "Polynomial":
        return cls({ONE_MONOMIAL: c})

    @classmethod
    def variable(cls, name: str) -> "Polynomial":
        return cls._raw({((name, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        return cls.constant(_as_fraction(x))

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_value(self) -> Fraction:
        """Value of a constant polynomial; raises if the polynomial is not constant."""
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def variables(self) -> tuple:
        names = set()
        for m in self._terms:
            names.update(n for n, _ in m)
        return tuple(sorted(names))

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((monomial_degree(m) for m in self._terms), default=-1)

    def sorted_terms(self) -> tuple:
        """Terms as ``(monomial, coefficient)`` pairs in descending grlex order."""
        if self._sorted is None:
            self._sorted = tuple(
                sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)
            )
        return self._sorted

    def leading_monomial(self) -> Monomial:
        return self.sorted_terms()[0][0]

    def leading_coefficient(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        return self.sorted_terms()[0][1]

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        if not other._terms:
            return self
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return Polynomial.coerce(other) - self

    def __mul__(self, other):
        try:
            other = Polynomial.coerce(other)
        except TypeError:
            return NotImplemented
        if not self._terms or not other._terms:
            return ZERO
        out = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = monomial_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return ZERO
        return Polynomial._raw({m: v * c for m, v in self._terms.items()})

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._terms == Polynomial.constant(other)._terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __bool__(self):
        return bool(self._terms)

    # -- normal forms -------------------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c such that self / c has coprime integer coefficients."""
        if not self._terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self._terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> tuple:
        """Split into ``(factor, p)`` with ``self == factor * p``.

        ``p`` has integer coefficients with gcd 1 and a positive leading
        coefficient.  The zero polynomial gives ``(0, 0)``.
        """
        if not self._terms:
            return Fraction(0), ZERO
        c = self.content()
        if self.leading_coefficient() < 0:
            c = -c
        return c, self.scale(1 / c)

    def divide_exact(self, divisor: "Polynomial"):
        """Quotient if ``divisor`` divides ``self`` exactly, else None."""
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lm, lc = divisor.sorted_terms()[0]
        quotient = {}
        rest = self
        while rest._terms:
            m, c = rest.sorted_terms()[0]
            q = monomial_div(m, lm)
            if q is None:
                return None
            qc = c / lc
            quotient[q] = qc
            rest = rest - divisor * Polynomial._raw({q: qc})
        return Polynomial._raw(quotient)

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, at: Mapping[str, Number]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for n, e in m:
                try:
                    x = at[n]
                except KeyError:
                    raise EvaluationError(f"no value given for parameter {n!r}") from None
                v *= _as_fraction(x) ** e
            total += v
        return total

    def substitute(self, values: Mapping[str, object]) -> "Polynomial":
        """Replace parameters by polynomials (or numbers); others are kept."""
        subs = {n: Polynomial.coerce(v) for n, v in values.items()}
        out = ZERO
        for m, c in self._terms.items():
            term = Polynomial._raw({ONE_MONOMIAL: c})
            kept = {}
            for n, e in m:
                if n in subs:
                    term = term * subs[n] ** e
                else:
                    kept[n] = e
            if kept:
                term = term * Polynomial._raw({make_monomial(kept): Fraction(1)})
            out = out + term
        return out

    # -- printing -----------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for idx, (m, c) in enumerate(self.sorted_terms()):
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if not m:
                body = format_rational(mag)
            elif mag == 1:
                body = format_monomial(m)
                # "-a^2" would parse as (-a)^2
                if idx == 0 and sign == "-" and m[0][1] > 1:
                    body = "1*" + body
            else:
                body = f"{format_rational(mag)}*{format_monomial(m)}"
            if idx == 0:
                parts.append(body if sign == "+" else "-" + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"Polynomial({str(self)!r})"


ZERO = Polynomial()
ONE = Polynomial.constant(1)


def poly_sum(items: Iterable[Polynomial]) -> Polynomial:
    total = ZERO
    for p in items:
        total = total + p
    return total
