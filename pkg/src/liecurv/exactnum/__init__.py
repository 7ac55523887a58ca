"""Exact rational numbers, polynomials and rational expressions in named parameters."""

from fractions import Fraction as Rational

from .parser import ParseError, UnknownIdentifier, ZeroDenominator, parse_polynomial, parse_scalar
from .polynomial import (
    ONE,
    ZERO,
    EvaluationError,
    Monomial,
    Polynomial,
    format_rational,
    grlex_cmp,
    grlex_key,
    make_monomial,
    monomial,
)
from .scalar import ONE_EXPR, ZERO_EXPR, ScalarExpr, scalar_arith, scalar_equals, scalar_eval


def parse_rational(text: str) -> Rational:
    """Parse a rational literal such as ``-3/8`` (an optional leading sign is allowed)."""
    value = parse_scalar(text.strip())
    if not value.is_constant():
        raise ParseError(f"not a rational literal: {text!r}")
    return value.num.constant_value()


__all__ = [
    "ONE", "ONE_EXPR", "ZERO", "ZERO_EXPR", "EvaluationError", "Monomial", "ParseError",
    "Polynomial", "Rational", "ScalarExpr", "UnknownIdentifier", "ZeroDenominator",
    "format_rational", "grlex_cmp", "grlex_key", "make_monomial", "monomial",
    "parse_polynomial", "parse_rational", "parse_scalar", "scalar_arith", "scalar_equals",
    "scalar_eval",
]
