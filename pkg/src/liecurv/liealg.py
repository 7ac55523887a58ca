"""Finite-dimensional Lie algebras given by structure constants.

Indices in the public API are 1-based (``e_1 .. e_n``).  Internally
``c[i][j]`` is the coordinate vector of ``[e_{i+1}, e_{j+1}]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .constraints import ConstraintSet, canonicalize
from .exactnum import ZERO_EXPR, ScalarExpr, parse_scalar


class LieAlgebraError(ValueError):
    pass


class JacobiViolation(LieAlgebraError):
    def __init__(self, triple, residual):
        self.triple = triple
        self.residual = residual
        super().__init__(
            f"Jacobi identity fails on (e{triple[0]}, e{triple[1]}, e{triple[2]}): "
            f"residual {[str(r) for r in residual]}"
        )


def _expr(value, params) -> ScalarExpr:
    if isinstance(value, str):
        return parse_scalar(value, params)
    return ScalarExpr.coerce(value)


@dataclass(frozen=True)
class LieAlgebra:
    dim: int
    params: tuple
    c: tuple
    domain_notes: tuple = ()

    def structure_constant(self, k: int, i: int, j: int) -> ScalarExpr:
        """Coefficient of e_k in [e_i, e_j] (1-based)."""
        return self.c[i - 1][j - 1][k - 1]

    def basis_bracket(self, i: int, j: int) -> tuple:
        return self.c[i - 1][j - 1]

    def nonzero_brackets(self):
        """Yield ``(i, j, k, coef)`` for i < j, 1-based."""
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(n):
                    v = self.c[i][j][k]
                    if not v.is_zero():
                        yield i + 1, j + 1, k + 1, v

    def check_assignment(self, at) -> None:
        unknown = sorted(set(at) - set(self.params))
        if unknown:
            raise ValueError(f"undeclared parameter(s): {', '.join(unknown)}")


def basis_vector(n: int, i: int) -> tuple:
    """e_i as a coordinate vector (1-based)."""
    return tuple(ScalarExpr(1) if k == i - 1 else ZERO_EXPR for k in range(n))


def bracket(L: LieAlgebra, x: Sequence, y: Sequence) -> tuple:
    """[x, y]^k = c^k_ij x^i y^j."""
    n = L.dim
    if len(x) != n or len(y) != n:
        raise ValueError(f"vectors must have length {n}")
    x = [ScalarExpr.coerce(v) for v in x]
    y = [ScalarExpr.coerce(v) for v in y]
    out = [ZERO_EXPR] * n
    for i in range(n):
        if x[i].is_zero():
            continue
        for j in range(n):
            if y[j].is_zero():
                continue
            w = x[i] * y[j]
            for k, ck in enumerate(L.c[i][j]):
                if not ck.is_zero():
                    out[k] = out[k] + ck * w
    return tuple(out)


def _jacobi_vector(c, n, i, j, k):
    # [[e_i,e_j],e_k] + [[e_j,e_k],e_i] + [[e_k,e_i],e_j]
    out = [ZERO_EXPR] * n
    for a, b, d in ((i, j, k), (j, k, i), (k, i, j)):
        inner = c[a][b]
        for m in range(n):
            if inner[m].is_zero():
                continue
            for t in range(n):
                coef = c[m][d][t]
                if not coef.is_zero():
                    out[t] = out[t] + inner[m] * coef
    return out


def _jacobi_violations(c, n):
    for i, j, k in itertools.combinations(range(n), 3):
        vec = _jacobi_vector(c, n, i, j, k)
        if any(not v.is_zero() for v in vec):
            yield (i + 1, j + 1, k + 1), vec


def jacobi_residual(L: LieAlgebra) -> ConstraintSet:
    """Polynomials that must vanish for the bracket to satisfy Jacobi."""
    raw = []
    for _, vec in _jacobi_violations(L.c, L.dim):
        raw.extend(v for v in vec if not v.is_zero())
    return canonicalize(raw)


def antisymmetry_holds(L: LieAlgebra) -> bool:
    n = L.dim
    return all(
        (L.c[i][j][k] + L.c[j][i][k]).is_zero()
        for i in range(n) for j in range(n) for k in range(n)
    )


def make_lie_algebra(
    dim: int,
    params: Iterable[str],
    sparse_brackets: Iterable,
    domain_notes: Iterable[str] = (),
    check_jacobi: bool = True,
) -> LieAlgebra:
    """Build a Lie algebra from entries ``(i, j, k, coef)`` meaning the e_k part of [e_i, e_j].

    Entries need i < j; the antisymmetric completion is filled in.  Coefficients
    may be ScalarExpr, numbers, or expression strings over ``params``.
    """
    if dim < 1:
        raise LieAlgebraError("dimension must be positive")
    params = tuple(params)
    if len(set(params)) != len(params):
        raise LieAlgebraError("duplicate parameter names")
    c = [[[ZERO_EXPR] * dim for _ in range(dim)] for _ in range(dim)]
    seen = set()
    for entry in sparse_brackets:
        i, j, k, coef = entry
        if not (1 <= i < j <= dim) or not (1 <= k <= dim):
            raise LieAlgebraError(f"bracket index out of range: {(i, j, k)}")
        if (i, j, k) in seen:
            raise LieAlgebraError(f"duplicate bracket entry: {(i, j, k)}")
        seen.add((i, j, k))
        value = _expr(coef, params)
        extra = set(value.variables()) - set(params)
        if extra:
            raise LieAlgebraError(f"undeclared parameter(s) {sorted(extra)} in bracket {(i, j, k)}")
        c[i - 1][j - 1][k - 1] = value
        c[j - 1][i - 1][k - 1] = -value
    frozen = tuple(tuple(tuple(row) for row in plane) for plane in c)
    if check_jacobi:
        for triple, vec in _jacobi_violations(frozen, dim):
            raise JacobiViolation(triple, vec)
    return LieAlgebra(dim, params, frozen, tuple(domain_notes))


FAMILIES = ("g4_5", "g4_6")

_FAMILY_NOTES = {
    "g4_5": ("-1 <= b <= a <= 1", "a*b != 0"),
    "g4_6": ("a != 0", "b >= 0"),
}


def normalize_family_id(family: str) -> str:
    key = family.replace(".", "_").replace(",", "_").lower()
    if key not in FAMILIES:
        raise LieAlgebraError(f"unknown family {family!r}; expected one of g4.5, g4.6")
    return key


def builtin_family(family: str, a=None, b=None) -> LieAlgebra:
    """The Mubarakzyanov algebras g4,5 and g4,6 with parameters ``a``, ``b``.

    ``a`` and ``b`` default to the symbols a, b and may be any ScalarExpr or
    rational.  Domain notes are kept as metadata in terms of a and b.
    """
    key = normalize_family_id(family)
    a = ScalarExpr.symbol("a") if a is None else ScalarExpr.coerce(a)
    b = ScalarExpr.symbol("b") if b is None else ScalarExpr.coerce(b)
    params = tuple(sorted(set(a.variables()) | set(b.variables())))
    if key == "g4_5":
        entries = [(1, 4, 1, 1), (2, 4, 2, a), (3, 4, 3, b)]
    else:
        entries = [(1, 4, 1, a), (2, 4, 2, b), (2, 4, 3, -1), (3, 4, 2, 1), (3, 4, 3, b)]
    return make_lie_algebra(4, params, entries, _FAMILY_NOTES[key])
