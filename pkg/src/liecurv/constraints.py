"""Canonical polynomial constraint sets, exact evaluation and rational grid sweeps."""

from __future__ import annotations

import itertools
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactnum import (
    EvaluationError,
    ParseError,
    Polynomial,
    ScalarExpr,
    format_rational,
    grlex_key,
    parse_rational,
    parse_scalar,
)


def _sort_key(p: Polynomial):
    return (p.degree(), grlex_key(p.leading_monomial()), str(p))


def _normalize(p: Polynomial) -> Polynomial:
    return p.primitive()[1]


@dataclass(frozen=True)
class ConstraintSet:
    """Polynomials whose common zeros encode a property.

    ``assumptions`` are cleared denominators; the set is only meaningful
    where none of them vanish.
    """

    polys: tuple = ()
    assumptions: tuple = ()

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def is_empty(self) -> bool:
        return not self.polys

    def parameters(self) -> tuple:
        names = set()
        for p in self.polys + self.assumptions:
            names.update(p.variables())
        return tuple(sorted(names))

    def evaluate(self, at: Mapping[str, object]) -> "Verdict":
        return evaluate(self, at)

    def substitute(self, values: Mapping[str, object]) -> "ConstraintSet":
        """Substitute parameters and re-canonicalize."""
        return canonicalize(
            [ScalarExpr(p).substitute(values) for p in self.polys],
            assumptions=[ScalarExpr(p).substitute(values) for p in self.assumptions],
        )

    def as_strings(self) -> list:
        return [str(p) for p in self.polys]


def canonicalize(raw: Iterable, assumptions: Iterable = ()) -> ConstraintSet:
    """Clear denominators, normalize, deduplicate and sort residuals.

    ``raw`` holds ScalarExpr or Polynomial residuals.  Non-constant
    denominators become nonvanishing assumptions; zero residuals are dropped.
    """
    polys = set()
    assumed = set()
    for item in raw:
        expr = ScalarExpr.coerce(item)
        if not expr.den.is_constant():
            assumed.add(_normalize(expr.den))
        if not expr.num.is_zero():
            polys.add(_normalize(expr.num))
    for item in assumptions:
        expr = ScalarExpr.coerce(item)
        for part in (expr.num, expr.den):
            if not part.is_constant():
                assumed.add(_normalize(part))
    return ConstraintSet(tuple(sorted(polys, key=_sort_key)), tuple(sorted(assumed, key=_sort_key)))


@dataclass(frozen=True)
class Verdict:
    satisfied: bool
    residuals: tuple = ()  # (polynomial, nonzero value) pairs
    violated_assumptions: tuple = ()

    def to_dict(self) -> dict:
        return {
            "satisfied": self.satisfied,
            "nonzero_residuals": [
                {"polynomial": str(p), "value": format_rational(v)} for p, v in self.residuals
            ],
            "violated_assumptions": [str(p) for p in self.violated_assumptions],
        }


def evaluate(cs: ConstraintSet, at: Mapping[str, object]) -> Verdict:
    missing = [n for n in cs.parameters() if n not in at]
    if missing:
        raise EvaluationError(f"no value given for parameter(s) {', '.join(missing)}")
    residuals = []
    for p in cs.polys:
        v = p.evaluate(at)
        if v:
            residuals.append((p, v))
    violated = tuple(p for p in cs.assumptions if not p.evaluate(at))
    return Verdict(not residuals, tuple(residuals), violated)


def _satisfied(cs: ConstraintSet, at: Mapping[str, Fraction]) -> bool:
    return all(not p.evaluate(at) for p in cs.polys)


# -- domain conditions ------------------------------------------------------

_COMPARISONS = {
    "<=": lambda x, y: x <= y,
    ">=": lambda x, y: x >= y,
    "!=": lambda x, y: x != y,
    "==": lambda x, y: x == y,
    "<": lambda x, y: x < y,
    ">": lambda x, y: x > y,
}
_UNICODE_OPS = {"≤": "<=", "≥": ">=", "≠": "!=", "−": "-"}
_SPLIT = re.compile(r"(<=|>=|!=|==|<|>)")


@dataclass(frozen=True)
class Condition:
    """A comparison chain such as ``-1 <= b <= a <= 1`` or ``a*b != 0``."""

    text: str
    sides: tuple
    ops: tuple

    @classmethod
    def parse(cls, text: str, params: Iterable[str]) -> "Condition":
        norm = text
        for u, a in _UNICODE_OPS.items():
            norm = norm.replace(u, a)
        pieces = _SPLIT.split(norm)
        if len(pieces) < 3:
            raise ParseError(f"condition has no comparison operator: {text!r}")
        params = tuple(params)
        sides = tuple(parse_scalar(s.strip(), params).num for s in pieces[::2])
        return cls(text, sides, tuple(pieces[1::2]))

    def holds(self, at: Mapping[str, Fraction]) -> bool:
        values = [s.evaluate(at) for s in self.sides]
        return all(_COMPARISONS[op](x, y) for op, x, y in zip(self.ops, values, values[1:]))


# -- grids ------------------------------------------------------------------


@dataclass(frozen=True)
class GridAxis:
    name: str
    start: Fraction
    end: Fraction
    step: Fraction

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError(f"grid step for {self.name!r} must be positive")
        if self.start > self.end:
            raise ValueError(f"grid start exceeds end for {self.name!r}")

    def values(self) -> list:
        count = int((self.end - self.start) // self.step)
        return [self.start + k * self.step for k in range(count + 1)]

    def __str__(self):
        return ":".join(format_rational(v) for v in (self.start, self.end, self.step))


@dataclass(frozen=True)
class GridSpec:
    axes: tuple
    filters: tuple = field(default=())

    @property
    def names(self) -> tuple:
        return tuple(ax.name for ax in self.axes)

    def with_filters(self, filters: Iterable[Condition]) -> "GridSpec":
        return GridSpec(self.axes, tuple(self.filters) + tuple(filters))

    def all_points(self):
        """Every grid point, ignoring filters, in lexicographic order."""
        names = self.names
        for values in itertools.product(*(ax.values() for ax in self.axes)):
            yield dict(zip(names, values))

    def points(self):
        """Grid points passing every filter, in lexicographic order."""
        for pt in self.all_points():
            if all(f.holds(pt) for f in self.filters):
                yield pt

    def __str__(self):
        return ";".join(f"{ax.name}={ax}" for ax in self.axes)


def parse_grid(text: str, filters: Iterable[Condition] = ()) -> GridSpec:
    """Parse ``"a=-1:1:1/8;b=0:2:1/4"``; axes are ordered by parameter name."""
    axes = {}
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, sep, rng = chunk.partition("=")
        name = name.strip()
        parts = rng.split(":")
        if not sep or not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", name) or len(parts) != 3:
            raise ValueError(f"malformed grid axis {chunk!r}; expected name=start:end:step")
        if name in axes:
            raise ValueError(f"duplicate grid axis {name!r}")
        try:
            start, end, step = (parse_rational(p) for p in parts)
        except ParseError as exc:
            raise ValueError(f"malformed grid axis {chunk!r}: {exc}") from None
        axes[name] = GridAxis(name, start, end, step)
    if not axes:
        raise ValueError("empty grid specification")
    return GridSpec(tuple(axes[n] for n in sorted(axes)), tuple(filters))


def _check_cover(cs_list: Sequence[ConstraintSet], grid: GridSpec):
    missing = sorted({n for cs in cs_list for n in cs.parameters()} - set(grid.names))
    if missing:
        raise ValueError(f"grid does not cover parameter(s) {', '.join(missing)}")


def _sweep_chunk(args):
    cs, points = args
    return [pt for pt in points if _satisfied(cs, pt)]


def sweep(cs: ConstraintSet, grid: GridSpec, workers: int | None = None) -> list:
    """All filtered grid points where every polynomial of ``cs`` vanishes exactly."""
    _check_cover([cs], grid)
    points = list(grid.points())
    if not workers or workers <= 1 or len(points) < 2 * workers:
        return _sweep_chunk((cs, points))
    size = -(-len(points) // workers)
    chunks = [(cs, points[i:i + size]) for i in range(0, len(points), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return [pt for part in pool.map(_sweep_chunk, chunks) for pt in part]


@dataclass(frozen=True)
class EquivalenceReport:
    equivalent: bool
    points_checked: int
    satisfied_a: int
    satisfied_b: int
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "points_checked": self.points_checked,
            "satisfied_a": self.satisfied_a,
            "satisfied_b": self.satisfied_b,
            "counterexample": None
            if self.counterexample is None
            else {k: format_rational(v) for k, v in self.counterexample.items()},
        }


def equivalent_at_points(cs_a: ConstraintSet, cs_b: ConstraintSet, points: Iterable[Mapping]) -> EquivalenceReport:
    checked = sat_a = sat_b = 0
    first = None
    for pt in points:
        checked += 1
        a = _satisfied(cs_a, pt)
        b = _satisfied(cs_b, pt)
        sat_a += a
        sat_b += b
        if a != b and first is None:
            first = dict(pt)
    return EquivalenceReport(first is None, checked, sat_a, sat_b, first)


def equivalent_on_grid(cs_a: ConstraintSet, cs_b: ConstraintSet, grid: GridSpec) -> EquivalenceReport:
    """Compare the vanishing of two sets at every filtered grid point."""
    _check_cover([cs_a, cs_b], grid)
    return equivalent_at_points(cs_a, cs_b, grid.points())
