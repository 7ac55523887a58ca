"""Input documents, the analysis pipeline and its JSON report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import jsonschema

from .constraints import Condition, ConstraintSet, evaluate
from .exactnum import (
    EvaluationError,
    ParseError,
    ScalarExpr,
    format_rational,
    parse_rational,
    parse_scalar,
)
from .geometry import (
    DegeneratePlaneError,
    MetricTensor,
    SingularMetricError,
    basic_sectional,
    connection_residuals,
    curvature,
    curvature_residuals,
    levi_civita,
    ricci_and_scalar,
)
from .liealg import (
    LieAlgebra,
    JacobiViolation,
    LieAlgebraError,
    antisymmetry_holds,
    builtin_family,
    jacobi_residual,
    make_lie_algebra,
    normalize_family_id,
)
from .structures import (
    Endomorphism,
    check_q_structure,
    circulant_shift,
    einstein_and_constant_curvature_constraints,
    f_and_theta,
    fprop_residuals,
    product_structure,
    r_invariance_constraints,
    rloc_reduced_constraints,
    w0_constraints,
    w1_constraints,
)


class InputError(ValueError):
    """The input document or a command-line value is malformed."""


INPUT_SCHEMA = {
    "type": "object",
    "required": ["dimension", "parameters", "brackets"],
    "additionalProperties": False,
    "properties": {
        "family": {"type": "string"},
        "dimension": {"type": "integer", "minimum": 1},
        "parameters": {
            "type": "array",
            "items": {"type": "string", "pattern": "^[A-Za-z][A-Za-z0-9_]*$"},
            "uniqueItems": True,
        },
        "brackets": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["i", "j", "k", "coef"],
                "additionalProperties": False,
                "properties": {
                    "i": {"type": "integer"},
                    "j": {"type": "integer"},
                    "k": {"type": "integer"},
                    "coef": {"type": ["string", "integer"]},
                },
            },
        },
        "metric": {
            "oneOf": [
                {"const": "identity"},
                {"type": "array", "items": {"type": "array", "items": {"type": ["string", "integer"]}}},
            ]
        },
        "Q": {
            "oneOf": [
                {"const": "circulant-shift"},
                {"type": "array", "items": {"type": "array", "items": {"type": ["string", "integer"]}}},
            ]
        },
        "domain": {"type": "array", "items": {"type": "string"}},
    },
}

# names accepted by ``sweep --set`` mapped to report keys
SET_NAMES = {
    "r-invariance": "r_invariance",
    "rloc": "rloc_reduced",
    "w0": "w0",
    "w1": "w1",
    "einstein": "einstein",
    "const-curv": "const_curv",
}


@dataclass(frozen=True)
class Problem:
    algebra: LieAlgebra
    metric: MetricTensor
    q: Endomorphism
    document: dict
    family: str | None = None

    @property
    def domain_conditions(self) -> tuple:
        return tuple(Condition.parse(t, self.algebra.params) for t in self.algebra.domain_notes)


def _matrix_strings(m) -> list:
    return [[str(x) for x in row] for row in m]


def family_problem(family: str) -> Problem:
    try:
        key = normalize_family_id(family)
    except LieAlgebraError as exc:
        raise InputError(str(exc)) from None
    L = builtin_family(key)
    doc = {
        "family": key.replace("_", "."),
        "dimension": L.dim,
        "parameters": list(L.params),
        "brackets": [{"i": i, "j": j, "k": k, "coef": str(v)} for i, j, k, v in L.nonzero_brackets()],
        "metric": "identity",
        "Q": "circulant-shift",
        "domain": list(L.domain_notes),
    }
    return Problem(L, MetricTensor.identity(4), circulant_shift(4), doc, key)


def problem_from_document(doc: dict) -> Problem:
    """Validate an input document and build the objects it describes.

    Raises InputError for schema problems, JacobiViolation and
    SingularMetricError for mathematical failures.
    """
    try:
        jsonschema.validate(doc, INPUT_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"schema violation at {where}: {exc.message}") from None
    n = doc["dimension"]
    params = tuple(doc["parameters"])
    doc = dict(doc)
    doc.setdefault("metric", "identity")
    doc.setdefault("Q", "circulant-shift")
    doc.setdefault("domain", [])
    try:
        entries = [(b["i"], b["j"], b["k"], str(b["coef"])) for b in doc["brackets"]]
        L = make_lie_algebra(n, params, entries, doc["domain"])
        for text in doc["domain"]:
            Condition.parse(text, params)
        if doc["metric"] == "identity":
            g = MetricTensor.identity(n)
        else:
            _check_square(doc["metric"], n, "metric")
            g = MetricTensor.from_matrix([[str(x) for x in row] for row in doc["metric"]], params)
        if doc["Q"] == "circulant-shift":
            if n < 2:
                raise InputError("circulant-shift needs dimension >= 2")
            q = circulant_shift(n)
        else:
            _check_square(doc["Q"], n, "Q")
            q = Endomorphism.from_matrix([[str(x) for x in row] for row in doc["Q"]], params)
    except (JacobiViolation, SingularMetricError, InputError):
        raise
    except ParseError as exc:
        raise InputError(f"bad expression: {exc}") from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return Problem(L, g, q, doc, doc.get("family"))


def load_problem(path: str) -> Problem:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    return problem_from_document(doc)


def _check_square(m, n, what):
    if len(m) != n or any(len(row) != n for row in m):
        raise InputError(f"{what} must be a {n}x{n} matrix")


def parse_assignment(text: str, params) -> dict:
    """``"a=1,b=-1/2"`` -> ``{"a": Fraction(1), "b": Fraction(-1, 2)}``."""
    out = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        name, sep, value = chunk.partition("=")
        name = name.strip()
        if not sep:
            raise InputError(f"malformed assignment {chunk!r}; expected name=rational")
        if name not in params:
            raise InputError(f"unknown parameter {name!r} in assignment")
        if name in out:
            raise InputError(f"parameter {name!r} assigned twice")
        try:
            out[name] = parse_rational(value)
        except ParseError as exc:
            raise InputError(f"bad value for {name!r}: {exc}") from None
    missing = [p for p in params if p not in out]
    if missing:
        raise InputError(f"assignment misses parameter(s) {', '.join(missing)}")
    return out


# -- analysis ---------------------------------------------------------------


@dataclass
class Analysis:
    """Every computed object of one pipeline run."""

    problem: Problem
    connection: object
    curvature: object
    ricci: tuple
    scalar: ScalarExpr
    sectional: dict
    structure: object
    P: Endomorphism
    F: object
    theta: object
    sets: dict = field(default_factory=dict)
    identities: dict = field(default_factory=dict)


def run_analysis(problem: Problem, curvature_override=None) -> Analysis:
    L, g, Q = problem.algebra, problem.metric, problem.q
    conn = levi_civita(L, g)
    R = curvature_override if curvature_override is not None else curvature(L, g, conn)
    rho, tau = ricci_and_scalar(R, g)
    try:
        sect = basic_sectional(R, g)
    except DegeneratePlaneError:
        sect = {}
    structure = check_q_structure(Q, g)
    P = product_structure(Q)
    F, theta = f_and_theta(conn, P, g)
    sets = {"r_invariance": r_invariance_constraints(R, Q)}
    sets["rloc_reduced"] = (
        rloc_reduced_constraints(R) if L.dim == 4 and Q.equals(circulant_shift(4)) else None
    )
    sets["w0"] = w0_constraints(F)
    sets["w1"] = w1_constraints(F, theta, g, P) if L.dim == 4 else None
    if L.dim >= 2:
        try:
            sets["einstein"], sets["const_curv"] = einstein_and_constant_curvature_constraints(R, rho, tau, g)
        except DegeneratePlaneError:
            sets["einstein"] = sets["const_curv"] = None
    else:
        sets["einstein"] = sets["const_curv"] = None
    identities = {}
    identities.update({k: len(v) == 0 for k, v in connection_residuals(L, g, conn).items()})
    identities.update({k: len(v) == 0 for k, v in curvature_residuals(R).items()})
    identities["F_properties"] = fprop_residuals(F, P).is_empty()
    return Analysis(problem, conn, R, rho, tau, sect, structure, P, F, theta, sets, identities)


# values published for the built-in families: (quantity, substitution, reference)
PUBLISHED_VALUES = {
    "g4_5": [
        ("scalar_curvature", {"a": "1", "b": "1"}, "-8"),
        ("ricci_diagonal", {"a": "1", "b": "1"}, ["-2", "-2", "-2", "-2"]),
        ("sectional_basic_planes", {"a": "1", "b": "1"}, ["1"] * 6),
        ("theta", {}, ["0", "2*a + b + 1", "0", "0"]),
    ],
    "g4_6": [
        ("scalar_curvature", {"b": "a"}, "-8*a^2"),
        ("sectional_basic_planes", {"b": "a"}, ["a^2"] * 6),
        ("theta", {}, ["0", "a + 3*b", "0", "0"]),
    ],
}


def _computed_quantity(an: Analysis, quantity: str, subs: dict):
    params = an.problem.algebra.params
    values = {k: parse_scalar(v, params) for k, v in subs.items()}

    def show(x):
        return str(ScalarExpr.coerce(x).substitute(values))

    n = an.problem.algebra.dim
    if quantity == "scalar_curvature":
        return show(an.scalar)
    if quantity == "ricci_diagonal":
        return [show(an.ricci[i][i]) for i in range(n)]
    if quantity == "sectional_basic_planes":
        return [show(an.sectional[k]) for k in sorted(an.sectional)]
    if quantity == "theta":
        return [show(t) for t in an.theta.theta]
    raise KeyError(quantity)


def published_comparison(an: Analysis) -> list:
    out = []
    for quantity, subs, ref in PUBLISHED_VALUES.get(an.problem.family or "", []):
        computed = _computed_quantity(an, quantity, subs)
        params = an.problem.algebra.params
        refs = ref if isinstance(ref, list) else [ref]
        got = computed if isinstance(computed, list) else [computed]
        agrees = all(parse_scalar(r, params) == parse_scalar(c, params) for r, c in zip(refs, got))
        out.append({
            "quantity": quantity,
            "substitution": {k: subs[k] for k in sorted(subs)},
            "published": ref,
            "computed": computed,
            "agrees": agrees,
        })
    return out


def _sparse(items) -> list:
    return [{"indices": list(idx), "value": str(v)} for *idx, v in items]


def _set_dict(cs: ConstraintSet | None):
    if cs is None:
        return None
    return {
        "polynomials": cs.as_strings(),
        "assumptions": [str(p) for p in cs.assumptions],
    }


def _eval_str(x: ScalarExpr, at) -> str:
    return format_rational(x.evaluate(at))


def point_evaluation(an: Analysis, at: Mapping[str, Fraction]) -> dict:
    n = an.problem.algebra.dim
    R = an.curvature
    return {
        "assignment": {k: format_rational(at[k]) for k in sorted(at)},
        "curvature": [
            {"indices": [i, j, k, l], "value": _eval_str(v, at)}
            for i, j, k, l, v in R.independent_nonzero()
            if v.evaluate(at)
        ],
        "ricci": [
            {"indices": [i + 1, j + 1], "value": _eval_str(an.ricci[i][j], at)}
            for i in range(n) for j in range(n) if an.ricci[i][j].evaluate(at)
        ],
        "scalar_curvature": _eval_str(an.scalar, at),
        "sectional_curvature": [
            {"plane": list(k), "value": _eval_str(v, at)} for k, v in sorted(an.sectional.items())
        ],
        "theta": [_eval_str(t, at) for t in an.theta.theta],
        "constraint_sets": {
            name: (None if cs is None else evaluate(cs, at).to_dict()) for name, cs in an.sets.items()
        },
    }


def build_report(an: Analysis, at: Mapping[str, Fraction] | None = None) -> dict:
    L = an.problem.algebra
    n = L.dim
    jac = jacobi_residual(L)
    report = {
        "input": an.problem.document,
        "validation": {
            "antisymmetry": antisymmetry_holds(L),
            "jacobi": jac.is_empty(),
            "jacobi_residual": jac.as_strings(),
            "metric_determinant": str(an.problem.metric.det),
            "structure": an.structure.to_dict(),
            "identities": an.identities,
        },
        "connection": _sparse(an.connection.nonzero()),
        "curvature": _sparse(an.curvature.independent_nonzero()),
        "ricci": [
            {"indices": [i + 1, j + 1], "value": str(an.ricci[i][j])}
            for i in range(n) for j in range(n) if not an.ricci[i][j].is_zero()
        ],
        "scalar_curvature": str(an.scalar),
        "sectional_curvature": [
            {"plane": list(k), "value": str(v)} for k, v in sorted(an.sectional.items())
        ],
        "F": _sparse(an.F.nonzero()),
        "theta": [str(t) for t in an.theta.theta],
        "constraint_sets": {name: _set_dict(cs) for name, cs in an.sets.items()},
    }
    published = published_comparison(an)
    if published:
        report["published_values"] = published
    if at is not None:
        report["evaluation"] = point_evaluation(an, at)
    return report


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def analyze(problem: Problem, assignment: str | None = None) -> dict:
    at = None
    if assignment is not None:
        at = parse_assignment(assignment, problem.algebra.params)
    an = run_analysis(problem)
    try:
        return build_report(an, at)
    except EvaluationError as exc:
        raise InputError(str(exc)) from None
