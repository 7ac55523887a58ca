"""Command-line interface: ``liecurv analyze | sweep | oracle``.

Exit statuses: 0 success, 1 oracle found inequivalent sets, 2 input error,
3 Jacobi failure, 4 singular metric, 5 structure check failed under --strict.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from fractions import Fraction

from .constraints import equivalent_at_points, equivalent_on_grid, parse_grid, sweep
from .exactnum import format_rational
from .geometry import SingularMetricError
from .liealg import JacobiViolation
from .report import (
    SET_NAMES,
    InputError,
    Problem,
    analyze,
    dump_report,
    family_problem,
    load_problem,
    run_analysis,
)
from .structures import rloc_reduced_constraints, r_invariance_constraints, circulant_shift

log = logging.getLogger("liecurv")

EXIT_OK = 0
EXIT_INEQUIVALENT = 1
EXIT_SCHEMA = 2
EXIT_JACOBI = 3
EXIT_SINGULAR = 4
EXIT_STRUCTURE = 5


def _source(args) -> Problem:
    if args.family:
        return family_problem(args.family)
    return load_problem(args.input)


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    problem = _source(args)
    report = analyze(problem, args.assign)
    _write(dump_report(report), args.output)
    if args.strict and not all(
        v for k, v in report["validation"]["structure"].items() if k != "trace_P"
    ):
        log.error("Q/P structure checks failed")
        return EXIT_STRUCTURE
    return EXIT_OK


def _grid_for(problem: Problem, text: str, use_domain: bool):
    try:
        filters = problem.domain_conditions if use_domain else ()
        return parse_grid(text, filters)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def cmd_sweep(args) -> int:
    problem = _source(args)
    key = SET_NAMES[args.set]
    grid = _grid_for(problem, args.grid, not args.no_domain)
    cs = run_analysis(problem).sets[key]
    if cs is None:
        raise InputError(f"constraint set {args.set!r} is not defined for this input")
    try:
        points = sweep(cs, grid, workers=args.workers)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out = {
        "source": problem.document.get("family") or args.input,
        "set": args.set,
        "polynomials": cs.as_strings(),
        "grid": str(grid),
        "filters": [f.text for f in grid.filters],
        "count": len(points),
        "points": [{k: format_rational(v) for k, v in pt.items()} for pt in points],
    }
    _write(json.dumps(out, indent=2) + "\n", args.output)
    return EXIT_OK


def random_rational_points(params, count: int, seed: int = 0, span: int = 3, max_den: int = 12) -> list:
    """Seeded random rational points; every fourth point sets all parameters equal."""
    rng = random.Random(seed)
    points = []
    for idx in range(count):
        def draw():
            den = rng.randint(1, max_den)
            return Fraction(rng.randint(-span * den, span * den), den)
        if idx % 4 == 3:
            v = draw()
            points.append({p: v for p in params})
        else:
            points.append({p: draw() for p in params})
    return points


def run_oracle(problem: Problem, grid_text: str, curvature=None, random_points: int = 0, seed: int = 0) -> dict:
    """Compare the full Q-invariance set with the reduced list on a grid.

    ``curvature`` substitutes a hand-built curvature array for testing.
    """
    if problem.algebra.dim != 4 or not problem.q.equals(circulant_shift(4)):
        raise InputError("the oracle needs dimension 4 with the circulant shift")
    an = run_analysis(problem, curvature_override=curvature)
    full = r_invariance_constraints(an.curvature, problem.q)
    reduced = rloc_reduced_constraints(an.curvature)
    grid = _grid_for(problem, grid_text, use_domain=False)
    try:
        on_grid = equivalent_on_grid(full, reduced, grid)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    result = {
        "source": problem.document.get("family") or "input",
        "full": full.as_strings(),
        "reduced": reduced.as_strings(),
        "grid": str(grid),
        "grid_result": on_grid.to_dict(),
    }
    equivalent = on_grid.equivalent
    if random_points:
        pts = random_rational_points(problem.algebra.params, random_points, seed)
        rnd = equivalent_at_points(full, reduced, pts)
        result["random_result"] = rnd.to_dict()
        equivalent = equivalent and rnd.equivalent
    result["equivalent"] = equivalent
    return result


def cmd_oracle(args) -> int:
    problem = _source(args)
    result = run_oracle(problem, args.grid, random_points=args.random, seed=args.seed)
    _write(json.dumps(result, indent=2) + "\n", args.output)
    return EXIT_OK if result["equivalent"] else EXIT_INEQUIVALENT


def _add_source(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="JSON input document")
    src.add_argument("--family", choices=["g4.5", "g4.6"], help="built-in algebra family")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="liecurv", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="compute connection, curvature and constraint sets")
    _add_source(p)
    p.add_argument("--assign", metavar="NAME=VALUE,...", help="evaluate everything at this point")
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--strict", action="store_true", help="fail (status 5) if the Q/P checks fail")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="exact grid sweep of one constraint set")
    _add_source(p)
    p.add_argument("--set", required=True, choices=sorted(SET_NAMES))
    p.add_argument("--grid", required=True, metavar="SPEC", help='e.g. "a=-1:1:1/8;b=-1:1:1/8"')
    p.add_argument("--output", metavar="PATH")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-domain", action="store_true", help="ignore the domain conditions")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle", help="full vs reduced Q-invariance equivalence check")
    _add_source(p)
    p.add_argument("--grid", required=True, metavar="SPEC")
    p.add_argument("--random", type=int, default=0, metavar="N", help="also test N random points")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", metavar="PATH")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_SCHEMA
    except JacobiViolation as exc:
        log.error("%s", exc)
        return EXIT_JACOBI
    except SingularMetricError as exc:
        log.error("%s", exc)
        return EXIT_SINGULAR


if __name__ == "__main__":
    sys.exit(main())
