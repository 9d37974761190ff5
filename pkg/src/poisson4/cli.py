"""Command-line front end.

Every subcommand is a thin adapter over the library: it assembles a bivector
from a built-in model or a user-supplied Casimir pair, calls one library
operation, and prints the payload.  Exit codes: 0 success, 1 mathematical
failure (singular point, anchor not in the image, non-Poisson verdict under
--expect-poisson, non-finite trajectory), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional

from . import SCHEMA_VERSION, __version__
from .expr import Expr, ParseError, Point4, parse
from .leaves import (
    NonFiniteError,
    NotInImageError,
    SingularPointError,
    flow,
    leaf_form_coefficient,
)
from .models import MODEL_NAMES, catalogue_json, critical_locus_indicator, model
from .poisson import (
    Bivector,
    CasimirPair,
    bivector_to_json_dict,
    casimir_check,
    flaschka_ratiu,
    is_poisson,
    rank_at,
)

MATH_SUBCOMMANDS = (
    "bivector",
    "jacobi",
    "casimir-check",
    "rank",
    "leaf-form",
    "flow",
    "locus",
)


class UsageError(Exception):
    """Invalid invocation; reported on stderr with exit status 2."""


class MathError(Exception):
    """Well-formed invocation whose mathematical outcome is a failure."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poisson4",
        description="Poisson bivectors on R^4 from Casimir pairs",
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"poisson4 {__version__} (schema {SCHEMA_VERSION})",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--model", choices=MODEL_NAMES, help="built-in model")
    source.add_argument("--c1", help="first Casimir (expression)")
    source.add_argument("--c2", help="second Casimir (expression)")
    source.add_argument("--s", help="parameter value (exact rational or decimal)")
    source.add_argument("--k", help="conformal factor (expression)")

    p = sub.add_parser("bivector", parents=[source], help="print the bivector")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("jacobi", parents=[source], help="check the Jacobi identity")
    p.add_argument(
        "--expect-poisson",
        action="store_true",
        help="exit 1 when the Jacobiator does not vanish",
    )

    p = sub.add_parser(
        "casimir-check", parents=[source], help="verify Casimir annihilation"
    )
    p.add_argument("--h", help="extra function to test (expression)")

    p = sub.add_parser("rank", parents=[source], help="rank at a point")
    p.add_argument("--point", required=True, help="comma-separated x,y,z,t")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser(
        "leaf-form", parents=[source], help="leaf symplectic coefficient at a point"
    )
    p.add_argument("--point", required=True, help="comma-separated x,y,z,t")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("flow", parents=[source], help="integrate a Hamiltonian flow")
    p.add_argument("--h", required=True, help="Hamiltonian (expression)")
    p.add_argument("--point", required=True, help="initial point x,y,z,t")
    p.add_argument("--dt", type=float, default=1e-3, help="step size")
    p.add_argument("--steps", type=int, default=1000, help="number of steps")
    p.add_argument("--format", choices=("csv", "text", "json"), default="csv")

    p = sub.add_parser(
        "locus", parents=[source], help="critical-locus membership at a point"
    )
    p.add_argument("--point", required=True, help="comma-separated x,y,z,t")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("list-models", help="print the model catalogue")
    p.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def _parse_expr(text: str, flag: str) -> Expr:
    try:
        return parse(text)
    except ParseError as err:
        raise UsageError(f"{flag}: {err}") from err


def _parse_s(text: Optional[str]) -> Optional[Fraction]:
    if text is None:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(f"--s: not a rational number: {text!r}") from err


def _parse_point(text: str, s: Optional[Fraction]) -> Point4:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--point: expected four comma-separated coordinates")
    try:
        coords = [float(v) for v in parts]
    except ValueError as err:
        raise UsageError(f"--point: bad coordinate in {text!r}") from err
    return Point4(*coords, s=0.0 if s is None else float(s))


def _resolve_pair(args, *, numeric: bool) -> tuple[CasimirPair, Optional[Fraction]]:
    """The Casimir pair named by --model or --c1/--c2, with s substituted."""
    s = _parse_s(args.s)
    has_model = args.model is not None
    has_pair = args.c1 is not None and args.c2 is not None
    if has_model == has_pair:
        raise UsageError("provide exactly one of --model or both --c1 and --c2")
    if has_model:
        if numeric and s is None and model(args.model).uses_s:
            raise UsageError(f"--s: required for model {args.model!r} here")
        try:
            spec = model(args.model, s)
        except ValueError as err:
            raise UsageError(str(err)) from err
        return spec.casimirs, s
    if args.c1 is None or args.c2 is None:
        raise UsageError("--c1 and --c2 must be given together")
    c1 = _parse_expr(args.c1, "--c1")
    c2 = _parse_expr(args.c2, "--c2")
    if s is not None:
        c1, c2 = c1.substitute_s(s), c2.substitute_s(s)
    return CasimirPair(c1, c2), s


def _resolve_bivector(args, *, numeric: bool) -> tuple[Bivector, Optional[Fraction]]:
    pair, s = _resolve_pair(args, numeric=numeric)
    k = None
    if getattr(args, "k", None) is not None:
        k = _parse_expr(args.k, "--k")
        if s is not None:
            k = k.substitute_s(s)
    try:
        return flaschka_ratiu(pair, k=k), s
    except ValueError as err:
        raise UsageError(f"--k: {err}") from err


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _cmd_bivector(args) -> None:
    b, _ = _resolve_bivector(args, numeric=False)
    data = bivector_to_json_dict(b)
    if args.format == "json":
        print(json.dumps(data, indent=2))
        return
    print("coords: " + " ".join(data["coords"]))
    print(f"k: {data['k'] if data['k'] is not None else 'symbolic'}")
    for row in data["matrix"]:
        print("  [" + ", ".join(row) + "]")


def _cmd_jacobi(args) -> None:
    b, _ = _resolve_bivector(args, numeric=False)
    verdict = is_poisson(b)
    if verdict:
        print("Poisson: true")
        return
    names = ",".join(verdict.witness_triple)
    print(f"Poisson: false (J^({names}) = {verdict.witness})")
    if args.expect_poisson:
        raise MathError("Jacobi identity fails and --expect-poisson is set")


def _cmd_casimir_check(args) -> None:
    pair, s = _resolve_pair(args, numeric=False)
    b = flaschka_ratiu(pair)
    print(f"C1: {str(casimir_check(b, pair.c1)).lower()}")
    print(f"C2: {str(casimir_check(b, pair.c2)).lower()}")
    if args.h is not None:
        h = _parse_expr(args.h, "--h")
        if s is not None:
            h = h.substitute_s(s)
        print(f"h: {str(casimir_check(b, h)).lower()}")


def _cmd_rank(args) -> None:
    b, s = _resolve_bivector(args, numeric=True)
    p = _parse_point(args.point, s)
    r = rank_at(b, p)
    if args.format == "json":
        print(json.dumps({"point": list(p.coords()), "s": p.s, "rank": r}))
    else:
        print(f"rank: {r}")


def _cmd_leaf_form(args) -> None:
    b, s = _resolve_bivector(args, numeric=True)
    p = _parse_point(args.point, s)
    try:
        r = leaf_form_coefficient(b, p)
    except (SingularPointError, NotInImageError) as err:
        raise MathError(str(err)) from err
    if args.format == "json":
        print(
            json.dumps(
                {
                    "point": list(p.coords()),
                    "s": p.s,
                    "coefficient": r.coefficient,
                    "chart": list(r.chart),
                    "area_coefficient": r.area_coefficient,
                    "antisymmetry_defect": r.antisymmetry_defect,
                }
            )
        )
        return
    print(f"coefficient: {_fmt(r.coefficient)} (chart {r.chart[0]},{r.chart[1]})")
    print(f"area coefficient: {_fmt(r.area_coefficient)}")


def _cmd_flow(args) -> None:
    b, s = _resolve_bivector(args, numeric=True)
    p0 = _parse_point(args.point, s)
    h = _parse_expr(args.h, "--h")
    if s is not None:
        h = h.substitute_s(s)
    if args.dt < 0:
        raise UsageError("--dt: must be non-negative")
    if args.steps < 1:
        raise UsageError("--steps: must be at least 1")
    try:
        traj = flow(b, h, p0, args.dt, args.steps)
    except NonFiniteError as err:
        raise MathError(str(err)) from err
    if args.format == "csv":
        sys.stdout.write(traj.to_csv())
    elif args.format == "json":
        print(
            json.dumps(
                {
                    "dt": traj.dt,
                    "steps": args.steps,
                    "drift": {k: traj.drift[k] for k in sorted(traj.drift)},
                    "final": list(traj.points[-1].coords()),
                }
            )
        )
    else:
        for key in ("C1", "C2", "H"):
            if key in traj.drift:
                print(f"max |{key} - {key}(0)| = {_fmt(traj.drift[key])}")


def _cmd_locus(args) -> None:
    pair, s = _resolve_pair(args, numeric=True)
    p = _parse_point(args.point, s)
    b = flaschka_ratiu(pair)
    from .poisson import bivector_matrix_at

    on_locus = bool((abs(bivector_matrix_at(b, p)) <= 1e-9).all())
    if args.format == "json":
        print(json.dumps({"point": list(p.coords()), "s": p.s, "critical": on_locus}))
    else:
        print(f"critical: {str(on_locus).lower()}")


def _cmd_list_models(args) -> None:
    if args.format == "json":
        print(catalogue_json())
        return
    for name in MODEL_NAMES:
        spec = model(name)
        tag = "s" if spec.uses_s else "-"
        print(f"{name:10s} [{tag}]  C1 = {spec.casimirs.c1}  C2 = {spec.casimirs.c2}")


_HANDLERS = {
    "bivector": _cmd_bivector,
    "jacobi": _cmd_jacobi,
    "casimir-check": _cmd_casimir_check,
    "rank": _cmd_rank,
    "leaf-form": _cmd_leaf_form,
    "flow": _cmd_flow,
    "locus": _cmd_locus,
    "list-models": _cmd_list_models,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:  # argparse handles --version/--help/usage
        return int(exit_.code or 0)
    try:
        _HANDLERS[args.subcommand](args)
    except UsageError as err:
        print(f"poisson4: error: {err}", file=sys.stderr)
        return 2
    except MathError as err:
        print(f"poisson4: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
