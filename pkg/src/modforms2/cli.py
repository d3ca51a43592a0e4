"""Command-line interface: ``modforms2 {expand,verify,numeric,check,catalog}``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for usage,
parse and evaluation errors.
"""

from __future__ import annotations

import argparse
import difflib
import json
import os
import sys
from contextlib import contextmanager

from . import catalog
from .dsl import EvalError, ParseError, check_identity
from .identities import HEADROOM, environment, registry, verify_all
from .series import SeriesError

DEFAULT_ORDER = 64
MIN_VERIFY_ORDER = 8
DEFAULT_TOL = 1e-10

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def parse_complex(text: str) -> complex:
    """Parse literals such as ``i``, ``-2i``, ``0.4+0.8i`` or ``3``."""
    t = text.strip().replace(" ", "")
    if not t:
        raise argparse.ArgumentTypeError("empty complex literal")
    if t.endswith("i"):
        body = t[:-1]
        # bare 'i' after an optional real part and sign means unit imaginary
        if body == "" or body[-1] in "+-":
            body += "1"
        t = body + "j"
    try:
        return complex(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r} (use forms like i, 0.4+0.8i)") from None


def parse_matrix(text: str):
    from .numeric.transforms import Matrix2

    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"matrix must be a,b,c,d; got {text!r}")
    vals = []
    for p in parts:
        p = p.strip()
        try:
            vals.append(int(p))
        except ValueError:
            vals.append(parse_complex(p))
    try:
        return Matrix2(*vals)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _order_default() -> int:
    raw = os.environ.get("MODFORMS2_ORDER")
    if raw is None:
        return DEFAULT_ORDER
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MODFORMS2_ORDER must be an integer, got {raw!r}") from None


def _tol(text: str) -> float:
    v = float(text)
    if not 0 < v <= 1e-2:
        raise argparse.ArgumentTypeError("tol must lie in (0, 1e-2]")
    return v


def _suggest(word: str, choices) -> str:
    close = difflib.get_close_matches(word, list(choices), n=3, cutoff=0.5)
    return f"; did you mean {', '.join(close)}?" if close else f"; known: {', '.join(choices)}"


@contextmanager
def _output(path: str | None):
    if path and path != "-":
        with open(path, "w") as fh:
            yield fh
    else:
        yield sys.stdout


def _emit(args, payload, text: str):
    with _output(args.output) as out:
        if args.format == "json":
            json.dump(payload, out, indent=2)
            out.write("\n")
        else:
            out.write(text.rstrip("\n") + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_expand(args) -> int:
    if args.name not in catalog.CATALOG:
        raise UsageError(f"unknown series {args.name!r}" + _suggest(args.name, catalog.CATALOG))
    if args.order < 1:
        raise UsageError("order must be at least 1")
    try:
        g = catalog.build(args.name, args.order, args.mode)
    except ValueError as err:
        raise UsageError(str(err)) from None
    body = g.body
    items = list(body.items())
    payload = {
        "name": args.name,
        "lambda": g.degree,
        "valuation": body.valuation if items else None,
        "precision": body.precision if body.precision != float("inf") else None,
        "coefficients": [[e, str(c)] for e, c in items],
    }
    _emit(args, payload, g.dump())
    return EXIT_OK


def _format_reports_text(reports, order: int) -> str:
    lines = [f"# exact check through q^{order}; passing to order N is evidence, not proof"]
    for r in reports:
        line = f"{r.id:<6} {r.status:<5} {r.ms:9.1f} ms"
        if r.mismatch:
            m = r.mismatch
            line += f"  first mismatch at q^({m.exponent24}/24): lhs {m.lhs}, rhs {m.rhs}"
        if r.message:
            line += f"  {r.message}"
        lines.append(line)
    n_pass = sum(r.passed for r in reports)
    lines.append(f"{n_pass}/{len(reports)} passed")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    reg = registry()
    if args.all and args.ids:
        raise UsageError("give identity ids or --all, not both")
    if not args.all and not args.ids:
        raise UsageError("give identity ids or --all")
    for i in args.ids:
        if i not in reg:
            raise UsageError(f"unknown identity {i!r}" + _suggest(i, reg))
    if args.order < MIN_VERIFY_ORDER:
        raise UsageError(
            f"insufficient order: {args.order} < {MIN_VERIFY_ORDER}; identities such as S5 need more "
            f"terms than the {HEADROOM}-term headroom provides at this order"
        )
    reports = verify_all(args.order, ids=args.ids or None, workers=args.workers)
    _emit(args, [r.as_dict() for r in reports], _format_reports_text(reports, args.order))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_check(args) -> int:
    if args.order < MIN_VERIFY_ORDER:
        raise UsageError(f"insufficient order: {args.order} < {MIN_VERIFY_ORDER}")
    env = environment(args.order)
    report = check_identity(args.lhs, args.rhs, env, args.order, "user")
    _emit(args, report.as_dict(), _format_reports_text([report], args.order))
    return EXIT_OK if report.passed else EXIT_FAIL


_LAW_ALIASES = {
    "E2": "E2_law",
    "Ecal2": "Ecal2_law",
    "y": "y_transform",
    "u": "u_transform",
}


def cmd_numeric(args) -> int:
    from .numeric import checks
    from .numeric.fields import KINDS
    from .numeric.transforms import LAWS, GroupError, transform_residual

    check = args.check
    if check == "ode":
        z0, z1 = args.z_from, args.z_to
        if args.kind is None:
            reports = checks.ode_battery(z0=z0, z1=z1, tol=args.rk_tol, gate=args.tol or checks.ODE_GATE)
        elif args.kind == "yg":
            reports = [checks.yg_check(z1, z0, tol=args.rk_tol, gate=args.tol or 1e-6)]
        elif args.kind in KINDS:
            reports = [checks.ode_check(args.kind, z0, z1, args.rk_tol, args.tol or checks.ODE_GATE)]
        else:
            raise UsageError(f"unknown kind {args.kind!r}" + _suggest(args.kind, KINDS + ("yg",)))
    elif check == "transform":
        if args.matrix is None:
            laws = None
            if args.law:
                laws = (_LAW_ALIASES.get(args.law, args.law),)
                if laws[0] not in LAWS:
                    raise UsageError(f"unknown law {args.law!r}" + _suggest(args.law, LAWS))
            reports = checks.transform_battery(seed=args.seed, **({"laws": laws} if laws else {}))
        else:
            if not args.law:
                raise UsageError("--matrix needs --law")
            law = _LAW_ALIASES.get(args.law, args.law)
            if law not in LAWS:
                raise UsageError(f"unknown law {args.law!r}" + _suggest(args.law, LAWS))
            z = args.z if args.z is not None else 1j
            tol = args.tol or (1e-9 if law in ("E2_law", "Ecal2_law") else 1e-7)
            try:
                res = transform_residual(law, args.matrix, z)
            except (GroupError, ValueError) as err:
                raise UsageError(str(err)) from None
            reports = [checks.NumericReport(f"transform:{law}", res, tol, z, args.matrix(z), args.matrix)]
    elif check == "schwarz":
        reports = checks.schwarz_battery(tol=args.tol or 1e-6, method=args.method)
    elif check == "shadow":
        z = args.z if args.z is not None else 1j
        reports = checks.shadow_battery(z=z, tol=args.tol or DEFAULT_TOL)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(check)
    lines = []
    for r in reports:
        where = ""
        if r.z0 is not None:
            where = f" z0={checks.format_complex(r.z0)}"
        if r.z1 is not None:
            where += f" z1={checks.format_complex(r.z1)}"
        lines.append(f"{r.check:<22} {'pass' if r.passed else 'FAIL'}  residual={r.residual:.3e} tol={r.tol:.0e}{where}")
        if r.detail and not r.passed:
            lines.append(f"    {r.detail}")
    lines.append(f"{sum(r.passed for r in reports)}/{len(reports)} passed")
    _emit(args, [r.as_dict() for r in reports], "\n".join(lines))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_catalog(args) -> int:
    if args.identities:
        reg = registry()
        payload = [{"id": i.id, "lhs": i.lhs, "rhs": i.rhs, "description": i.description} for i in reg.values()]
        text = "\n".join(f"{i.id:<5} {i.lhs} == {i.rhs}" for i in reg.values())
    else:
        payload = [
            {"name": d.name, "weight": d.weight, "group": d.group, "modes": list(d.constructions),
             "description": d.description}
            for d in catalog.CATALOG.values()
        ]
        text = "\n".join(
            f"{d.name:<7} weight {d.weight:<8} {d.group:<9} modes: {', '.join(d.constructions):<40} {d.description}"
            for d in catalog.CATALOG.values()
        )
    _emit(args, payload, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser(order_default: int = DEFAULT_ORDER) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", "-o", help="write the report here instead of standard output")

    p = argparse.ArgumentParser(prog="modforms2", description="Exact and numerical checks for level-2 modular forms.")
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("expand", parents=[common], help="print the coefficients of a catalog series")
    e.add_argument("name")
    e.add_argument("--order", type=int, default=order_default)
    e.add_argument("--mode", help="alternative construction (see 'catalog')")
    e.set_defaults(func=cmd_expand)

    v = sub.add_parser("verify", parents=[common], help="verify registry identities exactly")
    v.add_argument("ids", nargs="*")
    v.add_argument("--all", action="store_true")
    v.add_argument("--order", type=int, default=order_default)
    v.add_argument("--workers", type=int, default=1)
    v.set_defaults(func=cmd_verify)

    n = sub.add_parser("numeric", parents=[common], help="run a numerical check battery")
    n.add_argument("--check", choices=("ode", "transform", "schwarz", "shadow"), required=True)
    n.add_argument("--kind", help="ODE kind: chazy, eq18, dh, gdh, schwarzian or yg")
    n.add_argument("--from", dest="z_from", type=parse_complex, default=1j)
    n.add_argument("--to", dest="z_to", type=parse_complex, default=0.4 + 0.8j)
    n.add_argument("--law", help="E2, Ecal2, y or u (or the full law names)")
    n.add_argument("--matrix", type=parse_matrix, help="a,b,c,d")
    n.add_argument("--z", type=parse_complex)
    n.add_argument("--tol", type=_tol, help="pass threshold (defaults per check)")
    n.add_argument("--rk-tol", type=_tol, default=1e-11, help="integrator tolerance")
    n.add_argument("--seed", type=int, default=0)
    n.add_argument("--method", choices=("cauchy", "fd5"), default="cauchy")
    n.set_defaults(func=cmd_numeric)

    c = sub.add_parser("check", parents=[common], help="check a user-supplied identity")
    c.add_argument("--lhs", required=True)
    c.add_argument("--rhs", required=True)
    c.add_argument("--order", type=int, default=order_default)
    c.set_defaults(func=cmd_check)

    k = sub.add_parser("catalog", parents=[common], help="list catalog series or registry identities")
    k.add_argument("--identities", action="store_true")
    k.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser(_order_default())
    except UsageError as err:
        print(f"modforms2: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as err:
        print(f"modforms2: parse error: {err}", file=sys.stderr)
        if err.text:
            print(f"  {err.text}\n  {' ' * err.offset}^", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, EvalError, SeriesError) as err:
        print(f"modforms2: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
