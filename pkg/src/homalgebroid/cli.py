"""homalg: check, differentiate, reconstruct, convert and property-test.

Exit codes: 0 all checks pass, 1 a check failed or an operation was refused,
2 the input could not be read.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebroid import HomAlgebroid, algebroid_from_json, algebroid_to_json, check_axioms, parse_section
from .cochains import Evaluator, Function, D, cochain_from_json, describe
from .config import RunConfig
from .equivalence import build_family, convert, proptest, reconstruct, round_trip
from .fixtures import ALGEBROIDS, HOMLIE, homlie_builtin, parse_perturbation, perturb
from .homlie import (
    check_alpha_morphism,
    check_d_squared_vec,
    check_hom_jacobi,
    check_representation,
    homlie_from_json,
)
from .kernel import PolyParseError, parse_poly
from .report import Refusal, Report


class InputError(Exception):
    pass


def _load(args):
    """Returns ("algebroid", HomAlgebroid) or ("homlie", (algebra, rep))."""
    source = args.builtin
    if args.input and args.input.startswith("builtin:"):
        source = args.input.split(":", 1)[1]
    if source:
        if source in ALGEBROIDS:
            ab = ALGEBROIDS[source]()
        elif source in HOMLIE:
            return "homlie", homlie_builtin(source)
        else:
            raise InputError(f"unknown builtin {source!r}; choose from {sorted(ALGEBROIDS) + list(HOMLIE)}")
    elif args.input:
        try:
            data = json.loads(Path(args.input).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.input}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        try:
            if "dim" in data:
                return "homlie", homlie_from_json(data)
            ab = algebroid_from_json(data)
        except PolyParseError as exc:
            raise InputError(f"{args.input}: {exc}") from None
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{args.input}: malformed instance: {exc!r}") from None
    else:
        raise InputError("give --input PATH or --builtin NAME")
    if getattr(args, "variant", None):
        ab = ab.replace(variant=args.variant)
    for spec in getattr(args, "perturb", None) or []:
        try:
            ab = perturb(ab, *parse_perturbation(spec))
        except (PolyParseError, ValueError, IndexError) as exc:
            raise InputError(f"bad perturbation {spec!r}: {exc}") from None
    return "algebroid", ab


def _need_algebroid(kind, obj) -> HomAlgebroid:
    if kind != "algebroid":
        raise InputError("this subcommand needs an algebroid instance, not a Hom-Lie algebra")
    return obj


def _config(args) -> RunConfig:
    return RunConfig(seed=args.seed, trials=args.trials, max_degree=args.max_degree,
                     max_cochain_degree=args.max_cochain_degree, s_min=args.s_min, s_max=args.s_max,
                     emit=args.emit)


def _emit(args, report: Report, payload: dict | None = None, payload_key: str = "algebroid") -> None:
    if payload is not None and args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2) + "\n")
        payload = None
    if args.emit == "json":
        doc = report.to_dict()
        if payload is not None:
            doc[payload_key] = payload
        print(json.dumps(doc, indent=2))
    else:
        print(report.to_text())
        if payload is not None:
            print(json.dumps(payload, indent=2))


def _split_args(text: str) -> list[str]:
    s = text.strip()
    if s.startswith("[") and s.endswith("]"):
        s = s[1:-1]
    parts, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p.strip() for p in parts]


# ----------------------------------------------------------------------
# Subcommands
# ----------------------------------------------------------------------

def cmd_check(args) -> int:
    cfg = _config(args)
    kind, obj = _load(args)
    if kind == "algebroid":
        report = check_axioms(obj, cfg)
    else:
        g, rep = obj
        report = Report("Hom-Lie algebra", meta={"dim": g.dim})
        report.extend(check_alpha_morphism(g))
        report.extend(check_hom_jacobi(g))
        if rep is not None:
            try:
                rep_report = check_representation(rep)
            except Refusal as exc:
                rep_report = exc.report
            report.extend(rep_report)
            if rep_report.passed:
                for s in cfg.s_range:
                    report.extend(check_d_squared_vec(rep, s, cfg.max_cochain_degree + 1))
    _emit(args, report)
    return 0 if report.passed else 1


def cmd_differential(args) -> int:
    cfg = _config(args)
    ab = _need_algebroid(*_load(args))
    try:
        if args.cochain:
            eta = cochain_from_json(json.loads(args.cochain), ab)
        else:
            eta = Function(parse_poly(args.function or "0", ab.base.variables))
        sections = [parse_section(t, ab) for t in _split_args(args.args)]
    except (PolyParseError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise InputError(str(exc)) from None
    node = D(args.s, eta)
    if len(sections) != node.degree:
        raise InputError(f"d{args.s} of a degree-{eta.degree} cochain takes {node.degree} sections, got {len(sections)}")
    try:
        value = Evaluator(ab).evaluate(node, sections)
    except Refusal as exc:
        _emit(args, exc.report)
        return 1
    if args.emit == "json":
        print(json.dumps({"cochain": describe(node), "args": [X.to_strings() for X in sections],
                          "value": str(value), "config": cfg.to_dict()}, indent=2))
    else:
        print(value)
    return 0


def cmd_reconstruct(args) -> int:
    cfg = _config(args)
    ab = _need_algebroid(*_load(args))
    try:
        fam = build_family(ab, cfg)
        rec = reconstruct(fam, ab.variant, cfg)
    except Refusal as exc:
        _emit(args, exc.report or Report(str(exc)))
        return 1
    report = round_trip(ab, cfg)
    _emit(args, report, algebroid_to_json(rec))
    return 0 if report.passed else 1


def cmd_convert(args) -> int:
    cfg = _config(args)
    ab = _need_algebroid(*_load(args))
    try:
        out, report = convert(ab, args.target, cfg)
    except Refusal as exc:
        _emit(args, exc.report or Report(str(exc)))
        return 1
    _emit(args, report, algebroid_to_json(out))
    return 0


def cmd_proptest(args) -> int:
    cfg = _config(args)
    ab = _need_algebroid(*_load(args))
    report = proptest(ab, cfg)
    first = report.first_failure()
    if first is not None:
        report.meta["first_failure"] = first.name
    _emit(args, report)
    if first is not None and args.emit == "text":
        print(f"first failing identity: {first.name}")
    return 0 if report.passed else 1


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homalg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="instance file (JSON) or builtin:<name>")
    common.add_argument("--builtin", help=f"builtin instance: {', '.join(list(ALGEBROIDS) + list(HOMLIE))}")
    common.add_argument("--variant", choices=("A", "B"), help="override the declared definition variant")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--trials", type=int, default=8)
    common.add_argument("--max-degree", type=int, default=2)
    common.add_argument("--max-cochain-degree", type=int, default=2)
    common.add_argument("--s-min", type=int, default=0)
    common.add_argument("--s-max", type=int, default=2)
    common.add_argument("--emit", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the produced algebroid here")
    common.add_argument("--perturb", action="append", metavar="FIELD:I,J[,K]=POLY",
                        help="replace one structure coefficient after loading (repeatable)")

    sub.add_parser("check", parents=[common], help="check all axioms").set_defaults(func=cmd_check)

    p = sub.add_parser("differential", parents=[common], help="evaluate d^s of a function or cochain")
    p.add_argument("--function", help="polynomial, e.g. x^2")
    p.add_argument("--cochain", help='cochain literal, e.g. {"kind": "basis", "k": 1, "twist": 0, "components": {"1": "1"}}')
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--args", default="[]", help="sections, e.g. [e1] or [x*e1, e1]")
    p.set_defaults(func=cmd_differential)

    sub.add_parser("reconstruct", parents=[common],
                   help="rebuild anchor and bracket from the differential").set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("convert", parents=[common], help="convert to the other definition")
    p.add_argument("--target", choices=("A", "B"), required=True)
    p.set_defaults(func=cmd_convert)

    sub.add_parser("proptest", parents=[common], help="run the full property battery").set_defaults(func=cmd_proptest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.s_max < args.s_min or args.trials < 1 or args.max_degree < 0 or getattr(args, "s", 0) < 0:
        print("error: invalid run configuration", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
