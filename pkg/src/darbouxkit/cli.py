"""Command-line front end.

Exit status: 0 success, 1 verification failure or expression syntax error,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DarbouxKitError, FieldSyntaxError, ScenarioError
from .fields import evaluate_many, parse_field, to_text, tree_string
from .figures import FIELDS, GridSpec, sample, soliton_field
from .scenarios import ACCEPTANCE_BUILTINS, builtin_names, load_scenario, run_builtin, run_suite
from .solitons import Mode, SolitonSpec, Family

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMPARE_TOL = 1e-12


class UsageError(Exception):
    pass


def parse_mode(text: str) -> Mode:
    """``k=R,x0=R`` (``a=`` is accepted as a synonym of ``k``)."""
    vals = {}
    for chunk in text.split(","):
        key, sep, v = chunk.partition("=")
        key = key.strip()
        if not sep or key not in ("k", "a", "x0"):
            raise UsageError(f"bad --mode component {chunk!r}; expected k=R,x0=R")
        try:
            vals["k" if key == "a" else key] = float(v)
        except ValueError:
            raise UsageError(f"bad number in --mode: {v!r}") from None
    if "k" not in vals:
        raise UsageError("--mode needs k=")
    return Mode(vals["k"], vals.get("x0", 0.0))


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)


# ----------------------------------------------------------------------------
# soliton


def cmd_soliton(args) -> int:
    modes = [parse_mode(m) for m in args.mode]
    if not modes:
        modes = [Mode(1.0)] if args.family == "akns" else [Mode(2.0)]
        if args.solitons == 2:
            modes.append(Mode(2.0) if args.family == "akns" else Mode(3.0))
    if len(modes) != args.solitons:
        raise UsageError(f"--solitons {args.solitons} but {len(modes)} --mode flag(s) given")
    try:
        grid = GridSpec.parse(args.grid)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    SolitonSpec(Family(args.family), args.a0, tuple(modes)).validate()
    f = soliton_field(args.family, args.a0, modes, args.field)
    out = sample(f, grid)
    _write(args.out, out.to_csv())
    return EXIT_OK


# ----------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    if args.scenario:
        path = Path(args.scenario)
        if not path.is_file():
            raise UsageError(f"scenario file not found: {path}")
        reports = [run_suite(load_scenario(path))]
    else:
        names = list(ACCEPTANCE_BUILTINS) if args.builtin == "all" else [args.builtin]
        reports = [run_builtin(n) for n in names]
    for rep in reports:
        print(f"== {rep.name}: {'PASS' if rep.passed else 'FAIL'}")
        for line in rep.lines():
            print(f"  {line}")
    ok = all(r.passed for r in reports)
    if args.out:
        if len(reports) == 1:
            payload = reports[0].to_dict()
        else:
            payload = {"pass": ok, "reports": [r.to_dict() for r in reports]}
        _write(args.out, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


# ----------------------------------------------------------------------------
# parse-check


def _point(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise UsageError(f"--eval-at expects 'a,b', got {text!r}") from None
    return a, b


def cmd_parse_check(args) -> int:
    exprs = [("expr", args.expr)] + ([("compare", args.compare)] if args.compare else [])
    parsed = []
    for flag, text in exprs:
        try:
            parsed.append(parse_field(text))
        except FieldSyntaxError as exc:
            print(f"--{flag}: syntax error: {exc}", file=sys.stderr)
            print(f"  {text}\n  {' ' * exc.offset}^", file=sys.stderr)
            return EXIT_FAIL
    f = parsed[0]
    print(f"parsed: {to_text(f)}")
    print(tree_string(f))
    if args.eval_at is None:
        if args.compare:
            raise UsageError("--compare needs --eval-at")
        return EXIT_OK
    p = _point(args.eval_at)
    jets = evaluate_many(parsed, p, 4, 3, strict=True).jets
    print(f"value at {p}: {float(jets[0].value)!r}")
    if len(jets) == 1:
        return EXIT_OK
    c1, c2 = jets[0].coeffs, jets[1].coeffs
    diff = float(np.max(np.abs(c1 - c2) / (1.0 + np.abs(c2))))
    same = diff <= COMPARE_TOL
    print(f"compare value: {float(jets[1].value)!r}")
    print(f"max relative jet difference (orders 4,3): {diff:.3e} -> {'EQUAL' if same else 'DIFFERENT'}")
    return EXIT_OK if same else EXIT_FAIL


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="darbouxkit", description="Soliton constructions with exact residual checks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("soliton", help="sample a soliton field on a grid and write CSV")
    s.add_argument("--family", choices=[f.value for f in Family], required=True)
    s.add_argument("--solitons", type=int, choices=(1, 2), default=1)
    s.add_argument("--a0", type=float, required=True)
    s.add_argument("--mode", action="append", default=[], metavar="k=R,x0=R")
    s.add_argument("--grid", default="a=-3:3:61,b=-3:3:61", metavar="a=min:max:n,b=min:max:n")
    s.add_argument("--field", choices=FIELDS, default="M")
    s.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    s.set_defaults(func=cmd_soliton)

    v = sub.add_parser("verify", help="run a verification scenario")
    g = v.add_mutually_exclusive_group(required=True)
    g.add_argument("--scenario", metavar="PATH")
    g.add_argument("--builtin", choices=["all"] + builtin_names())
    v.add_argument("--out", default=None, help="JSON report path")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("parse-check", help="parse a field expression and print its tree")
    c.add_argument("--expr", required=True)
    c.add_argument("--eval-at", default=None, metavar="a,b")
    c.add_argument("--compare", default=None, metavar="EXPR")
    c.set_defaults(func=cmd_parse_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ScenarioError, DarbouxKitError, OSError) as exc:
        print(f"darbouxkit {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
