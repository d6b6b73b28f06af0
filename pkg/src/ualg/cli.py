"""Command-line front end.

Exit codes: 0 success/proved, 1 inconclusive or refuted (the report says
which), 2 a verification check failed, 3 usage, file, or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .context import ContextError, Letter, parse_structure
from .finord import FinOrdError, parse_family, verify_structure_category
from .syntax import (
    Equation, TheoryError, Theory, parse_equation_text, parse_theory,
)
from .deduction import Bounds, DeductionError, proof_lines, prove, \
    refute_by_invariant
from .setmodel import find_model, format_model
from .universal import sigma_term_str, universal_hom
from .selftest import render_report, run_selftest


@dataclass(frozen=True)
class RunConfig:
    """Everything a command run depends on besides its input files."""

    bounds: Bounds
    max_size: int
    workers: int
    output_format: str

    def __post_init__(self) -> None:
        if self.workers < 1:
            raise ValueError("worker count must be >= 1")


def run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        bounds=Bounds(getattr(args, "depth", 4), getattr(args, "ctx", 4),
                      getattr(args, "rounds", 8)),
        max_size=getattr(args, "max_size", 2),
        workers=_workers(args),
        output_format=getattr(args, "format", "text"))


def _workers(args: argparse.Namespace) -> int:
    env = os.environ.get("UALG_WORKERS")
    if getattr(args, "workers", None):
        return max(1, args.workers)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _emit(records, args) -> None:
    if getattr(args, "format", "text") == "json-lines":
        for rec in records:
            print(json.dumps(rec, sort_keys=True))
    else:
        for rec in records:
            print(rec.get("line", ""))


def _parse_word(text: str) -> tuple[Letter, ...]:
    return tuple(Letter("s", name) for name in text.split())


def _load_theory(path: str) -> Theory:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_theory(handle.read())


def _parse_goal(theory: Theory, text: str) -> Equation:
    return parse_equation_text(theory.signature, text,
                               structure=theory.structure)


def cmd_delta_check(args) -> int:
    family = parse_family(args.family, bound=max(64, args.max + 1))
    report = verify_structure_category(family, args.max)
    if args.format == "json-lines":
        for check in report.checks:
            print(json.dumps({
                "family": str(report.family), "max": report.max_n,
                "check": check.name, "ok": check.ok,
                "detail": check.detail}, sort_keys=True))
    else:
        print("\n".join(report.lines()))
    return 0 if report.passed else 2


def cmd_ctx_rel(args) -> int:
    structure = parse_structure(args.structure)
    c = _parse_word(args.context)
    v = _parse_word(args.word)
    from .context import holds

    value = holds(structure, c, v)
    _emit([{"line": "true" if value else "false",
            "structure": args.structure, "holds": value}], args)
    return 0


def cmd_ctx_terminal(args) -> int:
    structure = parse_structure(args.structure)
    v = _parse_word(args.word)
    from .context import terminal_context

    c = terminal_context(structure, v)
    if c is None:
        _emit([{"line": "none", "terminal": None}], args)
        return 1
    _emit([{"line": " ".join(x.name for x in c),
            "terminal": [x.name for x in c]}], args)
    return 0


def cmd_prove(args) -> int:
    config = run_config(args)
    theory = _load_theory(args.file)
    goal = _parse_goal(theory, args.goal)
    result = prove(theory, goal, config.bounds)
    if result.proved:
        if args.format == "json-lines":
            print(json.dumps({"proved": True, "goal": args.goal},
                             sort_keys=True))
        else:
            print("proved")
            print("\n".join(proof_lines(result.proof)))
        return 0
    refuted = False
    if theory.structure.kind in ("injective", "strict-increasing"):
        try:
            refuted = refute_by_invariant(theory, goal)
        except DeductionError:
            refuted = False
    if refuted:
        message = "refuted-by-invariant"
    elif result.truncated:
        message = f"inconclusive (truncated: {','.join(result.truncated_by)})"
    else:
        message = "not-derivable (saturated)"
    if args.format == "json-lines":
        print(json.dumps({"proved": False, "status": message,
                          "goal": args.goal}, sort_keys=True))
    else:
        print(message)
    return 1


def cmd_countermodel(args) -> int:
    config = run_config(args)
    theory = _load_theory(args.file)
    goal = _parse_goal(theory, args.goal)
    model = find_model(theory, config.max_size, avoid=goal,
                       workers=config.workers)
    if model is None:
        _emit([{"line": "none", "model": None}], args)
        return 1
    if args.format == "json-lines":
        print(json.dumps({
            "carriers": dict(model.carriers),
            "tables": {k: list(v.table) for k, v in model.op_tables.items()},
        }, sort_keys=True))
    else:
        print(format_model(model))
    return 0


def cmd_universal(args) -> int:
    theory = _load_theory(args.file)
    doms_text, sep, result_sort = args.hom.partition("->")
    if not sep:
        raise TheoryError("hom must look like '<S> <S> -> <S>'")
    hom = (tuple(doms_text.split()), result_sort.strip())
    part = universal_hom(theory, hom, run_config(args).bounds)
    if args.format == "json-lines":
        for i, cls in enumerate(part.classes):
            print(json.dumps({
                "class": i,
                "size": len(cls),
                "representative": sigma_term_str(cls[0]),
            }, sort_keys=True))
    else:
        print(f"{len(part.classes)} classes")
        for i, cls in enumerate(part.classes):
            print(f"class {i} ({len(cls)} terms): {sigma_term_str(cls[0])}")
        if part.truncated:
            print(f"truncated: {','.join(part.truncated_by)}")
    return 0


def cmd_selftest(args) -> int:
    only = None
    if args.only:
        only = [int(piece) for piece in args.only.split(",")]
    results = run_selftest(workers=_workers(args), only=only)
    if args.format == "json-lines":
        for r in results:
            print(json.dumps({"criterion": r.number, "name": r.name,
                              "passed": r.passed, "details": r.details},
                             sort_keys=True))
    else:
        sys.stdout.write(render_report(results))
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ualg",
        description="Equational deduction over context structures, with "
                    "finite-set models and a bounded universal model.")
    parser.add_argument("--format", choices=("text", "json-lines"),
                        default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    delta = sub.add_parser("delta", help="structure-category checks")
    delta_sub = delta.add_subparsers(dest="delta_command", required=True)
    check = delta_sub.add_parser("check")
    check.add_argument("--family", required=True)
    check.add_argument("--max", type=int, default=4)
    check.set_defaults(handler=cmd_delta_check)

    ctx = sub.add_parser("ctx", help="context-structure queries")
    ctx_sub = ctx.add_subparsers(dest="ctx_command", required=True)
    rel = ctx_sub.add_parser("rel")
    rel.add_argument("--structure", required=True)
    rel.add_argument("context")
    rel.add_argument("word")
    rel.set_defaults(handler=cmd_ctx_rel)
    term = ctx_sub.add_parser("terminal")
    term.add_argument("--structure", required=True)
    term.add_argument("word")
    term.set_defaults(handler=cmd_ctx_terminal)

    prove_p = sub.add_parser("prove", help="bounded derivation search")
    prove_p.add_argument("file")
    prove_p.add_argument("--goal", required=True)
    prove_p.add_argument("--depth", type=int, default=4)
    prove_p.add_argument("--ctx", type=int, default=4)
    prove_p.add_argument("--rounds", type=int, default=8)
    prove_p.set_defaults(handler=cmd_prove)

    cm = sub.add_parser("countermodel", help="brute-force model search")
    cm.add_argument("file")
    cm.add_argument("--goal", required=True)
    cm.add_argument("--max-size", type=int, default=2)
    cm.add_argument("--workers", type=int)
    cm.set_defaults(handler=cmd_countermodel)

    uni = sub.add_parser("universal", help="bounded initial-model classes")
    uni.add_argument("file")
    uni.add_argument("--hom", required=True)
    uni.add_argument("--depth", type=int, default=3)
    uni.add_argument("--ctx", type=int, default=3)
    uni.add_argument("--rounds", type=int, default=8)
    uni.set_defaults(handler=cmd_universal)

    st = sub.add_parser("selftest", help="run the acceptance suite")
    st.add_argument("--workers", type=int)
    st.add_argument("--only", help="comma-separated criterion numbers")
    st.set_defaults(handler=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 3 if exc.code not in (0, None) else 0
    try:
        return args.handler(args)
    except (TheoryError, ContextError, FinOrdError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
