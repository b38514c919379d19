"""Command line entry point: ``sautfn <subcommand>``.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage error or refusal.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from . import harness
from .automorphisms import abelianization_matrix, int_det
from .catalog import group_by_name
from .freewords import RankError, WordSyntaxError, abelianize_word, parse_word, render_word
from .gf2group import sl_table
from .hyperplanes import Indicator, complete_basis, hyperplane_basis, lemma_a_change, s_basis, verify_lemma_a
from .presentations import (
    PresentationSyntaxError,
    WorkBoundExceeded,
    classify_surjections,
    enumerate_homs,
    parse_presentation,
    sl2_as_finite_group,
)


def _emit(obj) -> None:
    print(json.dumps(obj))


def cmd_check(args) -> int:
    if args.name not in harness.CHECKS:
        print(f"unknown check {args.name!r}; known checks: {', '.join(harness.CHECKS)}", file=sys.stderr)
        return 2
    check = harness.CHECKS[args.name]
    params = {}
    if check.param is not None:
        if args.n is None:
            print(f"check {args.name} needs --n ({check.param})", file=sys.stderr)
            return 2
        params[check.param] = args.n
    if args.name == "conjugation-stability":
        params["seed"] = args.seed
    if args.allow_large:
        params["allow_large"] = True
    report = harness.run_check(args.name, params)
    if args.json:
        print(report.to_json(timing=args.timing))
    else:
        shown = " ".join(f"{k}={v}" for k, v in report.params.items())
        print(f"{report.status.upper():7s} {report.check} {shown}".rstrip())
        for k, v in report.counts.items():
            print(f"  {k}: {v}")
        if report.witness is not None:
            print(f"  witness: {json.dumps(report.witness)}")
    return harness.exit_code([report])


def cmd_all(args) -> int:
    reports = []
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for name, params in harness.profile_runs(args.profile):
            report = harness.run_check(name, params)
            reports.append(report)
            out.write(report.to_json(timing=args.timing) + "\n")
            out.flush()
    finally:
        if args.output:
            out.close()
    code = harness.exit_code(reports)
    failed = [r.check for r in reports if not r.passed]
    summary = "all checks passed" if not failed else f"failed: {', '.join(failed)}"
    print(f"{len(reports)} reports, {summary}", file=sys.stderr)
    return code


def cmd_word(args) -> int:
    rank = args.rank
    if rank is None:
        rank = max([int(k) for k in re.findall(r"x(\d+)", args.expr)] or [1])
    try:
        w = parse_word(args.expr, rank)
    except (WordSyntaxError, RankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit({"rank": rank, "reduced": render_word(w), "length": len(w), "abelianization": list(abelianize_word(w))})
    return 0


def _indicator(text: str) -> Indicator:
    try:
        return Indicator.parse(text)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(2)


def cmd_hyperplane(args) -> int:
    ind = _indicator(args.bits)
    plane = hyperplane_basis(ind)
    words, beta = complete_basis(ind)
    _emit({
        "indicator": str(ind),
        "hyperplane_basis": ["".join(map(str, v)) for v in plane.basis],
        "s_basis": [render_word(w) for w in s_basis(ind)],
        "completed_basis": [render_word(w) for w in words],
        "determinant": int_det(abelianization_matrix(beta)),
        "certificate": beta.to_json()["certificate"],
    })
    return 0


def cmd_lemma_a(args) -> int:
    a, b = _indicator(args.first), _indicator(args.second)
    if a.n != b.n or a == b:
        print("error: indicators must be distinct and of equal length", file=sys.stderr)
        return 2
    phi = lemma_a_change(a, b)
    ok = verify_lemma_a(a, b, phi)
    data = phi.to_json()
    _emit({"I": str(a), "I_prime": str(b), "basis": data["images"], "certificate": data["certificate"], "verified": ok})
    return 0 if ok else 1


def _target_group(name: str):
    m = re.fullmatch(r"SL\((\d),2\)", name)
    if m:
        group, ti = sl2_as_finite_group(sl_table(int(m.group(1))))
        return group, [ti]
    return group_by_name(name), []


def cmd_homs(args) -> int:
    try:
        pres = parse_presentation(args.presentation)
        group, outer = _target_group(args.group)
        homs = enumerate_homs(pres, group)
    except (PresentationSyntaxError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except WorkBoundExceeded as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    classes = classify_surjections(homs, group, outer)
    _emit({
        "presentation": pres.render(),
        "group": group.name,
        "order": group.order,
        "count": len(homs),
        "homs": [list(h.images) for h in homs],
        "surjective": sum(len(c) for c in classes),
        "surjection_classes": [[list(h.images) for h in c] for c in classes],
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sautfn", description="Verification workbench for SAut(F_n) quotients.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run one named check")
    p.add_argument("name", help=f"one of: {', '.join(harness.CHECKS)}")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-large", action="store_true", help="permit n = 5 for sl-order")
    p.add_argument("--timing", action="store_true", help="include elapsed_ms in JSON output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("all", help="run every registered check")
    p.add_argument("--profile", choices=("quick", "full"), default="quick")
    p.add_argument("--output", default=None, help="write newline-delimited JSON here instead of stdout")
    p.add_argument("--timing", action="store_true")
    p.set_defaults(func=cmd_all)

    p = sub.add_parser("word", help="reduce a word and show its abelianization")
    p.add_argument("expr")
    p.add_argument("--rank", type=int, default=None)
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("hyperplane", help="hyperplane and S_I data for an indicator bitstring")
    p.add_argument("bits")
    p.set_defaults(func=cmd_hyperplane)

    p = sub.add_parser("lemma-a", help="basis change for two indicator bitstrings")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_lemma_a)

    p = sub.add_parser("homs", help="enumerate homomorphisms from a presentation into a catalog group")
    p.add_argument("presentation")
    p.add_argument("group", help="catalog name (Z4, V4, S3, D4, Q8, ...) or SL(2,2) / SL(3,2)")
    p.set_defaults(func=cmd_homs)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
