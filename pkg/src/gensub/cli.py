"""Command-line entry point.

Exit codes: 0 success, 1 a check found a violation, 2 input diagnostics,
3 element budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from .analysis import (
    check_adjunction,
    enumerate_f,
    restriction_isomorphism_checks,
    validity,
)
from .construction import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    NotAdmittable,
    Options,
    SubtypeChecker,
    compare_order,
    embeds,
    load_poset_json,
    oracle_check,
    subtyping_chain,
)
from .hierarchy import DiagnosticError, load_class_table, parse_query, parse_term, subclassing_poset
from .operators import WcPolicy, intervals, wc
from .poset import check_poset_laws, sample_law_check

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
EXHAUSTIVE_LAW_LIMIT = 500


def _options(args) -> Options:
    return Options(args.args, args.wc_policy, args.cofree)


def _emit(args, text: str):
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(args, obj):
    _emit(args, json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def cmd_build(args, table) -> int:
    levels = subtyping_chain(table, args.depth, _options(args), args.budget)
    S = levels[-1]
    if args.format == "dot":
        _emit(args, S.to_dot())
    elif args.format == "json":
        _emit_json(args, S.to_json())
    else:
        lines = [f"S_{i}: {n} elements, {c} covers"
                 for i, (n, c) in enumerate(zip(S.level_sizes, S.level_covers))]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_query(args, table) -> int:
    op, left, right = parse_query(args.expr)
    checker = SubtypeChecker(table, _options(args))
    trace: list = []
    if op == "<:":
        result = checker.is_subtype(left, right, trace)
    else:
        result = checker.contains(right, left, trace)
    if args.format == "json":
        _emit_json(args, {
            "query": args.expr,
            "result": result,
            "trace": [{"depth": s.depth, "judgement": s.judgement, "rule": s.rule, "result": s.result}
                      for s in trace],
        })
    else:
        _emit(args, ("true" if result else "false") + "\n" + "\n".join(map(str, trace)) + "\n")
    return EXIT_OK


def _check_results(args, table):
    """Yield ``(name, ok, detail, payload)`` for every audit."""
    options = _options(args)
    levels = subtyping_chain(table, args.depth, options, args.budget)
    C, Cg = subclassing_poset(table)
    n_plain = len(C) - len(Cg)
    rng = random.Random(0)
    for S in levels:
        if len(S) <= EXHAUSTIVE_LAW_LIMIT:
            rep = check_poset_laws(S.poset)
            how = "exhaustive"
        else:
            rep = sample_law_check(S.poset, 10_000, rng)
            how = "10000 sampled triples"
        yield f"poset-laws S_{S.depth}", rep.ok, f"{len(S)} elements, {how}: {rep.summary()}", rep.to_dict()
    for small, big in zip(levels, levels[1:]):
        ok = embeds(small, big)
        yield f"embedding S_{small.depth} -> S_{big.depth}", ok, "order-embedding" if ok else "not an embedding", None
    for S in levels[:-1]:
        n = len(S)
        if options.arg_mode.value == "intervals":
            got, want, rule = len(intervals(S.poset)), S.poset.count_comparable(), "comparable pairs"
        elif options.wc_policy is WcPolicy.PAPER:
            got, want, rule = len(wc(S.poset, WcPolicy.PAPER)), 3 * n - 2, "3n-2"
        else:
            got, want, rule = len(wc(S.poset, WcPolicy.SEMANTIC)), 3 * n - 3, "3n-3"
        yield (f"cardinality args(S_{S.depth})", got == want,
               f"n={n}: {got} arguments, expected {want} ({rule})", {"n": n, "got": got, "expected": want})
        nxt = n_plain + len(Cg) * got
        actual = levels[S.depth + 1].level_sizes[-1]
        yield (f"cardinality S_{S.depth + 1}", nxt == actual,
               f"{actual} elements, expected {n_plain} + {len(Cg)}*{got} = {nxt}", None)
    S = levels[-1]
    rep = oracle_check(table, S.depth, options, S=S)
    detail = f"{rep.pairs_checked} pairs, {len(rep.disagreements)} disagreements"
    if rep.disagreements:
        a, b, m, r = rep.disagreements[0]
        detail += f"; first: {a} <: {b} materialized={m} recursive={r}"
    yield f"oracle S_{S.depth}", rep.ok, detail, rep.to_dict()
    adj = check_adjunction(table, S.depth, options, S=S)
    detail = f"{adj.pairs_checked} pairs, {len(adj.violations)} violations"
    if adj.violations:
        v = adj.violations[0]
        detail += f"; first: t={v.type}, c={v.cls}, {v.direction}"
    yield f"adjunction S_{S.depth}", adj.ok, detail, adj.to_dict()
    iso_S = S if S.depth >= 1 else subtyping_chain(table, 1, options, args.budget)[-1]
    iso = restriction_isomorphism_checks(table, iso_S.depth, options, S=iso_S)
    yield "free-restriction isomorphism", iso.free_isomorphic, f"natural map: {iso.free_natural_map}", iso.to_dict()
    if options.cofree:
        yield ("cofree-restriction isomorphism", bool(iso.cofree_isomorphic),
               f"natural map: {iso.cofree_natural_map}", None)
    if args.against:
        with open(args.against, encoding="utf-8") as fh:
            data = json.load(fh)
        rel, labels, file_opts = load_poset_json(data)
        laws = check_poset_laws(rel, limit=10)
        yield f"poset-laws {args.against}", laws.ok, laws.summary(), laws.to_dict()
        checker = SubtypeChecker(table, Options(file_opts.arg_mode, file_opts.wc_policy, options.cofree))
        rep = compare_order(rel, labels, checker, limit=20)
        detail = f"{rep.pairs_checked} pairs, {len(rep.disagreements)} disagreements"
        if rep.disagreements:
            a, b, m, r = rep.disagreements[0]
            detail += f"; first: {a} <: {b} in file={m}, recursive={r}"
        yield f"oracle {args.against}", rep.ok, detail, rep.to_dict()


def cmd_check(args, table) -> int:
    results = list(_check_results(args, table))
    failed = [r for r in results if not r[1]]
    if args.format == "json":
        _emit_json(args, {
            "ok": not failed,
            "checks": [{"name": n, "ok": ok, "detail": d, "data": p} for n, ok, d, p in results],
        })
    else:
        lines = [f"{'PASS' if ok else 'FAIL'}  {n}: {d}" for n, ok, d, _ in results]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_VIOLATION if failed else EXIT_OK


def cmd_validate(args, table) -> int:
    term = parse_term(args.term)
    v = validity(table, term, _options(args))
    if args.format == "json":
        _emit_json(args, v.to_dict())
        return EXIT_OK
    if not v.admittable:
        head = f"{v.term}: not admittable"
    elif v.valid:
        head = f"{v.term}: admittable, valid"
    else:
        head = f"{v.term}: admittable, not valid (denotes the empty set)"
    _emit(args, "\n".join([head] + [f"  {r.kind}: {r}" for r in v.reasons]) + "\n")
    return EXIT_OK


def cmd_enumerate(args, table) -> int:
    if not table.is_generic(args.generic):
        print(f"error: {args.generic} is not a generic class", file=sys.stderr)
        return EXIT_INPUT
    e = enumerate_f(table, args.generic, args.depth, _options(args), args.budget)
    if args.format == "json":
        _emit_json(args, e.to_dict())
        return EXIT_OK
    out = [
        f"F = {e.generic}, depth {e.depth}",
        f"F-subtypes ({len(e.f_subtypes)}): " + ", ".join(e.f_subtypes),
        f"  maximal: {', '.join(e.maximal_f_subtypes)}",
        f"  minimal: {', '.join(e.minimal_f_subtypes)}",
        f"F-supertypes ({len(e.f_supertypes)}): " + ", ".join(e.f_supertypes),
        f"  maximal: {', '.join(e.maximal_f_supertypes)}",
        f"  minimal: {', '.join(e.minimal_f_supertypes)}",
        f"fixed points: {', '.join(e.fixed_points) or 'none'}",
        f"free type {e.free_type} is an F-subtype: {e.free_type_is_f_subtype}",
    ]
    _emit(args, "\n".join(out) + "\n")
    return EXIT_OK


def cmd_report(args, table) -> int:
    from .report import write_report

    out_dir = args.out or "report"
    paths = write_report(table, args.depth, out_dir, args.budget, delimiter=args.delimiter)
    for key, path in paths.items():
        print(f"{key}: {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="class table: DSL file or JSON mirror")
    common.add_argument("--depth", type=int, default=1, help="construction depth k (default 1)")
    common.add_argument("--args", choices=["wildcards", "intervals"], default="wildcards")
    common.add_argument("--wc-policy", choices=["paper", "semantic"], default="paper")
    common.add_argument("--cofree", action="store_true", help="enable cofree types C<!>")
    common.add_argument("--format", choices=["text", "json", "dot"], default="text")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max elements per level")
    common.add_argument("--out", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="gensub", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("build", parents=[common], help="build S_k and print level sizes")
    p.set_defaults(func=cmd_build)
    p = sub.add_parser("query", parents=[common], help="decide 'A <: B' or 'p ⊑ q' with a trace")
    p.add_argument("expr")
    p.set_defaults(func=cmd_query)
    p = sub.add_parser("check", parents=[common], help="run every audit on S_k")
    p.add_argument("--against", help="also audit an exported subtyping poset (JSON)")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("validate", parents=[common], help="admittability and validity of a type")
    p.add_argument("term")
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("enumerate", parents=[common], help="F-subtypes and F-supertypes of a generic class")
    p.add_argument("generic")
    p.set_defaults(func=cmd_enumerate)
    p = sub.add_parser("report", parents=[common], help="write CSV tables and figures to --out")
    p.add_argument("--delimiter", default=",")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.depth < 0 or args.budget < 1:
        print("error: --depth must be >= 0 and --budget >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        table = load_class_table(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DiagnosticError as exc:
        for d in exc.diagnostics:
            print(f"{args.input}:{d}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, table)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DiagnosticError, NotAdmittable, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
