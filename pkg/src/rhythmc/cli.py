"""rhythmc command line: analyze, corpus, tree, and rules subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .analysis import (
    AnalysisConfig,
    CorpusRow,
    analyze_file,
    corpus_csv,
    load_score,
    params_from_env,
    run_corpus,
)
from .bracketed import encode, render_svg
from .classify import classify, to_grammar
from .rules import extract_rules, rules_to_productions
from .score import ScoreError
from .tree import TreeError, build_tree, pad_to_power_of_two

__all__ = ["main"]


def _fraction(text: str) -> Fraction:
    num, sep, den = text.partition("/")
    try:
        value = Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"invalid rational {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError("grid must be positive")
    return value


def _depths(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid depth list {text!r}") from exc
    if not values or any(d < 0 for d in values):
        raise argparse.ArgumentTypeError("depths must be non-negative integers")
    return tuple(sorted(set(values)))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rhythmc",
        description="Convert monophonic rhythms to metrical trees, extract "
        "rewriting rules, classify them, and report grammar-entropy complexity.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--grid", type=_fraction, default=None,
                       help="quantization grid as p/q whole notes (overrides file headers)")

    analyze = sub.add_parser("analyze", help="complexity report for one score")
    analyze.add_argument("path", type=Path)
    add_common(analyze)
    analyze.add_argument("--depths", type=_depths, default=(0, 1, 2, 3),
                         help="comma-separated isomorphism depths (default 0,1,2,3)")
    analyze.add_argument("--format", dest="output_format", default="text",
                         choices=("text", "json", "csv"))

    corpus = sub.add_parser("corpus", help="analyze every score in a directory")
    corpus.add_argument("directory", type=Path)
    add_common(corpus)
    corpus.add_argument("--depths", type=_depths, default=(0, 1, 2, 3))
    corpus.add_argument("--out", type=Path, default=None,
                        help="CSV output path (stdout when omitted)")

    tree = sub.add_parser("tree", help="print the bracketed string of a score's tree")
    tree.add_argument("path", type=Path)
    add_common(tree)
    tree.add_argument("--svg", type=Path, default=None, help="also write a turtle rendering")
    tree.add_argument("--style", default="canonical", choices=("canonical", "root-f"))
    tree.add_argument("--step", type=float, default=20.0)
    tree.add_argument("--angle", type=float, default=25.0)

    rules = sub.add_parser("rules", help="print the rule listing and class table")
    rules.add_argument("path", type=Path)
    add_common(rules)
    rules.add_argument("--depth", type=int, default=1, help="isomorphism depth (default 1)")
    rules.add_argument("--json", action="store_true", help="dump the class grammar as JSON")

    return parser


def _load_tree(path: Path, grid):
    seq, _ = load_score(path, grid)
    return build_tree(pad_to_power_of_two(seq))


def _cmd_analyze(args) -> int:
    config = AnalysisConfig(grid=args.grid, depths=args.depths,
                            output_format=args.output_format, params=params_from_env())
    reports = analyze_file(args.path, config)
    if args.output_format == "json":
        payload = {"file": str(args.path), "reports": [r.to_dict() for r in reports]}
        print(json.dumps(payload, indent=2, sort_keys=True))
    elif args.output_format == "csv":
        rows = [CorpusRow(file=str(args.path), depth=r.depth, report=r) for r in reports]
        sys.stdout.write(corpus_csv(rows))
    else:
        print(f"file: {args.path}")
        for r in reports:
            d = r.diagnostics
            print(
                f"depth {r.depth}: classes={d['class_count']} rules={d['rule_count']} "
                f"radius={r.radius!r} k0={r.k0!r} "
                f"converged_everywhere={str(r.converged_everywhere).lower()} "
                f"pad_units={d['pad_units']} inconclusive_probes={d['inconclusive_probes']}"
            )
    return 0


def _cmd_corpus(args) -> int:
    config = AnalysisConfig(grid=args.grid, depths=args.depths,
                            output_format="csv", params=params_from_env())
    rows = run_corpus(args.directory, config)
    text = corpus_csv(rows)
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 1 if any(row.error is not None for row in rows) else 0


def _cmd_tree(args) -> int:
    tree = _load_tree(args.path, args.grid)
    print(encode(tree, style=args.style))
    if args.svg is not None:
        args.svg.write_text(render_svg(tree, step=args.step, angle=args.angle),
                            encoding="utf-8")
    return 0


def _cmd_rules(args) -> int:
    if args.depth < 0:
        raise ValueError("depth must be non-negative")
    tree = _load_tree(args.path, args.grid)
    ruleset = extract_rules(tree)
    partition = classify(ruleset, args.depth)
    grammar = to_grammar(ruleset, partition)
    if args.json:
        print(json.dumps(grammar.to_dict(), indent=2, sort_keys=True))
        return 0
    listing = rules_to_productions(ruleset)
    if listing:
        sys.stdout.write(listing)
    print("Other → null")
    print(f"classes (depth {args.depth}):")
    for idx, cls in enumerate(grammar.classes, start=1):
        if cls.terminal:
            print(f"({cls.size}) C{idx} → null")
        else:
            for p in cls.productions:
                print(f"({p.mult}) C{idx} → C{p.left} C{p.right}")
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "corpus": _cmd_corpus,
    "tree": _cmd_tree,
    "rules": _cmd_rules,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ScoreError, TreeError, OSError, ValueError) as exc:
        print(f"rhythmc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
