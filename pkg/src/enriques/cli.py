"""Command-line interface.

Subcommands::

    validate  <file>                          structural check, exit 0/2
    recover   <bp-file> [--algorithm basic|grouped] [--out FILE]
              [--emit values|multiplicities|both] [--trace]
    invariants <curve-file> [--local POINT]
    compare   <a> <b> [--mode equal|similar]
    render    <file> [--annotate mn|weights|none]

Exit codes: 0 success, 1 negative comparison or recoverable domain error
(message on stderr), 2 invalid input.  All numeric output is exact, written
as an integer or ``numerator/denominator``.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import recovery
from .cluster import WeightKind
from .documents import parse, serialize
from .dot import render_dot
from .errors import (
    DocumentSyntaxError,
    DocumentValidationError,
    EnriquesError,
)
from .oracle import invariant_quotient, rupture_points
from .ordering import defining_free_point
from .similarity import are_similar, canonical_digest

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INVALID = 2


def _format_exact(x: Fraction | int) -> str:
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def _load(path: str) -> tuple:
    text = Path(path).read_text(encoding="utf-8")
    return parse(text)


def _point_name(tree, p) -> str:
    return tree.label(p) or f"#{p}"


def _cmd_validate(args) -> int:
    try:
        _load(args.file)
    except DocumentSyntaxError as err:
        print(err)
        return EXIT_INVALID
    except DocumentValidationError as err:
        for diagnostic in err.diagnostics:
            print(diagnostic)
        return EXIT_INVALID
    return EXIT_OK


def _cmd_recover(args) -> int:
    tree, bp = _load(args.file)
    if bp.kind is not WeightKind.VIRTUAL:
        print("recover expects a virtual (base-point) cluster", file=sys.stderr)
        return EXIT_INVALID
    trace_lines: list[str] = []

    def trace(entry: recovery.TraceEntry) -> None:
        q, m, n, decision = entry
        word = {"first": ">I→first", "second": "<I→second",
                "stop": "=I stop"}[decision]
        trace_lines.append(f"{_point_name(tree, q)} {m}/{n} {word}")

    run = recovery.recover_grouped if args.algorithm == "grouped" else recovery.recover
    result = run(bp, trace=trace if args.trace else None)
    if args.trace:
        for line in trace_lines:
            print(line)
    print("d\tI_d\tp_d\tq_d")
    for d in sorted(result.association):
        assoc = result.association[d]
        print("\t".join([
            _point_name(tree, d),
            _format_exact(assoc.invariant),
            _point_name(tree, assoc.base_free_point),
            _point_name(tree, assoc.rupture_point),
        ]))
    if args.out:
        emit = args.emit
        out = Path(args.out)
        if emit in ("values", "both"):
            target = out if emit == "values" else _suffixed(out, "values")
            target.write_text(serialize(tree, result.values), encoding="utf-8")
        if emit in ("multiplicities", "both"):
            target = (out if emit == "multiplicities"
                      else _suffixed(out, "multiplicities"))
            target.write_text(
                serialize(tree, result.multiplicities), encoding="utf-8")
    return EXIT_OK


def _suffixed(path: Path, kind: str) -> Path:
    return path.with_name(f"{path.stem}.{kind}{path.suffix or '.json'}")


def _resolve_point(tree, name: str):
    for p in tree.points():
        if tree.label(p) == name:
            return p
    return None


def _cmd_invariants(args) -> int:
    tree, curve = _load(args.file)
    if curve.kind is not WeightKind.MULTIPLICITY:
        print("invariants expects a multiplicity (curve) cluster",
              file=sys.stderr)
        return EXIT_INVALID
    ruptures = rupture_points(curve)
    if args.local is not None:
        base = _resolve_point(tree, args.local)
        if base is None:
            print(f"no point labeled {args.local!r}", file=sys.stderr)
            return EXIT_INVALID
        ruptures = {
            q for q in ruptures
            if q == base or (tree.is_satellite(q)
                             and defining_free_point(tree, q) == base)
        }
    for q in sorted(ruptures):
        print(f"{_point_name(tree, q)}\t{_format_exact(invariant_quotient(curve, q))}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    tree_a, cluster_a = _load(args.a)
    tree_b, cluster_b = _load(args.b)
    digest_a = canonical_digest(cluster_a)
    digest_b = canonical_digest(cluster_b)
    print(digest_a)
    print(digest_b)
    if args.mode == "similar":
        related = are_similar(cluster_a, cluster_b)
    else:
        related = (
            are_similar(cluster_a, cluster_b)
            and cluster_a.kind is cluster_b.kind
            and serialize(tree_a, cluster_a) == serialize(tree_b, cluster_b)
        )
    return EXIT_OK if related else EXIT_NEGATIVE


def _cmd_render(args) -> int:
    tree, cluster = _load(args.file)
    print(render_dot(tree, [("cluster", cluster)], annotate=args.annotate),
          end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="enriques",
        description="weighted clusters of infinitely near points:"
                    " validation, recovery from polar base points,"
                    " invariants, comparison, rendering")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a cluster document")
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser(
        "recover", help="recover the singular cluster from base points")
    p.add_argument("file")
    p.add_argument("--algorithm", choices=["basic", "grouped"],
                   default="basic")
    p.add_argument("--out")
    p.add_argument("--emit", choices=["values", "multiplicities", "both"],
                   default="values")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=_cmd_recover)

    p = sub.add_parser(
        "invariants", help="rupture points and polar invariants of a curve")
    p.add_argument("file")
    p.add_argument("--local", metavar="POINT")
    p.set_defaults(func=_cmd_invariants)

    p = sub.add_parser("compare", help="compare two cluster documents")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=["equal", "similar"], default="equal")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("render", help="render a cluster document as DOT")
    p.add_argument("file")
    p.add_argument("--annotate", choices=["mn", "weights", "none"],
                   default="none")
    p.set_defaults(func=_cmd_render)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DocumentSyntaxError as err:
        print(err, file=sys.stderr)
        return EXIT_INVALID
    except DocumentValidationError as err:
        for diagnostic in err.diagnostics:
            print(diagnostic, file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as err:
        print(err, file=sys.stderr)
        return EXIT_INVALID
    except EnriquesError as err:
        print(f"{type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_NEGATIVE


if __name__ == "__main__":
    sys.exit(main())
