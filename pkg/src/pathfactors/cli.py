"""Command-line front end: ``pathfactors <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .conditions import Mode, custom_spec, preset, check_condition
from .factor import build_factor
from .generators import Family, FamilySpec, FamilySpecError, generate
from .graph import GraphInputError, format_graph, read_graph
from .hypomatchable import CRUSHABLE, classify_no_factor, crush_set
from .matching import DomainError, select_barrier

EXIT_FACTOR = 0
EXIT_CERTIFICATE = 10
EXIT_INPUT = 2


def frac(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _ids(xs) -> str:
    return " ".join(str(v) for v in xs)


def _parse_part(text: str) -> FamilySpec:
    """``TAG`` or ``TAG:p1,p2``; used for the operands of JOIN, UNION and KN_PLUS_COPIES."""
    tag, _, rest = text.partition(":")
    params = tuple(int(p) for p in rest.split(",") if p) if rest else ()
    return FamilySpec(Family(tag.upper()), params)


def cmd_generate(args: argparse.Namespace) -> int:
    spec = FamilySpec(Family(args.family.upper()), tuple(args.params),
                      tuple(_parse_part(p) for p in args.part), args.seed)
    gen = generate(spec)
    roles = [f"role {name} {v}" for name, v in sorted(gen.roles.items(), key=lambda kv: (kv[1], kv[0]))]
    sys.stdout.write(format_graph(gen.graph, roles))
    return 0


def cmd_barrier(args: argparse.Namespace) -> int:
    g, _ = read_graph(args.graph)
    b = select_barrier(g)
    print(f"S {_ids(b.s)}".rstrip())
    print(f"component_orders {_ids(sorted(len(c) for c in b.components))}".rstrip())
    for c in b.components:
        print(f"component {_ids(c)}")
    print(f"deficiency {b.deficiency}")
    return 0


def cmd_classify(args: argparse.Namespace) -> int:
    g, _ = read_graph(args.graph)
    cls = classify_no_factor(g, args.k)
    print(f"tag {cls.tag.value}")
    print(f"params {_ids(cls.params)}".rstrip())
    for name, v in sorted(cls.roles.items(), key=lambda kv: (kv[1], kv[0])):
        print(f"role {name} {v}")
    if cls.tag in CRUSHABLE and cls.roles:
        print(f"crush {_ids(crush_set(g, cls))}".rstrip())
    return 0


def cmd_build_factor(args: argparse.Namespace) -> int:
    g, _ = read_graph(args.graph)
    out = build_factor(g, args.k)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            json.dump(out.trace.to_dict(), fh, indent=2)
    if out.factor is not None:
        print("FACTOR")
        for p in out.factor.paths:
            print(_ids(p))
        return EXIT_FACTOR
    c = out.certificate
    print("CERTIFICATE")
    print(f"X {_ids(c.x)}".rstrip())
    print(f"lhs {frac(c.lhs)}")
    print(f"rhs {frac(c.rhs)}")
    return EXIT_CERTIFICATE


def cmd_check_condition(args: argparse.Namespace) -> int:
    g, _ = read_graph(args.graph)
    if args.preset:
        spec = preset(args.preset)
    elif args.weights:
        spec = custom_spec(args.weights, args.slope or "0", args.offset or "0")
    else:
        raise GraphInputError("give --preset or --weights")
    rep = check_condition(g, spec, Mode.parse(args.mode))
    print(f"condition {spec.name}")
    print(f"verdict {rep.verdict.value}")
    print(f"subsets_checked {rep.subsets_checked}")
    for label, c in (("witness", rep.witness), ("tightest", rep.tightest)):
        if c is not None:
            print(f"{label} X {_ids(c.x)}".rstrip())
            print(f"{label} lhs {frac(c.lhs)}")
            print(f"{label} rhs {frac(c.rhs)}")
    return 0 if rep.holds else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pathfactors",
                                 description="Path-factor construction and certificates.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a family member in the text graph format")
    p.add_argument("--family", required=True, help="family tag, e.g. A3_DPRIME or K1_SK2")
    p.add_argument("--params", nargs="*", type=int, default=[])
    p.add_argument("--part", action="append", default=[],
                   help="operand TAG:p1,p2 for JOIN, UNION, KN_PLUS_COPIES (repeatable)")
    p.add_argument("--seed", type=int, default=None, help="coin seed for optional edges")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("barrier", help="print a factor-critical barrier")
    p.add_argument("graph")
    p.set_defaults(func=cmd_barrier)

    p = sub.add_parser("classify", help="recognise the excluded family of a factor-critical graph")
    p.add_argument("graph")
    p.add_argument("--k", type=int, choices=(3, 4), required=True)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("build-factor", help="build a factor or a violated-condition certificate")
    p.add_argument("graph")
    p.add_argument("--k", type=int, choices=(3, 4), required=True)
    p.add_argument("--trace", help="write the construction trace as JSON")
    p.set_defaults(func=cmd_build_factor)

    p = sub.add_parser("check-condition", help="test a component-count condition")
    p.add_argument("graph")
    p.add_argument("--preset", help="thmA|thmB|thm13|thm14|lemma61|conjecture:k|necessary:k")
    p.add_argument("--weights", help="order:weight list, e.g. 1:1,3:2/3")
    p.add_argument("--slope")
    p.add_argument("--offset")
    p.add_argument("--mode", default="exhaustive", help="exhaustive or sampled:N:seed")
    p.set_defaults(func=cmd_check_condition)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphInputError, DomainError, FamilySpecError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
