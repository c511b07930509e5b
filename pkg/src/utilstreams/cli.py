"""Command-line front end: compare worlds, analyze derived streams, run the corpus."""
from __future__ import annotations

import argparse
import sys

from .corpus import CASES_BY_NAME, run_corpus
from .criteria import CRITERIA_BY_NAME, VIEW_ORDER, compare_all
from .errors import EngineError, ParseError
from .stream import (
    classify_partial_sums,
    density,
    eventual_sign_profile,
    format_ext,
    liminf_limsup,
)
from .world import LocationView, lifetime_stream, load_world, realized_time_stream

EXIT_PARSE = 2
EXIT_ENGINE = 3


def _views(text: str) -> list[LocationView]:
    if text == "all":
        return list(VIEW_ORDER)
    return [LocationView(v) for v in text.split(",")]


def _criteria(text: str) -> list[str] | None:
    if text == "all":
        return None
    names = [n.strip() for n in text.split(",") if n.strip()]
    for n in names:
        if n not in CRITERIA_BY_NAME:
            raise ParseError(f"unknown criterion {n!r}")
    return names


def cmd_compare(args) -> int:
    if len(args.world) != 2:
        raise ParseError("compare needs --world exactly twice")
    w1, w2 = (load_world(p) for p in args.world)
    matrix = compare_all(w1, w2, _views(args.view), _criteria(args.criteria))
    sys.stdout.write(matrix.render(args.format))
    return 0


def cmd_analyze(args) -> int:
    w = load_world(args.world)
    sep = "\t" if args.format == "machine" else " "
    if args.what == "realized":
        s = realized_time_stream(w)
    else:
        s = lifetime_stream(w)
    if args.what == "density":
        d = density(s)
        print("undefined" if d is None else format_ext(d))
        return 0
    if args.what == "signs":
        print(eventual_sign_profile(s))
        return 0
    lo, hi = liminf_limsup(s)
    print(s.to_literal())
    print(sep.join(("liminf", format_ext(lo))))
    print(sep.join(("limsup", format_ext(hi))))
    print(sep.join(("partial_sums", str(classify_partial_sums(s)))))
    d = density(s)
    print(sep.join(("density", "undefined" if d is None else format_ext(d))))
    return 0


def cmd_corpus(args) -> int:
    report = run_corpus(args.case, args.corpus_dir, args.format)
    sys.stdout.write(report.render())
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="utilstreams", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compare", help="print the verdict matrix for two worlds")
    p.add_argument("--world", action="append", required=True, help="worldspec file (give twice)")
    p.add_argument("--view", default="all", help="times|persons|slots|all (comma-separated allowed)")
    p.add_argument("--criteria", default="all", help="comma-separated criterion names, or all")
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("analyze", help="print a derived stream and its asymptotics")
    p.add_argument("--world", required=True)
    p.add_argument("--what", choices=("realized", "lifetime", "density", "signs"), required=True)
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("corpus", help="run the golden cases and the oracle checks")
    p.add_argument("--case", choices=sorted(CASES_BY_NAME))
    p.add_argument("--corpus-dir", default=None)
    p.add_argument("--format", choices=("text", "machine"), default="text")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EngineError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
