"""Command line interface: ``rekit <command> ...``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .automata import AutomatonError, Nfa, state_transition_counts
from .build import CONSTRUCTIONS
from .harness import run_experiment, to_csv
from .oracle import difference_up_to
from .reduction import REDUCTIONS
from .regen import EmptyLanguageError, emit_dataset, write_dataset
from .syntax import RegexError, is_reduced, is_snf, measures, parse, to_snf


def _default_seed() -> int:
    try:
        return int(os.environ.get("REKIT_SEED", "0"))
    except ValueError:
        return 0


def _sizes(text: str) -> list[int]:
    try:
        sizes = [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of sizes: {text!r}")
    if not sizes or min(sizes) < 1:
        raise argparse.ArgumentTypeError("sizes must be positive")
    return sizes


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rekit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="uniformly sample regular expressions of one size")
    g.add_argument("--size", type=int, required=True)
    g.add_argument("--alphabet", type=int, required=True, help="alphabet size k")
    g.add_argument("--count", type=int, required=True)
    g.add_argument("--seed", type=int, default=_default_seed())
    g.add_argument("--out")

    c = sub.add_parser("convert", help="build an automaton from an expression")
    c.add_argument("--method", choices=sorted(CONSTRUCTIONS), required=True)
    c.add_argument("--re", required=True)
    c.add_argument("--format", choices=["json", "dot"], default="json")

    r = sub.add_parser("reduce", help="quotient an automaton by an invariant equivalence")
    r.add_argument("--equiv", choices=["r", "l", "lr"], required=True)
    r.add_argument("--in", dest="infile", required=True)

    m = sub.add_parser("measure", help="measures of an expression")
    m.add_argument("--re", required=True)

    e = sub.add_parser("experiment", help="aggregate statistics over random samples")
    e.add_argument("--sizes", type=_sizes, required=True)
    e.add_argument("--alphabet", type=int, required=True)
    e.add_argument("--samples", type=int, required=True)
    e.add_argument("--seed", type=int, default=_default_seed())
    e.add_argument("--csv", required=True)
    e.add_argument("--oracle-len", type=int, default=6)
    e.add_argument("--oracle-fraction", type=float, default=0.05)
    e.add_argument("--full-oracle", action="store_true", help="check every record")
    e.add_argument("--jobs", type=int, default=1)

    o = sub.add_parser("oracle", help="compare a construction with the expression's language")
    o.add_argument("--re", required=True)
    o.add_argument("--method", choices=sorted(CONSTRUCTIONS), default="pd")
    o.add_argument("--max-len", type=int, default=6)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args, parser)
    except RegexError as exc:
        parser.error(str(exc))
    except (AutomatonError, EmptyLanguageError, OSError, json.JSONDecodeError) as exc:
        print(f"rekit: {exc}", file=sys.stderr)
        return 2


def _run(args, parser) -> int:
    out = sys.stdout
    if args.command == "gen":
        if args.size < 1 or args.alphabet < 1 or args.count < 0:
            parser.error("size and alphabet must be positive, count nonnegative")
        records = emit_dataset(args.alphabet, args.size, args.count, args.seed)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as f:
                write_dataset(records, f, args.seed)
        else:
            write_dataset(records, out, args.seed)
        return 0

    if args.command == "convert":
        a = CONSTRUCTIONS[args.method](parse(args.re))
        out.write((a.to_json(indent=None) if args.format == "json" else a.to_dot()) + "\n")
        return 0

    if args.command == "reduce":
        with open(args.infile, encoding="utf-8") as f:
            a = Nfa.from_json(f.read())
        out.write(REDUCTIONS[args.equiv](a).to_json() + "\n")
        return 0

    if args.command == "measure":
        r = parse(args.re)
        size, alph, rpn = measures(r)
        sc, tc = state_transition_counts(CONSTRUCTIONS["pd"](r))
        report = {"size": size, "alph": alph, "rpn": rpn, "nullable": r.nullable,
                  "snf": is_snf(r), "reduced": is_reduced(r), "snfr": is_reduced(to_snf(r)),
                  "sc": sc, "tc": tc}
        out.write(json.dumps(report) + "\n")
        return 0

    if args.command == "experiment":
        fraction = 1.0 if args.full_oracle else args.oracle_fraction
        stats = run_experiment(args.sizes, args.alphabet, args.samples, args.seed,
                               oracle_len=args.oracle_len, oracle_fraction=fraction,
                               jobs=args.jobs)
        with open(args.csv, "w", encoding="utf-8", newline="") as f:
            f.write(to_csv(stats))
        failures = sum(int(s.aggregates["oracle_failures"]) for s in stats)
        if failures:
            print(f"rekit: {failures} oracle failures", file=sys.stderr)
            return 1
        return 0

    if args.command == "oracle":
        r = parse(args.re)
        a = CONSTRUCTIONS[args.method](r)
        missing, extra = difference_up_to(r, a, args.max_len)
        if missing or extra:
            w = sorted(missing | extra)[0]
            print(f"FAIL: {args.method} disagrees on {''.join(w) or '@e'!r}")
            return 1
        print(f"PASS: {args.method} agrees with the expression up to length {args.max_len}")
        return 0

    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
