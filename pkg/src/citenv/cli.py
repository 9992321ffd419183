"""Command-line front end: ``citenv map | batch | compare``.

Exit codes: 0 success, 2 malformed input files, 3 data errors (unknown
ids, missing years, bad parameter values), 4 numerical failures.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .environment import Mode
from .errors import DataError, NumericalError, ParseError
from .pipeline import (
    RunConfig,
    cmd_batch,
    cmd_compare,
    cmd_map,
    render_batch_summary,
    render_compare,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4


def _add_common(parser: argparse.ArgumentParser, need_year: bool = True) -> None:
    parser.add_argument("--registry", required=True, type=Path,
                        help="journal registry CSV")
    parser.add_argument("--edges", required=True, type=Path,
                        help="citation edge CSV")
    if need_year:
        parser.add_argument("--year", required=True, type=int,
                            help="publication year slice to analyze")
    parser.add_argument("--mode", choices=[m.value for m in Mode],
                        default=Mode.CITED.value,
                        help="follow received citations (cited) or references (citing)")
    parser.add_argument("--threshold", type=float, default=0.01,
                        help="membership fraction of the seed margin (default 0.01)")
    parser.add_argument("--min-cosine", type=float, default=0.2,
                        help="suppress cosine values below this (default 0.2)")
    parser.add_argument("--suppress-singles", action="store_true",
                        help="drop off-diagonal count-1 cells (ISI convention)")
    parser.add_argument("--layout-seed", type=int, default=42,
                        help="seed for the deterministic layout")
    parser.add_argument("--scale", type=float, default=50.0,
                        help="display units per unit citation share")
    parser.add_argument("--out", type=Path, default=Path("citenv-out"),
                        help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="citenv",
        description="Extract and map local journal citation environments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_map = sub.add_parser("map", help="map one seed journal")
    _add_common(p_map)
    p_map.add_argument("--seed", required=True, help="seed journal id")

    p_batch = sub.add_parser("batch", help="map every registered journal")
    _add_common(p_batch)

    p_compare = sub.add_parser("compare", help="compare one seed across two years")
    _add_common(p_compare, need_year=False)
    p_compare.add_argument("--seed", required=True, help="seed journal id")
    p_compare.add_argument("--years", nargs=2, type=int, required=True,
                           metavar=("YEAR_A", "YEAR_B"))

    return parser


def _config(args: argparse.Namespace, year: int) -> RunConfig:
    return RunConfig(
        registry_path=args.registry,
        edges_path=args.edges,
        year=year,
        mode=Mode(args.mode),
        threshold_fraction=args.threshold,
        min_cosine=args.min_cosine,
        suppress_singles=args.suppress_singles,
        layout_seed=args.layout_seed,
        scale=args.scale,
        out_dir=args.out,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "map":
            target, result = cmd_map(_config(args, args.year), args.seed)
            print(f"wrote {len(result.artifacts)} artifacts to {target}")
            for warning in result.warnings:
                print(f"warning: {warning}", file=sys.stderr)
        elif args.command == "batch":
            rows = cmd_batch(_config(args, args.year))
            sys.stdout.write(render_batch_summary(rows))
        elif args.command == "compare":
            year_a, year_b = args.years
            config = _config(args, year_a)
            report = cmd_compare(config, args.seed, year_a, year_b)
            sys.stdout.write(render_compare(report))
    except ParseError as exc:
        print(f"citenv: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DataError as exc:
        print(f"citenv: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"citenv: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"citenv: i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
