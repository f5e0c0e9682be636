"""Command-line entry point for rendering crmid figures.

Usage:
    crmid-figures render --input fig1.csv --figure fig1 --output fig1.png
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Sequence

from .render import Figure, FigureDataError, FigureJob, render

__all__ = ["build_parser", "main"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crmid-figures",
        description="Render throughput figures from crmid CSV output.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("render", help="render one figure from a CSV file")
    run.add_argument("--input", required=True, help="path to a crmid CSV file")
    run.add_argument(
        "--figure",
        required=True,
        choices=[f.value for f in Figure],
        help="which figure the CSV feeds",
    )
    run.add_argument("--output", required=True, help="image path to write (e.g. .png)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    job = FigureJob(
        input_csv=args.input,
        figure=Figure(args.figure),
        output_image=args.output,
    )
    try:
        path = render(job)
    except FigureDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: cannot write {job.output_image!r}: {exc}", file=sys.stderr)
        return 2
    print(path)
    return 0
