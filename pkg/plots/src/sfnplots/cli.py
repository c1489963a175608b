"""Command-line front end: `sfnplots plot`.

Renders one figure from one or more simulator CSVs and prints the
annotated scheme gaps. Exit code 0 on success, 2 on input errors.
"""

from __future__ import annotations

import argparse
import sys

from sfnplots.curves import CurveSpec, render


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="sfnplots", description="Render figures from link-simulation CSVs"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    plot = sub.add_parser("plot", help="render one figure from CSV files")
    plot.add_argument("--csv", nargs="+", required=True, help="input CSV file(s)")
    plot.add_argument(
        "--kind",
        choices=["required-ebn0", "ber"],
        default="required-ebn0",
        help="figure kind (matches the CSV schema)",
    )
    plot.add_argument("--out", required=True, help="output image path")
    plot.add_argument(
        "--include-censored",
        action="store_true",
        help="admit censored / low-confidence rows instead of refusing",
    )
    args = parser.parse_args(argv)
    spec = CurveSpec(
        csv_paths=tuple(args.csv),
        kind=args.kind,
        out_path=args.out,
        include_censored=args.include_censored,
    )
    try:
        lines = render(spec)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
