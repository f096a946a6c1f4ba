#!/usr/bin/env python3
"""Residual of the two-sided balance as a function of the zero count.

Runs the frequency family used by the acceptance suite plus a C^1 profile,
prints a residual table, and optionally writes gnuplot-ready data files
(one per test function) for plotting residual vs zero count.
"""

import argparse
import pathlib
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from picmonoid.explicit_formula import (
    balance_curve,
    load_zero_table,
    smoothed_triangle,
    windowed_cosine,
)

FREQUENCIES = [0, 3, 6, 9, 12, 15, 18, 21, 25, 30]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--support", type=float, default=5.0)
    parser.add_argument("--counts", type=int, nargs="+",
                        default=[10, 20, 40, 60, 80, 100])
    parser.add_argument("--out-dir", type=pathlib.Path, default=None,
                        help="write one gnuplot data file per function here")
    args = parser.parse_args()

    table = load_zero_table()
    functions = [windowed_cosine(frequency=om, support=args.support)
                 for om in FREQUENCIES]
    functions.append(smoothed_triangle(args.support))

    header = "function".ljust(24) + "".join(f"N={n:<12}" for n in args.counts)
    print(header)
    print("-" * len(header))
    for g in functions:
        curve = balance_curve(g, table, args.counts)
        row = g.spec_string().ljust(24)
        row += "".join(f"{residual:<14.3e}" for _, residual in curve)
        print(row)
        if args.out_dir is not None:
            args.out_dir.mkdir(parents=True, exist_ok=True)
            name = g.spec_string().replace(":", "_").replace(",", "_").replace("=", "")
            path = args.out_dir / f"residual_{name}.dat"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write("# zeros residual\n")
                for count, residual in curve:
                    fh.write(f"{count} {residual!r}\n")
    if args.out_dir is not None:
        print(f"\ndata files in {args.out_dir}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
