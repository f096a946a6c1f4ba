#!/usr/bin/env python3
"""Regenerate the bundled table of critical-line zero ordinates.

Computes the first N ordinates with mpmath at high working precision,
rounds them to 15 significant digits, certifies each against the package's
own Euler-Maclaurin evaluator, and writes the data file the library loads
at runtime.  mpmath is only needed to *regenerate* the table; the library
itself never imports it.
"""

import argparse
import pathlib
import sys

import mpmath

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from picmonoid.explicit_formula import verify_zero_ordinate

DEFAULT_OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "picmonoid" / "data" / "zeta_zeros_100.txt"

HEADER = """\
# Ordinates gamma of the first {n} zeros 1/2 + i*gamma of the Riemann zeta
# function on the critical line, one per line, 15 significant digits.
# Regenerate with scripts/generate_zero_table.py: computed by
# mpmath.mp.zetazero at {dps} decimal digits of working precision, then
# certified in-package by an independent Euler-Maclaurin evaluation of
# |zeta(1/2 + i*gamma)| < 1e-8.
"""


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("-n", type=int, default=100, help="number of ordinates")
    parser.add_argument("--dps", type=int, default=30, help="mpmath working precision")
    parser.add_argument("--out", type=pathlib.Path, default=DEFAULT_OUT)
    args = parser.parse_args()

    mpmath.mp.dps = args.dps
    lines = []
    for k in range(1, args.n + 1):
        gamma = mpmath.im(mpmath.zetazero(k))
        text = mpmath.nstr(gamma, 15, strip_zeros=False)
        ok, mag = verify_zero_ordinate(float(text))
        if not ok:
            raise SystemExit(f"ordinate #{k} failed certification: |zeta| = {mag:.2e}")
        lines.append(text)
        if k % 20 == 0:
            print(f"  {k} ordinates done", flush=True)

    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(HEADER.format(n=args.n, dps=args.dps) + "\n".join(lines) + "\n")
    print(f"wrote {args.n} certified ordinates to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
