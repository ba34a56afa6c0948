#!/usr/bin/env python
"""Dump monomial coefficients of P_kappa^(alpha) for all |kappa| <= weight.

Exact rationals by default; --float gives the double-precision backend.
"""

import argparse
import sys
from fractions import Fraction

from circjack.jack import jack_coefficients
from circjack.partitions import enumerate_partitions


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--weight", type=int, default=4)
    ap.add_argument("--alpha", default="1/2", help="rational such as 1/2")
    ap.add_argument("--float", action="store_true", dest="as_float")
    ap.add_argument("-o", "--output", default=None)
    args = ap.parse_args(argv)

    alpha = Fraction(args.alpha)
    if args.as_float:
        alpha = float(alpha)
    fh = open(args.output, "w") if args.output else sys.stdout
    fh.write(f"# alpha={args.alpha} backend={'float' if args.as_float else 'rational'}\n")
    fh.write("# kappa; mu; coefficient\n")
    for w in range(1, args.weight + 1):
        for kappa in enumerate_partitions(w, w):
            for line in jack_coefficients(kappa, alpha).dump():
                fh.write(line + "\n")
    if fh is not sys.stdout:
        fh.close()


if __name__ == "__main__":
    main()
