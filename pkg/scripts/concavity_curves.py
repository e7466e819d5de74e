#!/usr/bin/env python3
"""Plot data for ES of a mixture against the weighted ES of its parts.

Writes CSV rows ``alpha,es_mixture,weighted_es,gap`` over a uniform level
grid plus every breakpoint of the mixture. With no inputs, uses the two
laws {-10: 0.2, 0: 0.8} and {-10: 0.4, 5: 0.6} mixed half and half.

    python scripts/concavity_curves.py a.json b.json --beta 0.3,0.7 -n 101
"""

import argparse
import csv
import sys

from riskmix.distribution import make_discrete, mix
from riskmix.formats import load_distribution
from riskmix.harness import level_grid
from riskmix.lemma import concavity_gap


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("inputs", nargs="*")
    ap.add_argument("--beta", help="comma list, uniform if omitted")
    ap.add_argument("-n", type=int, default=51, help="uniform grid size")
    args = ap.parse_args(argv)

    if args.inputs:
        laws = [load_distribution(p) for p in args.inputs]
    else:
        laws = [make_discrete([(-10, 0.2), (0, 0.8)]), make_discrete([(-10, 0.4), (5, 0.6)])]
    beta = [float(b) for b in args.beta.split(",")] if args.beta else [1 / len(laws)] * len(laws)

    xi = mix(laws, beta)
    uniform = [i / (args.n - 1) for i in range(args.n)] if args.n > 1 else [1.0]
    levels = sorted(set(uniform) | set(level_grid(xi, "breakpoints")))

    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["alpha", "es_mixture", "weighted_es", "gap"])
    for a in levels:
        r = concavity_gap(laws, beta, a, mixture=xi)
        w.writerow([repr(a), repr(r.lhs), repr(r.rhs), repr(r.gap)])
    return 0


if __name__ == "__main__":
    sys.exit(main())
