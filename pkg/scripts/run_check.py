#!/usr/bin/env python3
"""Run the invariant suite and print a per-check table.

    python scripts/run_check.py --instances 2000 --groups lemma concavity
"""

import argparse
import sys

from riskmix.harness import GROUPS, GenConfig, run_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=GenConfig.seed)
    ap.add_argument("--instances", type=int, default=GenConfig.instance_count)
    ap.add_argument("--groups", nargs="+", choices=GROUPS, default=list(GROUPS))
    ap.add_argument("--alpha-grid", default="all-breakpoints", choices=["all-breakpoints", "breakpoints"])
    ap.add_argument("--no-exhaustive", dest="exhaustive", action="store_false")
    args = ap.parse_args(argv)

    cfg = GenConfig(seed=args.seed, instance_count=args.instances,
                    alpha_grid=args.alpha_grid, exhaustive=args.exhaustive)
    report = run_suite(cfg, groups=args.groups)

    print(f"{'section':<11} {'check':<28} {'passed':>9} {'failed':>7} {'worst':>11}")
    for name, sec in report.sections.items():
        for check, t in sorted(sec["checks"].items()):
            print(f"{name:<11} {check:<28} {t.passed:>9} {t.failed:>7} {t.worst_violation:>11.2e}")
    print(f"\n{report.n_failures} failures in {report.wall_time:.1f}s")
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
