#!/usr/bin/env python3
"""Reproduce the benchmark error tables: AAE vs grid size for both examples,
reported on the collocation grid and on the uniform x-mesh at t = 1.

Usage: python3 scripts/reproduce_error_tables.py [--alpha 0.5] [--sizes 4,5,6,7]
"""

import argparse

from fbbmb.cli import RunConfig, format_table, run


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--alpha", type=float, default=0.5)
    ap.add_argument("--sizes", default="4,5,6,7")
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    for problem in ("example1", "example2"):
        for mesh, label in (("collocation", "collocation grid"), ("slice=1.0", "t = 1 slice")):
            rows = [
                run(RunConfig(problem=problem, alpha=args.alpha, n=s, m=s, error_mesh=mesh))
                for s in sizes
            ]
            print(f"\n== {problem}, alpha = {args.alpha}, AAE on {label} ==")
            print(format_table(rows))


if __name__ == "__main__":
    main()
