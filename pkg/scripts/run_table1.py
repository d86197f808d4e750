#!/usr/bin/env python3
"""Desk-scale run of the simulation-study grid.

Runs the generate -> fit(joint) -> fit(separate) -> score loop for each grid
setting and writes losses_raw.csv / losses_summary.csv under the output
directory. Full-scale flags (50 replicates, 10000 iterations) reproduce the
study protocol; the defaults here finish on a laptop.
"""
import argparse
import sys

from blqq.cli import main as blqq_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="results/table1")
    ap.add_argument("--replicates", type=int, default=10)
    ap.add_argument("--iterations", type=int, default=5000)
    ap.add_argument("--burn-in", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--full-grid", action="store_true",
                    help="all 12 settings instead of the three rho cases at p=10, s=0.2")
    args = ap.parse_args()

    common = ["--replicates", str(args.replicates),
              "--iterations", str(args.iterations),
              "--burn-in", str(args.burn_in),
              "--seed", str(args.seed)]
    if args.full_grid:
        return blqq_main(["replicate", "--all", *common, "--out-dir", args.out_dir])
    code = 0
    for rho in ("0", "0.85", "-0.5"):
        code = code or blqq_main(
            ["replicate", "--rho", rho, "--p", "10", "--sparsity", "0.2",
             *common, "--out-dir", f"{args.out_dir}/rho{rho}"])
    return code


if __name__ == "__main__":
    sys.exit(main())
