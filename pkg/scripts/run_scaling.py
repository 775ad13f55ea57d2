#!/usr/bin/env python3
"""Measure how exhaustive labeling-search wall clock grows with pool size.

Runs the sweep for each pool size n, prints per-n wall clock and per-cycle
time, and fits the slope of log2(total time) against n.  A slope of 1 is
the doubling-per-item signature; adding workers shifts the curve down but
leaves the slope alone.

Example:
    python3 scripts/run_scaling.py --n-values 10:16 --workers 1
"""

import argparse

from labelsearch import TaskSpec, scaling_experiment
from labelsearch.harness import scaling_report_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-values", default="10:16", help="'LO:HI' or comma list")
    ap.add_argument("--m", type=int, default=8)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--sep", type=float, default=2.0)
    ap.add_argument("--sigma", type=float, default=1.0)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--learner", choices=("centroid", "onenn"), default="centroid")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out-csv", default=None)
    args = ap.parse_args()

    if ":" in args.n_values:
        lo, hi = map(int, args.n_values.split(":"))
        n_values = list(range(lo, hi + 1))
    else:
        n_values = [int(v) for v in args.n_values.split(",")]

    template = TaskSpec(m=args.m, n=max(n_values), d=args.d,
                        separation=args.sep, noise_sigma=args.sigma, seed=args.seed)
    report = scaling_experiment(n_values, template, args.learner, workers=args.workers)

    print(f"{'n':>4} {'evals':>10} {'total[s]':>10} {'per-eval[us]':>13} {'best_mu':>8}")
    for r in report.rows:
        print(f"{r.n:>4} {r.evaluations:>10} {r.total_time:>10.4f} "
              f"{r.mean_eval_time * 1e6:>13.2f} {r.best_mu:>8.4f}")
    print(f"\nfitted log2 slope: {report.fitted_slope:.4f} "
          f"(stderr {report.slope_stderr:.4f}, workers={report.workers})")

    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8") as fh:
            fh.write(scaling_report_csv(report))
        print(f"wrote {args.out_csv}")


if __name__ == "__main__":
    main()
