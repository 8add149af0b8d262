"""Small benchmark over synthetic instances of every family, checked against the exact optimum where enumerable.

    python scripts/desk_benchmark.py --runs 10 --time-limit 2 --jobs 2
"""
import argparse
import math

from mindiff.bench import emit_report, run_experiment
from mindiff.instances import FAMILIES, InstanceSpec, generate
from mindiff.oracle import solve_exact

SIZES = [(25, 7), (40, 8), (60, 15)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--time-limit", type=float, default=2.0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--csv", help="write the statistics CSV here")
    args = ap.parse_args()

    insts = [generate(InstanceSpec(f, n, m, seed=args.seed)) for f in FAMILIES for n, m in SIZES]
    stats = run_experiment(insts, runs=args.runs, seed_base=args.seed,
                           overrides={"t_max": args.time_limit}, jobs=args.jobs)
    exact = {i.name: {"f_best": solve_exact(i).optimum} for i in insts if math.comb(i.n, i.m) <= 10**6}
    report = emit_report(stats, exact)
    print(report.text)
    print(report.comparison_csv)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report.csv)


if __name__ == "__main__":
    main()
