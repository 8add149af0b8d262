"""Sweep search depth, weak perturbation strength and the escape coefficient.

Runs on synthetic instances (one per family) at a reduced time budget and writes
one CSV per parameter: ``param,value,f_best,f_avg``.

    python scripts/parameter_sweeps.py --out results/ --runs 10 --time-limit 5
"""
import argparse
import logging
from pathlib import Path

from mindiff.bench import parameter_sweep, sweep_csv
from mindiff.instances import InstanceSpec, generate

SWEEPS = {
    "nbr_max": list(range(1, 11)),
    "p_w": list(range(1, 11)),
    "alpha": [round(1.0 + 0.1 * k, 1) for k in range(10)],
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("results"))
    ap.add_argument("--runs", type=int, default=10)
    ap.add_argument("--time-limit", type=float, default=5.0)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--n", type=int, default=150)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    args.out.mkdir(parents=True, exist_ok=True)
    specs = [InstanceSpec("som", args.n, args.n * 2 // 5, 1), InstanceSpec("gkd", args.n, args.n * 3 // 10, 1),
             InstanceSpec("mdg-a", args.n, args.n // 10, 1)]
    for spec in specs:
        inst = generate(spec)
        for param, values in SWEEPS.items():
            rows = parameter_sweep(inst, param, values, runs=args.runs,
                                   overrides={"t_max": args.time_limit}, jobs=args.jobs)
            path = args.out / f"sweep_{spec.name}_{param}.csv"
            path.write_text(sweep_csv(rows))
            logging.info("wrote %s", path)


if __name__ == "__main__":
    main()
