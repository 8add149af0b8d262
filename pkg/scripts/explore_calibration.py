"""Monte Carlo: how often does one exploring phase reach the exact optimum?

Starts from a descent local optimum of a random subset on GKD-style n=25, m=7
instances, runs exploring cycles and records whether the oracle optimum is hit
within the first ``--cycles`` perturb+descent cycles.
"""
import argparse

import numpy as np

from mindiff.instances import InstanceSpec, generate
from mindiff.model import TOL, random_solution
from mindiff.oracle import solve_exact
from mindiff.search import SearchParams, descent, weak_perturb


def trial(inst, optimum, seed, cycles, p_w):
    rng = np.random.default_rng(seed)
    sol = descent(random_solution(inst, rng), rng)
    if sol.objective <= optimum + TOL:
        return 0
    for c in range(1, cycles + 1):
        weak_perturb(sol, p_w, rng)
        descent(sol, rng)
        if sol.objective <= optimum + TOL:
            return c
    return None


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=5)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--cycles", type=int, default=5)
    ap.add_argument("--pw", type=int, default=3)
    args = ap.parse_args()
    for s in range(args.instances):
        inst = generate(InstanceSpec("gkd", 25, 7, seed=s))
        opt = solve_exact(inst).optimum
        hits = [trial(inst, opt, 1000 + t, args.cycles, args.pw) for t in range(args.trials)]
        rate = sum(h is not None for h in hits) / len(hits)
        print(f"seed={s} optimum={opt:.2f} hit_rate={rate:.2f}")


if __name__ == "__main__":
    main()
