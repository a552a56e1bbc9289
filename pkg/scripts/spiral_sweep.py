"""Spiral-search error and cost versus epsilon on random uniform-weight sets.

Reports the observed worst gap pi - pi_hat against epsilon and the number of
retrieved locations m.

    python3 scripts/spiral_sweep.py --n 40 --k 3 --instances 20
"""

import argparse
import time

import numpy as np

from uncertain_nn.config import make_rng
from uncertain_nn.instances import gen_random
from uncertain_nn.quantification import SpiralIndex, exact_discrete


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--instances", type=int, default=20)
    ap.add_argument("--queries", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    eps_grid = [0.5, 0.2, 0.1, 0.05, 0.01, 0.001]
    gaps = {e: 0.0 for e in eps_grid}
    times = {e: [] for e in eps_grid}
    ms = {}
    for t in range(args.instances):
        P = gen_random(args.n, args.k, "discrete", args.seed + t, weights="uniform")
        idx = SpiralIndex(P)
        for q in make_rng(args.seed + 1000 + t).uniform(0, 10, (args.queries, 2)):
            exact = exact_discrete(q, P).dense(P.n)
            for e in eps_grid:
                t0 = time.perf_counter()
                approx = idx.query(q, e).dense(P.n)
                times[e].append(time.perf_counter() - t0)
                gaps[e] = max(gaps[e], float(np.max(exact - approx)))
                ms[e] = idx.params(e).m
    print("epsilon,m,worst_gap,mean_seconds")
    for e in eps_grid:
        print(f"{e},{ms[e]},{gaps[e]:.3e},{np.mean(times[e]):.3e}")


if __name__ == "__main__":
    main()
