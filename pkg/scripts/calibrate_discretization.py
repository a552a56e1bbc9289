"""Find the smallest constant c in k(alpha) = ceil(c / alpha^2 ln(1/delta'))
for which discretized instances reproduce the continuous probabilities.

For each c on a grid, runs the same 20-trial experiment as the acceptance
suite and reports how many trials stay within alpha * n, plus the worst
observed error.  The cdf grid test (max |G - G_bar| <= alpha) is reported too.

    python3 scripts/calibrate_discretization.py
"""

import argparse

import numpy as np

from uncertain_nn.config import make_rng
from uncertain_nn.instances import gen_random
from uncertain_nn.model import discretize, distance_cdf, make_set, point_max_dist, point_min_dist
from uncertain_nn.quantification import continuous_quadrature, exact_discrete


def probability_trials(c, alpha, delta_prime, trials=20):
    good, worst = 0, 0.0
    for trial in range(trials):
        rng = make_rng(100_000 + trial)
        n = int(rng.integers(2, 5))
        P = gen_random(n, 1, "disk", 100_000 + trial, box=3)
        q = rng.uniform(0, 3, 2)
        cont = continuous_quadrature(q, P, 1e-8).dense(n)
        disc = make_set([discretize(p, alpha, delta_prime, rng, c) for p in P])
        err = float(np.max(np.abs(cont - exact_discrete(q, disc).dense(n))))
        good += err <= alpha * n
        worst = max(worst, err)
    return good, worst


def cdf_trials(c, alpha, delta_prime, trials=100):
    P = gen_random(1, 1, "disk", 0)[0]
    qs = make_rng(1).uniform(-2, 12, (20, 2))
    good = 0
    for t in range(trials):
        Pb = discretize(P, alpha, delta_prime, make_rng(t), c)
        worst = 0.0
        for q in qs:
            rs = np.linspace(point_min_dist(q, P), point_max_dist(q, P), 50)
            worst = max(worst, float(np.max(np.abs(distance_cdf(q, P, rs) - distance_cdf(q, Pb, rs)))))
        good += worst <= alpha
    return good


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=0.05)
    ap.add_argument("--delta-prime", type=float, default=0.01)
    args = ap.parse_args()
    print("c,k,prob_trials_ok/20,worst_prob_error,cdf_trials_ok/100")
    for c in [0.01, 0.03, 0.1, 0.3, 1.0]:
        k = int(np.ceil(c / args.alpha**2 * np.log(1 / args.delta_prime)))
        good, worst = probability_trials(c, args.alpha, args.delta_prime)
        print(f"{c},{k},{good},{worst:.4f},{cdf_trials(c, args.alpha, args.delta_prime)}", flush=True)


if __name__ == "__main__":
    main()
