"""Count nonzero-diagram features on the lower-bound fixtures.

    python3 scripts/feature_counts.py --max-m 3
"""

import argparse
import time

from uncertain_nn.instances import gen_lb_cubic, gen_lb_cubic_equal_radius, gen_lb_quadratic
from uncertain_nn.nonzero import VertexKind, crossing_counts, enumerate_diagram_features


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-m", type=int, default=3)
    args = ap.parse_args()
    print("fixture,m,n,mu,crossings,breakpoints,max_pair_crossings,seconds")
    gens = [("lb-quadratic", gen_lb_quadratic), ("lb-cubic", gen_lb_cubic), ("lb-cubic-equal", gen_lb_cubic_equal_radius)]
    for name, gen in gens:
        for m in range(1, args.max_m + 1):
            P = gen(m)
            t0 = time.perf_counter()
            verts = enumerate_diagram_features(P)
            elapsed = time.perf_counter() - t0
            cross = sum(v.kind is VertexKind.CROSSING for v in verts)
            per_pair = max(crossing_counts(verts).values(), default=0)
            print(f"{name},{m},{P.n},{len(verts)},{cross},{len(verts) - cross},{per_pair},{elapsed:.3f}")


if __name__ == "__main__":
    main()
