"""Command-line entry point: ``unn gen|query|nn|features|bench``.

Exit codes: 0 ok, 2 usage, 3 generation failure, 4 method/variant mismatch.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from . import io
from .config import TieMode, make_rng
from .instances import (
    GenerationFailure,
    gen_lb_cubic,
    gen_lb_cubic_equal_radius,
    gen_lb_quadratic,
    gen_pvd_quartic,
    gen_random,
)
from .nonzero import enumerate_diagram_features, nn_nonzero
from .quantification import (
    SpiralIndex,
    continuous_quadrature,
    default_q_count,
    exact_discrete,
    mc_build,
    mc_query,
    mc_sample_size,
)

EXIT_USAGE = 2
EXIT_GENERATION = 3
EXIT_MISMATCH = 4


class UsageError(Exception):
    pass


class Mismatch(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _unit_interval(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"expected a value in (0, 1), got {text}")
    return value


def _emit(text: str, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "lb-cubic":
        P = gen_lb_cubic(args.m)
    elif kind == "lb-cubic-equal":
        P = gen_lb_cubic_equal_radius(args.m, args.omega)
    elif kind == "lb-quadratic":
        P = gen_lb_quadratic(args.m)
    elif kind == "pvd-quartic":
        if args.m < 2:
            raise UsageError("pvd-quartic needs --m >= 2")
        P = gen_pvd_quartic(args.m, args.seed)
    else:
        P = gen_random(
            args.n,
            args.k,
            args.variant,
            args.seed,
            box=args.box,
            r_min=args.r_min,
            r_max=args.r_max,
            weights=args.weights,
            vary_k=args.vary_k,
        )
    _emit(io.write_instance(P), args.out)
    return 0


def _load(path):
    try:
        return io.read_instance(path)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read instance {path}: {exc}") from exc


def run_query(P, q, args):
    method = args.method
    if method in ("exact", "spiral") and not P.is_discrete:
        raise Mismatch(f"{method} needs a discrete instance")
    if method == "quadrature" and P.is_discrete:
        raise Mismatch("quadrature needs a disk instance")
    if method == "exact":
        return exact_discrete(q, P, TieMode(args.tie_mode)), None
    if method == "quadrature":
        return continuous_quadrature(q, P, args.tol), None
    if method == "spiral":
        if args.epsilon is None:
            raise UsageError("spiral needs --epsilon")
        return SpiralIndex(P).query(q, args.epsilon, args.rho), None
    if args.epsilon is None or args.delta is None or args.seed is None:
        raise UsageError("mc needs --epsilon, --delta and --seed")
    q_count = args.q_count if args.q_count is not None else default_q_count(P)
    s = mc_sample_size(args.epsilon, args.delta, P.n, q_count)
    res = mc_query(q, mc_build(P, s, args.seed), args.epsilon)
    res.params["q_count"] = q_count
    return res, args.seed


def cmd_query(args) -> int:
    P = _load(args.instance)
    t0 = time.perf_counter()
    result, seed = run_query(P, args.q, args)
    elapsed = time.perf_counter() - t0
    _emit(io.dumps(io.result_to_dict(args.q, result, seed, {"seconds": elapsed})), args.out)
    return 0


def cmd_nn(args) -> int:
    P = _load(args.instance)
    _emit(io.dumps(io.nonzero_to_dict(args.q, nn_nonzero(args.q, P))), args.out)
    return 0


def cmd_features(args) -> int:
    P = _load(args.instance)
    if P.is_discrete:
        raise Mismatch("features needs a disk instance")
    _emit(io.dumps(io.features_to_dict(enumerate_diagram_features(P))), args.out)
    return 0


BENCH_COLUMNS = ["method", "n", "k", "param", "mean", "p95"]


def bench_rows(P, queries: np.ndarray, epsilons, delta: float, seed: int, tol: float):
    """Time every method on every query for each epsilon configuration."""
    methods = ["nn", "exact", "spiral", "mc"] if P.is_discrete else ["nn", "quadrature", "mc"]
    rows = []
    index = SpiralIndex(P) if P.is_discrete else None
    for eps in epsilons:
        for method in methods:
            param = ""
            if method == "nn":
                fn = lambda q: nn_nonzero(q, P)
            elif method == "exact":
                fn = lambda q: exact_discrete(q, P)
            elif method == "quadrature":
                param = f"tol={tol:g}"
                fn = lambda q: continuous_quadrature(q, P, tol)
            elif method == "spiral":
                param = f"m={index.params(eps).m}"
                fn = lambda q, eps=eps: index.query(q, eps)
            else:
                s = mc_sample_size(eps, delta, P.n, 1)
                built = mc_build(P, s, seed)
                param = f"s={s}"
                fn = lambda q, built=built: mc_query(q, built)
            times = []
            for q in queries:
                t0 = time.perf_counter()
                fn(q)
                times.append(time.perf_counter() - t0)
            rows.append(
                {
                    "method": method,
                    "n": P.n,
                    "k": P.k_max,
                    "param": param or f"eps={eps:g}",
                    "mean": f"{np.mean(times):.6g}",
                    "p95": f"{np.percentile(times, 95):.6g}",
                }
            )
    return rows


def cmd_bench(args) -> int:
    P = _load(args.instance)
    rng = make_rng(args.seed)
    pts = P.locations if P.is_discrete else P.centers
    lo, hi = pts.min(axis=0) - 1, pts.max(axis=0) + 1
    queries = rng.uniform(lo, hi, (args.queries, 2))
    rows = bench_rows(P, queries, args.epsilon, args.delta, args.seed, args.tol)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.DictWriter(out, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if args.out:
            out.close()
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unn", description="Nearest-neighbor queries over uncertain points.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate an instance file")
    gsub = gen.add_subparsers(dest="kind", required=True)
    for name in ("lb-cubic", "lb-cubic-equal", "lb-quadratic", "pvd-quartic"):
        g = gsub.add_parser(name)
        g.add_argument("--m", type=_positive_int, required=True)
        g.add_argument("--out")
        if name == "lb-cubic-equal":
            g.add_argument("--omega", type=float, default=None)
        if name == "pvd-quartic":
            g.add_argument("--seed", type=int, required=True)
    g = gsub.add_parser("random")
    g.add_argument("--variant", choices=["disk", "discrete"], required=True)
    g.add_argument("--n", type=_positive_int, required=True)
    g.add_argument("--k", type=_positive_int, default=1)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--box", type=float, default=10.0)
    g.add_argument("--r-min", type=float, default=0.2)
    g.add_argument("--r-max", type=float, default=1.0)
    g.add_argument("--weights", choices=["dirichlet", "uniform"], default="dirichlet")
    g.add_argument("--vary-k", action="store_true")
    g.add_argument("--out")
    gen.set_defaults(func=cmd_gen)

    def query_point(p):
        p.add_argument("instance")
        p.add_argument("--q", type=float, nargs=2, required=True, metavar=("X", "Y"))
        p.add_argument("--out")

    q = sub.add_parser("query", help="quantification probabilities at a query point")
    query_point(q)
    q.add_argument("--method", choices=["exact", "quadrature", "mc", "spiral"], required=True)
    q.add_argument("--epsilon", type=_unit_interval)
    q.add_argument("--delta", type=_unit_interval)
    q.add_argument("--seed", type=int)
    q.add_argument("--q-count", type=_positive_int)
    q.add_argument("--rho", type=float)
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--tie-mode", choices=[m.value for m in TieMode], default=TieMode.TOTAL.value)
    q.set_defaults(func=cmd_query)

    nn = sub.add_parser("nn", help="points with nonzero probability of being nearest")
    query_point(nn)
    nn.set_defaults(func=cmd_nn)

    f = sub.add_parser("features", help="vertices of the nonzero diagram (disk instances)")
    f.add_argument("instance")
    f.add_argument("--out")
    f.set_defaults(func=cmd_features)

    b = sub.add_parser("bench", help="time the engines over a random query batch (CSV)")
    b.add_argument("instance")
    b.add_argument("--queries", type=_positive_int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--epsilon", type=_unit_interval, nargs="+", default=[0.1])
    b.add_argument("--delta", type=_unit_interval, default=0.05)
    b.add_argument("--tol", type=float, default=1e-6)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"unn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationFailure as exc:
        print(f"unn: {exc}", file=sys.stderr)
        return EXIT_GENERATION
    except Mismatch as exc:
        print(f"unn: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
