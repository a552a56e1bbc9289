"""Quantification probabilities: the chance that each uncertain point is the
nearest neighbor of a query.

Four engines share one result type: an exact sweep for discrete inputs,
adaptive quadrature for uniform disks, a Monte-Carlo estimator, and spiral
search over the m nearest locations.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import CONFIG, TieMode, make_rng
from .model import UncertainSet, distance_cdf, distance_pdf
from .quadrature import QuadratureNonconvergence, integrate_piecewise
from .spatial import KdTree

__all__ = [
    "Method",
    "QuantificationVector",
    "McIndex",
    "SpiralParams",
    "SpiralIndex",
    "QuadratureNonconvergence",
    "exact_discrete",
    "continuous_quadrature",
    "mc_sample_size",
    "mc_build",
    "mc_query",
    "spread",
    "spiral_m",
    "spiral_query",
]


class Method(str, enum.Enum):
    EXACT = "exact"
    QUADRATURE = "quadrature"
    MONTE_CARLO = "mc"
    SPIRAL = "spiral"


@dataclass
class QuantificationVector:
    """Sparse index -> probability map.  Missing indices are zero."""

    entries: dict[int, float]
    method: Method
    error_bound: Optional[float] = None
    params: dict = field(default_factory=dict)

    def __getitem__(self, i: int) -> float:
        return self.entries.get(i, 0.0)

    def dense(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for i, p in self.entries.items():
            out[i] = p
        return out

    def total(self) -> float:
        return float(sum(self.entries.values()))


def _sparse(values: np.ndarray) -> dict[int, float]:
    return {int(i): float(values[i]) for i in np.flatnonzero(values > 0)}


# ---------------------------------------------------------------------------
# exact discrete sweep


def _sweep(order: np.ndarray, dists: np.ndarray, P: UncertainSet, tie_mode: TieMode) -> np.ndarray:
    """Sum eta(p; q) over the locations in ``order`` (a prefix of the global
    distance order).

    eta(p_is; q) = w_is * prod_{j != i} (mass of P_j not yet swept).  Under
    TOTAL each location is its own group; under CLOSED/OPEN equal distances
    form one group whose mass is removed before/after its contributions.
    """
    n = P.n
    w = P.weights
    owners = P.owners
    remaining = np.zeros(n)
    np.add.at(remaining, owners, w)
    left = P._flat["ks"].astype(int).copy()
    pi = np.zeros(n)

    if tie_mode is TieMode.TOTAL:
        groups = [[g] for g in order.tolist()]
    else:
        groups = []
        for g in order.tolist():
            if groups and dists[g] == dists[groups[-1][-1]]:
                groups[-1].append(g)
            else:
                groups.append([g])

    def survival_excluding(i: int) -> float:
        zeros = left == 0
        nz = int(zeros.sum()) - int(zeros[i])
        if nz:
            return 0.0
        mask = ~zeros
        mask[i] = False
        return float(np.prod(remaining[mask]))

    def remove(g: int):
        i = owners[g]
        left[i] -= 1
        remaining[i] = 0.0 if left[i] == 0 else max(remaining[i] - w[g], 0.0)

    for group in groups:
        if tie_mode is TieMode.CLOSED:
            for g in group:
                remove(g)
        for g in group:
            i = owners[g]
            pi[i] += w[g] * survival_excluding(i)
            if tie_mode is TieMode.TOTAL:
                remove(g)
        if tie_mode is TieMode.OPEN:
            for g in group:
                remove(g)
    return pi


def _global_order(P: UncertainSet, dists: np.ndarray) -> np.ndarray:
    # global ids already follow (owner, location index)
    return np.lexsort((np.arange(len(dists)), dists))


def exact_discrete(q, P: UncertainSet, tie_mode: TieMode | None = None) -> QuantificationVector:
    """pi_i(q) = sum_s w_is prod_{j != i} (1 - G_j(d(p_is, q)))."""
    if not P.is_discrete:
        raise TypeError("exact_discrete needs a discrete uncertain set")
    tie_mode = TieMode(tie_mode or CONFIG.tie_mode)
    dists = P.location_dists(q)
    pi = _sweep(_global_order(P, dists), dists, P, tie_mode)
    return QuantificationVector(_sparse(pi), Method.EXACT, 0.0, {"tie_mode": tie_mode.value})


# ---------------------------------------------------------------------------
# continuous (uniform disk) quadrature


def continuous_quadrature(q, P: UncertainSet, tol: float = 1e-8) -> QuantificationVector:
    """pi_i(q) = integral of g_i(r) prod_{j != i} (1 - G_j(r)) dr.

    The range [delta_i, Delta_i] is split at every radius where some cdf
    has a kink (delta_j, Delta_j and R_j - d_j when q is inside D_j).
    """
    if P.is_discrete:
        raise TypeError("continuous_quadrature needs a disk uncertain set")
    if not tol > 0:
        raise ValueError("tol must be positive")
    n = P.n
    near, far = P.min_dists(q), P.max_dists(q)
    c = P.centers
    center_d = np.hypot(c[:, 0] - q[0], c[:, 1] - q[1])
    kinks = np.concatenate([near, far, np.maximum(P.radii - center_d, 0.0)])
    pts = P.points
    pi = np.zeros(n)
    for i in range(n):
        others = [j for j in range(n) if j != i]

        def integrand(r, i=i, others=others):
            val = distance_pdf(q, pts[i], r)
            for j in others:
                val = val * (1 - distance_cdf(q, pts[j], r))
            return val

        lo, hi = near[i], far[i]
        # beyond the smallest Delta_j the survival product is zero
        if others:
            hi = min(hi, float(far[others].min()))
        if hi <= lo:
            continue
        breaks = [lo, hi] + [x for x in kinks if lo < x < hi]
        pi[i] = integrate_piecewise(integrand, breaks, tol, CONFIG.quadrature_max_evals)
    pi = np.clip(pi, 0.0, 1.0)
    return QuantificationVector(_sparse(pi), Method.QUADRATURE, tol)


# ---------------------------------------------------------------------------
# Monte-Carlo


def mc_sample_size(epsilon: float, delta: float, n: int, q_count: int = 1) -> int:
    """s = ceil(ln(2 n |Q| / delta) / (2 eps^2)) rounds."""
    if not (0 < epsilon < 1 and 0 < delta < 1):
        raise ValueError("epsilon and delta must lie in (0, 1)")
    if n < 1 or q_count < 1:
        raise ValueError("n and q_count must be positive")
    return math.ceil(math.log(2 * n * q_count / delta) / (2 * epsilon**2))


def default_q_count(P: UncertainSet) -> int:
    """N^4 representative queries, one per cell of the probabilistic diagram."""
    return P.N**4


@dataclass(frozen=True, eq=False)
class McIndex:
    instantiations: np.ndarray  # (s, n, 2)
    seed: int
    s: int


def mc_build(P: UncertainSet, s: int, seed: int) -> McIndex:
    if s < 1:
        raise ValueError("s must be at least 1")
    inst = P.sample(make_rng(seed), s)
    inst.setflags(write=False)
    return McIndex(inst, seed, s)


def mc_query(q, idx: McIndex, epsilon: float | None = None) -> QuantificationVector:
    """Fraction of rounds in which each point's instantiation is nearest.

    argmin returns the first minimum, i.e. the smaller owner index on ties.
    """
    inst = idx.instantiations
    d = np.hypot(inst[..., 0] - q[0], inst[..., 1] - q[1])
    winners = np.argmin(d, axis=1)
    counts = np.bincount(winners, minlength=inst.shape[1])
    return QuantificationVector(_sparse(counts / idx.s), Method.MONTE_CARLO, epsilon, {"s": idx.s, "seed": idx.seed})


# ---------------------------------------------------------------------------
# spiral search


def spread(P: UncertainSet) -> float:
    w = P.weights
    return float(w.max() / w.min())


@dataclass(frozen=True)
class SpiralParams:
    rho: float
    k_max: int
    epsilon: float
    m: int


def spiral_m(rho: float, k_max: int, epsilon: float, N: int) -> int:
    """m = clamp(ceil(rho k ln(1/eps)) + k - 1, 1, N)."""
    m = math.ceil(rho * k_max * math.log(1 / epsilon)) + k_max - 1
    return int(min(max(m, 1), N))


class SpiralIndex:
    """kd-tree over every location, built once and reused across queries."""

    def __init__(self, P: UncertainSet):
        if not P.is_discrete:
            raise TypeError("spiral search needs a discrete uncertain set")
        self.P = P
        self.tree = KdTree(P.locations)
        self.rho = spread(P)

    def params(self, epsilon: float, rho: float | None = None) -> SpiralParams:
        if not 0 < epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if rho is None:
            rho = self.rho
        elif rho < self.rho:
            raise ValueError(f"rho override {rho} is below the instance spread {self.rho}")
        return SpiralParams(rho, self.P.k_max, epsilon, spiral_m(rho, self.P.k_max, epsilon, self.P.N))

    def query(self, q, epsilon: float, rho: float | None = None) -> QuantificationVector:
        par = self.params(epsilon, rho)
        nearest = self.tree.nearest(q, par.m)
        dists = self.P.location_dists(q)
        pi = _sweep(nearest, dists, self.P, TieMode.TOTAL)
        return QuantificationVector(_sparse(pi), Method.SPIRAL, epsilon, {"m": par.m, "rho": par.rho})


def spiral_query(q, P: UncertainSet, epsilon: float, rho: float | None = None, index: SpiralIndex | None = None) -> QuantificationVector:
    """Lower estimates pi_hat_i <= pi_i <= pi_hat_i + eps from the m nearest
    locations.  A location among them has every closer location among them
    too, so its eta term is exact; the rest are dropped.
    """
    index = index if index is not None else SpiralIndex(P)
    if index.P is not P:
        raise ValueError("index was built for a different set")
    return index.query(q, epsilon, rho)
