"""Deterministic instance generators: the lower-bound constructions and
random workloads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .config import make_rng
from .model import UncertainSet, discrete_point, disk_point, make_set


class GenerationFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class InstanceStats:
    n: int
    N: int
    k_max: int
    lam: float
    rho: float
    pairwise_disjoint: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "N": self.N,
            "k_max": self.k_max,
            "lambda": self.lam,
            "rho": self.rho,
            "pairwise_disjoint": self.pairwise_disjoint,
        }


def instance_stats(P: UncertainSet) -> InstanceStats:
    if P.is_discrete:
        w = P.weights
        return InstanceStats(P.n, P.N, P.k_max, 1.0, float(w.max() / w.min()), _locations_disjoint(P))
    r = P.radii
    c = P.centers
    disjoint = True
    for i, j in itertools.combinations(range(P.n), 2):
        if np.hypot(*(c[i] - c[j])) <= r[i] + r[j]:
            disjoint = False
            break
    return InstanceStats(P.n, P.N, 1, float(r.max() / r.min()), 1.0, disjoint)


def _locations_disjoint(P: UncertainSet) -> bool:
    # discrete points are "disjoint" when no location is shared between two owners
    seen = {}
    for loc, owner in zip(map(tuple, P.locations), P.owners.tolist()):
        if seen.setdefault(loc, owner) != owner:
            return False
    return True


# ---------------------------------------------------------------------------
# nonzero-diagram lower bounds (disks)


def gen_lb_cubic(m: int) -> UncertainSet:
    """n = 4m disks whose nonzero diagram has at least 4m^3 crossing vertices.

    Order: D-_1..D-_m (radius R, left), D+_1..D+_m (radius R, right), then
    D0_1..D0_2m (unit, on the y-axis), with R = 8n^2 and spacing 1/n^2.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    n = 4 * m
    R = 8.0 * n * n
    omega = 1.0 / (n * n)
    minus = [disk_point((-R - 1.5 - (i - 1) * omega, 0.0), R) for i in range(1, m + 1)]
    plus = [disk_point((R + 1.5 + (j - 1) * omega, 0.0), R) for j in range(1, m + 1)]
    zero = [disk_point((0.0, 4.0 * (k - m) - 2.0), 1.0) for k in range(1, 2 * m + 1)]
    return make_set(minus + plus + zero)


def lb_cubic_groups(m: int) -> tuple[range, range, range]:
    return range(0, m), range(m, 2 * m), range(2 * m, 4 * m)


def default_equal_radius_omega(m: int) -> float:
    return 1e-4 / (m + 1) ** 2


def gen_lb_cubic_equal_radius(m: int, omega: float | None = None) -> UncertainSet:
    """n = 3m unit disks: D-_i at (-2 - (i-1) w, 0), D+_j at (2 + (j-1) w, 0)
    and D0_k at (2 - 2 cos(k theta), 2 sin(k theta)), theta = pi / (2 (m+1)).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    omega = default_equal_radius_omega(m) if omega is None else omega
    if not omega > 0:
        raise ValueError("omega must be positive")
    theta = 0.5 * math.pi / (m + 1)
    minus = [disk_point((-2.0 - (i - 1) * omega, 0.0), 1.0) for i in range(1, m + 1)]
    plus = [disk_point((2.0 + (j - 1) * omega, 0.0), 1.0) for j in range(1, m + 1)]
    zero = [disk_point((2 - 2 * math.cos(k * theta), 2 * math.sin(k * theta)), 1.0) for k in range(1, m + 1)]
    return make_set(minus + plus + zero)


def equal_radius_witness(m: int, k: int) -> tuple[tuple[float, float], float]:
    """Center and radius of the disk touching D-_1, D+_1 outside and D0_k inside."""
    theta = 0.5 * math.pi / (m + 1)
    return (0.0, 2 * math.tan(k * theta)), 2 / math.cos(k * theta) - 1


def gen_lb_quadratic(m: int) -> UncertainSet:
    """n = 2m unit disks centered at (4(i - m) - 2, 0), i = 1..2m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return make_set([disk_point((4.0 * (i - m) - 2.0, 0.0), 1.0) for i in range(1, 2 * m + 1)])


@dataclass(frozen=True)
class PredictedVertex:
    location: tuple[float, float]
    pair: tuple[int, int]  # 0-based (i, j), i < j
    middles: tuple[int, ...]  # 0-based candidates for the Delta-realising disk


def lb_quadratic_vertices(m: int) -> list[PredictedVertex]:
    """Closed-form vertices of the quadratic construction, two per pair with
    j - i >= 2 (1-based formulas, 0-based indices in the result).
    """
    out = []
    for i in range(1, 2 * m + 1):
        for j in range(i + 2, 2 * m + 1):
            x = 2.0 * (i + j - 2 * m - 1)
            gap = j - i
            if (i + j) % 2 == 0:
                y = gap * gap - 1.0
                middles = ((i + j) // 2 - 1,)
            else:
                y = gap * math.sqrt(gap * gap - 4.0)
                middles = ((i + j) // 2 - 1, (i + j + 1) // 2 - 1)
            for yy in (y, -y):
                out.append(PredictedVertex((x, yy), (i - 1, j - 1), middles))
    return out


# ---------------------------------------------------------------------------
# probabilistic Voronoi lower bound (discrete, k = 2)

FAR_LOCATION = (100.0, 0.0)


def _bisector(p, q):
    """Line a x + b y = c of points equidistant from p and q."""
    a, b = 2 * (q[0] - p[0]), 2 * (q[1] - p[1])
    c = q[0] ** 2 + q[1] ** 2 - p[0] ** 2 - p[1] ** 2
    return a, b, c


def bisector_crossings(near: np.ndarray):
    """Every pairwise intersection of the bisectors of ``near`` (None when
    two bisectors are parallel)."""
    lines = [_bisector(near[i], near[j]) for i, j in itertools.combinations(range(len(near)), 2)]
    out = []
    for (a1, b1, c1), (a2, b2, c2) in itertools.combinations(lines, 2):
        det = a1 * b2 - a2 * b1
        if abs(det) < 1e-12 * (abs(a1 * b2) + abs(a2 * b1) + 1e-300):
            out.append(None)
        else:
            out.append(((c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det))
    return out


def pvd_arrangement_ok(near: np.ndarray, radius: float = 1.0) -> bool:
    crossings = bisector_crossings(near)
    return all(x is not None and math.hypot(*x) < radius for x in crossings)


def gen_pvd_quartic(m: int, seed, attempts: int = 2000, ring: float = 0.1, jitter: float = 2e-3) -> UncertainSet:
    """m points, each at a near location inside the unit disk (weight 0.5)
    or at the shared far location (100, 0) (weight 0.5).

    Near locations sit on a small jittered ring so that every bisector passes
    close to the origin; draws are rejected until all pairwise bisector
    crossings fall inside the unit disk.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    rng = make_rng(seed)
    for _ in range(attempts):
        ang = rng.uniform(0, 2 * math.pi, m)
        rad = ring + jitter * rng.standard_normal(m)
        near = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
        if np.any(np.hypot(near[:, 0], near[:, 1]) >= 1):
            continue
        if pvd_arrangement_ok(near):
            return make_set([discrete_point([p, FAR_LOCATION], [0.5, 0.5]) for p in near])
    raise GenerationFailure(f"no valid arrangement for m={m} after {attempts} attempts")


# ---------------------------------------------------------------------------
# random workloads


def gen_random(
    n: int,
    k: int,
    variant: str,
    seed,
    box: float = 10.0,
    r_min: float = 0.2,
    r_max: float = 1.0,
    weights: str = "dirichlet",
    vary_k: bool = False,
    spread_scale: float = 1.0,
) -> UncertainSet:
    """Reproducible random instance.

    Disks get centers uniform in [0, box]^2 and radii uniform in
    [r_min, r_max].  Discrete points get a center uniform in the box and k
    locations scattered around it with scale ``spread_scale``; weights are a
    symmetric Dirichlet draw or uniform 1/k.  ``vary_k`` draws each point's
    size uniformly from 1..k.
    """
    if n < 1 or k < 1:
        raise ValueError("n and k must be positive")
    rng = make_rng(seed)
    if variant == "disk":
        if not 0 < r_min <= r_max:
            raise ValueError("need 0 < r_min <= r_max")
        centers = rng.uniform(0, box, (n, 2))
        radii = rng.uniform(r_min, r_max, n)
        return make_set([disk_point(c, r) for c, r in zip(centers, radii)])
    if variant != "discrete":
        raise ValueError(f"unknown variant {variant!r}")
    pts = []
    for _ in range(n):
        kk = int(rng.integers(1, k + 1)) if vary_k else k
        center = rng.uniform(0, box, 2)
        locs = center + spread_scale * rng.standard_normal((kk, 2))
        if weights == "uniform":
            w = np.full(kk, 1.0 / kk)
        elif weights == "dirichlet":
            w = rng.dirichlet(np.ones(kk))
            w = np.maximum(w, 1e-9)
            w = w / w.sum()
        else:
            raise ValueError(f"unknown weight scheme {weights!r}")
        pts.append(discrete_point(locs, w))
    return make_set(pts)
