"""Uncertain points: discrete location distributions and uniform disks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .config import CONFIG, make_rng
from .geometry import Disk, Point2, arc_inside_from, lens_area_from


class DiscreteVariant(TypeError):
    """Operation undefined for a discrete (atomic) distribution."""


@dataclass(frozen=True, eq=False)
class DiscreteUncertainPoint:
    locations: np.ndarray  # (k, 2)
    weights: np.ndarray  # (k,)

    def __post_init__(self):
        locs = np.array(self.locations, dtype=float).reshape(-1, 2)
        w = np.array(self.weights, dtype=float).reshape(-1)
        if len(locs) == 0:
            raise ValueError("a discrete point needs at least one location")
        if len(locs) != len(w):
            raise ValueError("locations and weights differ in length")
        if not np.all(np.isfinite(locs)):
            raise ValueError("locations must be finite")
        if np.any(w <= 0) or np.any(w > 1):
            raise ValueError("weights must lie in (0, 1]")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {w.sum()!r}, not 1")
        locs.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "weights", w)

    @property
    def k(self) -> int:
        return len(self.weights)

    def _dists(self, q) -> np.ndarray:
        return np.hypot(self.locations[:, 0] - q[0], self.locations[:, 1] - q[1])

    def __eq__(self, other):
        if not isinstance(other, DiscreteUncertainPoint):
            return NotImplemented
        return np.array_equal(self.locations, other.locations) and np.array_equal(self.weights, other.weights)

    __hash__ = None


@dataclass(frozen=True)
class DiskUncertainPoint:
    """Uniform density on a disk."""

    region: Disk
    density: str = "uniform"

    def __post_init__(self):
        if self.density != "uniform":
            raise ValueError(f"unsupported density {self.density!r}")
        if not self.region.radius > 0:
            raise ValueError("uncertainty disk must have positive radius")


UncertainPoint = Union[DiscreteUncertainPoint, DiskUncertainPoint]


def discrete_point(locations, weights=None) -> DiscreteUncertainPoint:
    locs = np.asarray(locations, dtype=float).reshape(-1, 2)
    if weights is None:
        weights = np.full(len(locs), 1.0 / len(locs))
    return DiscreteUncertainPoint(locs, weights)


def disk_point(center, radius) -> DiskUncertainPoint:
    return DiskUncertainPoint(Disk(Point2(*center), radius))


def point_min_dist(q, P: UncertainPoint) -> float:
    if isinstance(P, DiscreteUncertainPoint):
        return float(P._dists(q).min())
    c, r = P.region.center, P.region.radius
    return float(max(np.hypot(c[0] - q[0], c[1] - q[1]) - r, 0.0))


def point_max_dist(q, P: UncertainPoint) -> float:
    if isinstance(P, DiscreteUncertainPoint):
        return float(P._dists(q).max())
    c, r = P.region.center, P.region.radius
    return float(np.hypot(c[0] - q[0], c[1] - q[1]) + r)


def distance_cdf(q, P: UncertainPoint, r):
    """Pr[d(q, P) <= r].  Broadcasts over an array of radii."""
    r_arr = np.asarray(r, dtype=float)
    if isinstance(P, DiscreteUncertainPoint):
        d = P._dists(q)
        out = (d[None, :] <= r_arr.reshape(-1, 1)) @ P.weights
        out = np.minimum(out, 1.0).reshape(r_arr.shape)
    else:
        c, R = P.region.center, P.region.radius
        d = float(np.hypot(c[0] - q[0], c[1] - q[1]))
        out = lens_area_from(np.maximum(r_arr, 0.0), R, d) / (math.pi * R * R)
        out = np.clip(out, 0.0, 1.0)
    return float(out) if np.ndim(out) == 0 else out


def distance_pdf(q, P: UncertainPoint, r):
    """Density of d(q, P) for a uniform disk point: the arc of the circle of
    radius ``r`` around ``q`` inside the disk, over the disk area.
    """
    if isinstance(P, DiscreteUncertainPoint):
        raise DiscreteVariant("a discrete distance distribution has no density")
    c, R = P.region.center, P.region.radius
    d = float(np.hypot(c[0] - q[0], c[1] - q[1]))
    out = arc_inside_from(r, R, d) / (math.pi * R * R)
    return float(out) if np.ndim(out) == 0 else out


def sample_points(P: UncertainPoint, rng: np.random.Generator, size: int) -> np.ndarray:
    """``size`` independent instantiations as a ``(size, 2)`` array."""
    if isinstance(P, DiscreteUncertainPoint):
        if P.k == 1:
            return np.repeat(P.locations, size, axis=0)
        cum = np.cumsum(P.weights)
        idx = np.searchsorted(cum, rng.random(size) * cum[-1], side="right")
        return P.locations[np.minimum(idx, P.k - 1)]
    c, R = P.region.center, P.region.radius
    rad = R * np.sqrt(rng.random(size))
    ang = 2 * math.pi * rng.random(size)
    return np.column_stack([c[0] + rad * np.cos(ang), c[1] + rad * np.sin(ang)])


def instantiate(P: UncertainPoint, rng) -> Point2:
    x, y = sample_points(P, make_rng(rng), 1)[0]
    return Point2(float(x), float(y))


def discretization_size(alpha: float, delta_prime: float, c: float | None = None) -> int:
    """k(alpha) = ceil(c / alpha^2 * ln(1 / delta'))."""
    if not 0 < alpha < 1 or not 0 < delta_prime < 1:
        raise ValueError("alpha and delta_prime must lie in (0, 1)")
    c = CONFIG.discretize_c if c is None else c
    return max(1, math.ceil(c / alpha**2 * math.log(1 / delta_prime)))


def discretize(P: UncertainPoint, alpha: float, delta_prime: float, rng, c: float | None = None) -> DiscreteUncertainPoint:
    """Replace a continuous point by k(alpha) equally likely samples of it."""
    if isinstance(P, DiscreteUncertainPoint):
        raise DiscreteVariant("discretize expects a continuous point")
    k = discretization_size(alpha, delta_prime, c)
    locs = sample_points(P, make_rng(rng), k)
    return DiscreteUncertainPoint(locs, np.full(k, 1.0 / k))


@dataclass(frozen=True)
class DistanceCdf:
    """Distance distribution from a fixed query to one uncertain point."""

    query: Point2
    point: UncertainPoint
    point_index: int = -1

    @property
    def support(self) -> tuple[float, float]:
        return point_min_dist(self.query, self.point), point_max_dist(self.query, self.point)

    def __call__(self, r):
        return distance_cdf(self.query, self.point, r)

    def pdf(self, r):
        return distance_pdf(self.query, self.point, r)


@dataclass(frozen=True, eq=False)
class UncertainSet:
    """An ordered, homogeneous collection of uncertain points.

    Discrete sets keep every location in one flat array ordered by
    (owner, location index), so a global location id sorts the same way as
    the tie-break key.
    """

    points: tuple
    _flat: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise ValueError("an uncertain set needs at least one point")
        kinds = {type(p) for p in pts}
        if len(kinds) != 1 or not kinds <= {DiscreteUncertainPoint, DiskUncertainPoint}:
            raise ValueError("uncertain set must be homogeneous")
        object.__setattr__(self, "points", pts)
        flat = self._flat
        if self.is_discrete:
            ks = np.array([p.k for p in pts])
            flat["locations"] = np.concatenate([p.locations for p in pts])
            flat["weights"] = np.concatenate([p.weights for p in pts])
            flat["owners"] = np.repeat(np.arange(len(pts)), ks)
            flat["starts"] = np.concatenate([[0], np.cumsum(ks)[:-1]])
            flat["ks"] = ks
        else:
            flat["centers"] = np.array([p.region.center for p in pts], dtype=float)
            flat["radii"] = np.array([p.region.radius for p in pts], dtype=float)
        for v in flat.values():
            v.setflags(write=False)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i):
        return self.points[i]

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def is_discrete(self) -> bool:
        return isinstance(self.points[0], DiscreteUncertainPoint)

    @property
    def variant(self) -> str:
        return "discrete" if self.is_discrete else "disk"

    @property
    def k_max(self) -> int:
        return int(self._flat["ks"].max()) if self.is_discrete else 1

    @property
    def N(self) -> int:
        return int(self._flat["ks"].sum()) if self.is_discrete else self.n

    @property
    def locations(self) -> np.ndarray:
        return self._flat["locations"]

    @property
    def weights(self) -> np.ndarray:
        return self._flat["weights"]

    @property
    def owners(self) -> np.ndarray:
        return self._flat["owners"]

    @property
    def centers(self) -> np.ndarray:
        return self._flat["centers"]

    @property
    def radii(self) -> np.ndarray:
        return self._flat["radii"]

    @property
    def disks(self) -> list[Disk]:
        return [p.region for p in self.points]

    def location_dists(self, q) -> np.ndarray:
        locs = self.locations
        return np.hypot(locs[:, 0] - q[0], locs[:, 1] - q[1])

    def min_dists(self, q) -> np.ndarray:
        if self.is_discrete:
            return np.minimum.reduceat(self.location_dists(q), self._flat["starts"])
        c = self.centers
        return np.maximum(np.hypot(c[:, 0] - q[0], c[:, 1] - q[1]) - self.radii, 0.0)

    def max_dists(self, q) -> np.ndarray:
        if self.is_discrete:
            return np.maximum.reduceat(self.location_dists(q), self._flat["starts"])
        c = self.centers
        return np.hypot(c[:, 0] - q[0], c[:, 1] - q[1]) + self.radii

    def distance_cdf(self, q, i: int) -> DistanceCdf:
        return DistanceCdf(Point2(*q), self.points[i], i)

    def sample(self, rng, size: int) -> np.ndarray:
        """``(size, n, 2)`` array of joint instantiations."""
        rng = make_rng(rng)
        if not self.is_discrete:
            c, R = self.centers, self.radii
            rad = R[None, :] * np.sqrt(rng.random((size, self.n)))
            ang = 2 * math.pi * rng.random((size, self.n))
            return np.stack([c[:, 0] + rad * np.cos(ang), c[:, 1] + rad * np.sin(ang)], axis=-1)
        out = np.empty((size, self.n, 2))
        for i, p in enumerate(self.points):
            out[:, i] = sample_points(p, rng, size)
        return out


def make_set(points: Sequence[UncertainPoint]) -> UncertainSet:
    return UncertainSet(tuple(points))
