"""Planar primitives: distances, disk extremal distances, lens areas and the
tangency solver used to locate witness disks.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .config import CONFIG


class DegenerateConstraint(ValueError):
    """The tangency constraints admit a continuum of solutions."""


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Disk:
    center: Point2
    radius: float

    def __post_init__(self):
        c = Point2(float(self.center[0]), float(self.center[1]))
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", float(self.radius))
        if not (math.isfinite(c.x) and math.isfinite(c.y)):
            raise ValueError("disk center must be finite")
        if not (math.isfinite(self.radius) and self.radius >= 0):
            raise ValueError(f"disk radius must be finite and >= 0, got {self.radius}")

    @property
    def area(self) -> float:
        return math.pi * self.radius**2


def dist(a, b) -> float:
    # np.hypot everywhere so scalar and vectorised paths agree bit for bit
    return float(np.hypot(a[0] - b[0], a[1] - b[1]))


def disk_min_dist(q, D: Disk) -> float:
    return max(dist(q, D.center) - D.radius, 0.0)


def disk_max_dist(q, D: Disk) -> float:
    return dist(q, D.center) + D.radius


def _triangle_area(a, b, c):
    """Heron's formula in Kahan's cancellation-free ordering."""
    x, y, z = np.sort(np.stack([a, b, c]), axis=0)[::-1]
    prod = (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z))
    return 0.25 * np.sqrt(np.maximum(prod, 0.0))


def _x_minus_sin(x):
    # a circular segment with central angle x has area r^2 (x - sin x) / 2
    out = x - np.sin(x)
    small = np.abs(x) < 0.5
    if np.any(small):
        s = x[small]
        s2 = s * s
        term = s * s2 / 6
        acc = term
        for k in range(2, 10):
            term = -term * s2 / ((2 * k) * (2 * k + 1))
            acc = acc + term
        out[small] = acc
    return out


def lens_area_from(r1, r2, d):
    """Area of the intersection of two disks with radii ``r1, r2`` whose
    centers are ``d`` apart.  Broadcasts over numpy arrays.
    """
    r1, r2, d = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r1, r2, d)))
    out = np.zeros(r1.shape)
    small = np.minimum(r1, r2)
    big = np.maximum(r1, r2)
    # either test alone misses containment by rounding when big = fl(small + d)
    contained = (d <= big - small) | (small + d <= big)
    out[contained] = math.pi * small[contained] ** 2
    partial = ~contained & (d < r1 + r2)
    if np.any(partial):
        a, b, c = r1[partial], r2[partial], d[partial]
        h = 2 * _triangle_area(a, b, c) / c  # half-chord
        # signed distances from each center to the radical line
        d1 = (a * a + (c - b) * (c + b)) / (2 * c)
        d2 = (b * b + (c - a) * (c + a)) / (2 * c)
        out[partial] = 0.5 * a * a * _x_minus_sin(2 * np.arctan2(h, d1)) + 0.5 * b * b * _x_minus_sin(2 * np.arctan2(h, d2))
    return out if out.ndim else float(out)


def lens_area(D1: Disk, D2: Disk) -> float:
    return float(lens_area_from(D1.radius, D2.radius, dist(D1.center, D2.center)))


def arc_inside_from(r, R, d):
    """Length of the circle of radius ``r`` lying inside a disk of radius ``R``
    whose center is ``d`` away from the circle's center.  This is the
    derivative in ``r`` of the lens area.
    """
    r, R, d = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r, R, d)))
    out = np.zeros(r.shape)
    inside = (r + d <= R) & (r > 0)
    out[inside] = 2 * math.pi * r[inside]
    cross = ~inside & (r > np.abs(d - R)) & (r < d + R) & (r > 0) & (d > 0)
    if np.any(cross):
        rr, RR, dd = r[cross], R[cross], d[cross]
        cos_half = np.clip((dd * dd + rr * rr - RR * RR) / (2 * dd * rr), -1, 1)
        out[cross] = 2 * rr * np.arccos(cos_half)
    return out if out.ndim else float(out)


class Extremum(str, enum.Enum):
    MIN = "min"  # delta_a(v) = t
    MAX = "max"  # Delta_a(v) = t


@dataclass(frozen=True)
class TangencyConstraint:
    disk_index: int
    kind: Extremum

    def offset(self, disks: Sequence[Disk]) -> float:
        # constraint reads d(v, c_a) = t + offset
        r = disks[self.disk_index].radius
        return r if self.kind is Extremum.MIN else -r


@dataclass(frozen=True)
class TangencySolution:
    point: Point2
    value: float
    residual: float


def _residuals(v, t, centers, offsets):
    d = np.hypot(v[0] - centers[:, 0], v[1] - centers[:, 1])
    return d - (t + offsets), d


def _polish(v, t, centers, offsets, steps=4):
    """A few Newton steps on the unsquared equations."""
    x = np.array([v[0], v[1], t], dtype=float)
    res, d = _residuals(x[:2], x[2], centers, offsets)
    best = (np.max(np.abs(res)), x.copy())
    for _ in range(steps):
        if best[0] == 0 or np.any(d == 0):
            break
        J = np.column_stack([(x[0] - centers[:, 0]) / d, (x[1] - centers[:, 1]) / d, -np.ones(len(d))])
        step, *_ = np.linalg.lstsq(J, -res, rcond=None)
        x = x + step
        res, d = _residuals(x[:2], x[2], centers, offsets)
        err = np.max(np.abs(res))
        if err < best[0]:
            best = (err, x.copy())
        else:
            break
    return best[1]


def _real_roots(a2, a1, a0, scale):
    eps = 1e-12
    if abs(a2) <= eps * scale:
        if abs(a1) <= eps * scale:
            if abs(a0) <= eps * scale:
                return None  # identically zero along the line
            return []
        return [-a0 / a1]
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        if disc < -1e-10 * (a1 * a1 + abs(4 * a2 * a0)):
            return []
        disc = 0.0
    sq = math.sqrt(disc)
    # numerically stable pair
    qv = -0.5 * (a1 + math.copysign(sq, a1))
    if qv == 0:
        return [0.0]
    return [qv / a2, a0 / qv]


def solve_tangency(
    c1: TangencyConstraint,
    c2: TangencyConstraint,
    pivot: TangencyConstraint,
    disks: Sequence[Disk],
) -> list[TangencySolution]:
    """All points ``v`` with a common value ``t`` such that each constraint
    ``delta_a(v) = t`` or ``Delta_a(v) = t`` holds.

    Each constraint is squared into ``|v - c_a|^2 = (t + e_a)^2``.  Subtracting
    the pivot's equation from the other two leaves two linear equations in
    ``(x, y, t)``; their solution line is substituted back into the pivot's
    quadric, giving a quadratic.  Roots are polished with Newton steps on the
    unsquared equations and rejected unless every constraint holds with
    ``t + e_a >= 0`` (the branch guard lost by squaring).
    """
    if c1 == c2 or c1 == pivot or c2 == pivot:
        raise DegenerateConstraint("identical constraints")
    if c1.disk_index == c2.disk_index:
        raise DegenerateConstraint("both constraints reference the same disk")
    cons = (c1, c2, pivot)
    centers = np.array([disks[c.disk_index].center for c in cons], dtype=float)
    offsets = np.array([c.offset(disks) for c in cons], dtype=float)
    scale = 1.0 + np.max(np.abs(centers)) + np.max(np.abs(offsets))

    cp, ep = centers[2], offsets[2]
    A = np.empty((2, 3))
    b = np.empty(2)
    for row in range(2):
        ca, ea = centers[row], offsets[row]
        A[row] = [ca[0] - cp[0], ca[1] - cp[1], ea - ep]
        b[row] = 0.5 * ((ca @ ca - cp @ cp) - (ea * ea - ep * ep))

    _, sv, vt = np.linalg.svd(A)
    tiny = 1e-12 * scale
    rank = int(np.sum(sv > tiny))
    if rank < 2:
        x0, *_ = np.linalg.lstsq(A, b, rcond=None)
        if np.max(np.abs(A @ x0 - b)) > 1e-9 * scale * scale:
            return []
        raise DegenerateConstraint("constraint loci coincide")
    x0 = np.linalg.pinv(A) @ b
    nvec = vt[2]

    u = x0[:2] - cp
    w0 = x0[2] + ep
    v2, w1 = nvec[:2], nvec[2]
    a2 = v2 @ v2 - w1 * w1
    a1 = 2 * (u @ v2 - w0 * w1)
    a0 = u @ u - w0 * w0
    roots = _real_roots(a2, a1, a0, scale * scale)
    if roots is None:
        raise DegenerateConstraint("solution locus is a whole line")

    tol = CONFIG.rel_tol
    out: list[TangencySolution] = []
    for lam in roots:
        x = x0 + lam * nvec
        x = _polish(x[:2], x[2], centers, offsets)
        v, t = x[:2], float(x[2])
        res, d = _residuals(v, t, centers, offsets)
        residual = float(np.max(np.abs(res)))
        if t < -tol * (1 + abs(t)):
            continue
        if np.any(t + offsets < -tol * (1 + abs(t))):
            continue
        if residual > tol * (1 + abs(t)):
            continue
        sol = TangencySolution(Point2(float(v[0]), float(v[1])), max(t, 0.0), residual)
        if any(dist(s.point, sol.point) <= 1e3 * tol * (1 + abs(t)) for s in out):
            continue
        out.append(sol)
    return out
