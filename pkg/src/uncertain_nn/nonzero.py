"""Which points can be the nearest neighbor of a query with nonzero
probability, and the vertices of the subdivision this induces.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .config import CONFIG
from .geometry import DegenerateConstraint, Extremum, Point2, TangencyConstraint, solve_tangency
from .model import UncertainSet


def max_dist_envelope(q, P: UncertainSet) -> tuple[float, int]:
    """Lower envelope of the max-distance functions at ``q``, with one minimiser."""
    far = P.max_dists(q)
    i = int(np.argmin(far))
    return float(far[i]), i


def _envelope_without_self(far: np.ndarray) -> np.ndarray:
    """For each i, min over j != i of far[j]."""
    if len(far) == 1:
        return np.array([np.inf])
    order = np.argsort(far, kind="stable")
    best, second = far[order[0]], far[order[1]]
    out = np.full(len(far), best)
    out[order[0]] = second
    return out


def nn_nonzero(q, P: UncertainSet) -> tuple[int, ...]:
    """Indices i with delta_i(q) < Delta_j(q) for every j != i.

    Equivalent to ``delta_i(q) < Delta(q)`` whenever P_i is not a certain
    point; excluding i from its own envelope keeps a certain point that
    realises Delta(q) in the answer.
    """
    near = P.min_dists(q)
    bound = _envelope_without_self(P.max_dists(q))
    return tuple(int(i) for i in np.flatnonzero(near < bound))


# ---------------------------------------------------------------------------
# diagram features (disk inputs)


class VertexKind(str, enum.Enum):
    CROSSING = "crossing"  # delta_i = delta_j = Delta_k
    BREAKPOINT = "breakpoint"  # delta_i = Delta_j = Delta_k


@dataclass(frozen=True)
class DiagramVertex:
    location: Point2
    value: float
    kind: VertexKind
    triple: tuple[int, int, int]
    residual: float

    def sort_key(self):
        return (self.triple, self.location.x, self.location.y)


def _is_valid(sol, far_fn, tol) -> bool:
    far = far_fn(sol.point)
    return bool(np.min(far) >= sol.value - tol * (1 + sol.value))


def _triple_candidates(P: UncertainSet):
    n = P.n
    MIN, MAX = Extremum.MIN, Extremum.MAX
    for i, j in itertools.combinations(range(n), 2):
        for k in range(n):
            if k in (i, j):
                continue
            yield VertexKind.CROSSING, (i, j, k), (TangencyConstraint(i, MIN), TangencyConstraint(j, MIN), TangencyConstraint(k, MAX))
    for j, k in itertools.combinations(range(n), 2):
        for i in range(n):
            if i in (j, k):
                continue
            yield VertexKind.BREAKPOINT, (i, j, k), (TangencyConstraint(i, MIN), TangencyConstraint(j, MAX), TangencyConstraint(k, MAX))


def enumerate_diagram_features(P: UncertainSet) -> list[DiagramVertex]:
    """Crossings of two curves gamma_i, gamma_j and breakpoints of a curve,
    found by solving every triple's tangency system and keeping witness disks
    that contain no uncertainty disk in their interior.

    Crossing triples are ``(i, j, k)`` with ``i < j`` and k the disk realising
    Delta; breakpoint triples are ``(i, j, k)`` with i the touched-from-outside
    disk and ``j < k``.  Output is deduplicated by location (first triple in
    lexicographic order wins) and sorted by (triple, x, y).
    """
    if P.is_discrete:
        raise TypeError("diagram features are defined for disk inputs")
    disks = P.disks
    tol = CONFIG.rel_tol
    found: list[DiagramVertex] = []
    for kind, triple, (c1, c2, pivot) in _triple_candidates(P):
        try:
            sols = solve_tangency(c1, c2, pivot, disks)
        except DegenerateConstraint as exc:
            raise DegenerateConstraint(f"triple {triple}: {exc}") from exc
        for sol in sols:
            if _is_valid(sol, P.max_dists, tol):
                found.append(DiagramVertex(sol.point, sol.value, kind, triple, sol.residual))
    found.sort(key=lambda v: (v.kind != VertexKind.CROSSING, v.triple, v.location))
    kept: list[DiagramVertex] = []
    for v in found:
        merge = 1e-7 * (1 + v.value)
        if any(abs(v.location.x - w.location.x) <= merge and abs(v.location.y - w.location.y) <= merge for w in kept):
            continue
        kept.append(v)
    kept.sort(key=DiagramVertex.sort_key)
    return kept


def crossing_counts(vertices) -> dict[tuple[int, int], int]:
    """Crossing vertices per unordered pair (i, j)."""
    c = Counter(v.triple[:2] for v in vertices if v.kind is VertexKind.CROSSING)
    return dict(sorted(c.items()))


# ---------------------------------------------------------------------------
# discrete inputs: exclusion polygons in the lifted (linear) form


def lifted(x, p) -> float:
    """f(x, p) = d(x, p)^2 - |x|^2 = |p|^2 - 2 <x, p>, linear in x."""
    return float(p[0] * p[0] + p[1] * p[1] - 2 * (x[0] * p[0] + x[1] * p[1]))


@dataclass
class ExclusionPolygon:
    """Closed convex region {x : Delta_j(x) <= delta_i(x)} clipped to a box.

    ``halfplanes`` rows are ``(a, b, c)`` meaning ``a x + b y <= c``.  Vertex
    ``v`` of ``vertices`` is defined by lines ``vertex_lines[v]``; negative
    line ids are bounding-box sides, so vertices on the curve gamma_ij are
    those with both ids non-negative.
    """

    excluded: int
    excluder: int
    halfplanes: np.ndarray
    vertices: np.ndarray
    vertex_lines: list[tuple[int, int]] = field(default_factory=list)
    unbounded: bool = False

    @property
    def empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def boundary_vertices(self) -> np.ndarray:
        keep = [v for v, (a, b) in enumerate(self.vertex_lines) if a >= 0 and b >= 0]
        return self.vertices[keep].reshape(-1, 2)

    def contains(self, x, tol: float = 0.0) -> bool:
        """Closed membership of a point in the (unclipped) region."""
        if self.empty:
            return False
        if len(self.halfplanes) == 0:
            return True
        h = self.halfplanes
        lhs = h[:, 0] * x[0] + h[:, 1] * x[1]
        return bool(np.all(lhs <= h[:, 2] + tol * (1 + np.abs(h[:, 2]))))


def _line_intersection(l1, l2):
    a1, b1, c1 = l1
    a2, b2, c2 = l2
    det = a1 * b2 - a2 * b1
    if det == 0:
        return None
    return np.array([(c1 * b2 - c2 * b1) / det, (a1 * c2 - a2 * c1) / det])


def clip_convex(lines: np.ndarray, box_lines: np.ndarray, tol: float):
    """Intersect halfplanes ``lines`` with the box given by ``box_lines``.

    Incremental clipping of a convex polygon, but each vertex remembers the
    two lines defining it and is recomputed from them rather than from
    interpolated edge points, so accuracy does not degrade with the number
    of cuts.
    """
    all_lines = np.vstack([box_lines, lines]) if len(lines) else box_lines
    nb = len(box_lines)

    def line_id(row):
        return row - nb  # box sides get ids -nb..-1

    # box corners: sides are ordered so consecutive ones meet
    poly = []
    for s in range(nb):
        a, b = s, (s + 1) % nb
        poly.append((a, b))
    coords = {pair: _line_intersection(all_lines[pair[0]], all_lines[pair[1]]) for pair in poly}

    for row in range(nb, len(all_lines)):
        if not poly:
            break
        a, b, c = all_lines[row]
        norm = np.hypot(a, b)
        pts = [coords[v] for v in poly]
        side = [(a * p[0] + b * p[1] - c) / norm for p in pts]
        eps = tol * (1 + max(np.abs(p).max() for p in pts))
        if all(s <= eps for s in side):
            continue
        if all(s > eps for s in side):
            poly = []
            break
        new_poly = []
        m = len(poly)
        for idx in range(m):
            cur, nxt = poly[idx], poly[(idx + 1) % m]
            s_cur, s_nxt = side[idx], side[(idx + 1) % m]
            if s_cur <= eps:
                new_poly.append(cur)
            # vertices are (incoming line, outgoing line); edge cur->nxt lies on cur[1]
            if (s_cur <= eps) != (s_nxt <= eps):
                edge_line = cur[1]
                if s_cur <= eps:
                    v = (edge_line, row)
                else:
                    v = (row, edge_line)
                pt = _line_intersection(all_lines[v[0]], all_lines[v[1]])
                if pt is None:
                    continue
                coords[v] = pt
                new_poly.append(v)
        # drop consecutive duplicates produced by cuts through a vertex
        dedup = []
        for v in new_poly:
            if dedup and np.allclose(coords[v], coords[dedup[-1]], rtol=0, atol=eps):
                continue
            dedup.append(v)
        if len(dedup) > 1 and np.allclose(coords[dedup[0]], coords[dedup[-1]], rtol=0, atol=eps):
            dedup.pop()
        poly = dedup

    verts = np.array([coords[v] for v in poly]).reshape(-1, 2)
    ids = [(line_id(a), line_id(b)) for a, b in poly]
    return verts, ids


def _box_lines(P: UncertainSet) -> np.ndarray:
    locs = P.locations
    lo, hi = locs.min(axis=0), locs.max(axis=0)
    center = (lo + hi) / 2
    half = 0.5e6 * max(float(np.max(hi - lo)), 1.0)
    # right, top, left, bottom; consecutive sides meet at a corner
    return np.array(
        [
            [1.0, 0.0, center[0] + half],
            [0.0, 1.0, center[1] + half],
            [-1.0, 0.0, -(center[0] - half)],
            [0.0, -1.0, -(center[1] - half)],
        ]
    )


def exclusion_halfplanes(i: int, j: int, P: UncertainSet) -> np.ndarray:
    """Rows ``(a, b, c)`` of {x : f(x, p_ja) <= f(x, p_ib)} for all a, b.

    ``f(x, p_ja) <= f(x, p_ib)``  <=>  ``2 <x, p_ib - p_ja> <= |p_ib|^2 - |p_ja|^2``.
    """
    Pi, Pj = P[i].locations, P[j].locations
    rows = []
    for pa in Pj:
        for pb in Pi:
            a, b = 2 * (pb - pa)
            c = pb @ pb - pa @ pa
            rows.append((a, b, c))
    rows = np.array(rows, dtype=float)
    trivial = (rows[:, 0] == 0) & (rows[:, 1] == 0)
    infeasible = trivial & (rows[:, 2] < 0)
    if np.any(infeasible):
        return np.array([[0.0, 0.0, -1.0]])
    rows = rows[~trivial]
    if len(rows):
        rows = np.unique(rows, axis=0)
    return rows


def exclusion_polygon(i: int, j: int, P: UncertainSet) -> ExclusionPolygon:
    """Region where P_j is surely closer than P_i, with boundary gamma_ij."""
    if i == j:
        raise ValueError("exclusion polygon needs i != j")
    if not P.is_discrete:
        raise TypeError("exclusion polygons are defined for discrete inputs")
    halfplanes = exclusion_halfplanes(i, j, P)
    box = _box_lines(P)
    if len(halfplanes) == 1 and halfplanes[0, 0] == 0 and halfplanes[0, 1] == 0:
        return ExclusionPolygon(i, j, halfplanes, np.zeros((0, 2)), [], False)
    verts, ids = clip_convex(halfplanes, box, tol=1e-12)
    unbounded = any(a < 0 or b < 0 for a, b in ids)
    return ExclusionPolygon(i, j, halfplanes, verts, ids, unbounded)


def exclusion_matrix(P: UncertainSet) -> dict[tuple[int, int], ExclusionPolygon]:
    return {(i, j): exclusion_polygon(i, j, P) for i in range(P.n) for j in range(P.n) if i != j}


def nn_nonzero_discrete_via_polygons(q, P: UncertainSet, polygons) -> tuple[int, ...]:
    """Same answer as :func:`nn_nonzero`, read off precomputed polygons.

    Boundary points (q on some gamma_ij) count as excluded, matching the
    strict inequality; floating-point evaluation of the halfplanes may
    disagree with the distance form within rounding of the boundary.
    """
    out = []
    for i in range(P.n):
        if not any(polygons[(i, j)].contains(q) for j in range(P.n) if j != i):
            out.append(i)
    return tuple(out)
