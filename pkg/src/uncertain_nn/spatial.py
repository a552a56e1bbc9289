"""A static kd-tree that streams points in increasing distance from a query."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterator

import numpy as np


@dataclass
class _Node:
    lo: np.ndarray  # bounding box
    hi: np.ndarray
    ids: np.ndarray | None = None  # leaf payload
    left: "_Node | None" = None
    right: "_Node | None" = None


class KdTree:
    """Best-first incremental nearest-neighbour search.

    Points come out ordered by ``(distance, point id)`` so equal distances are
    broken by the smaller id, matching the tie-break used elsewhere.
    """

    def __init__(self, points: np.ndarray, leaf_size: int = 16):
        self.points = np.asarray(points, dtype=float).reshape(-1, 2)
        self.leaf_size = leaf_size
        self.root = self._build(np.arange(len(self.points)))

    def _build(self, ids: np.ndarray) -> _Node:
        pts = self.points[ids]
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        if len(ids) <= self.leaf_size:
            return _Node(lo, hi, ids=ids)
        axis = int(np.argmax(hi - lo))
        order = np.argsort(pts[:, axis], kind="stable")
        mid = len(ids) // 2
        return _Node(lo, hi, left=self._build(ids[order[:mid]]), right=self._build(ids[order[mid:]]))

    @staticmethod
    def _box_dist(node: _Node, q) -> float:
        dx = max(node.lo[0] - q[0], 0.0, q[0] - node.hi[0])
        dy = max(node.lo[1] - q[1], 0.0, q[1] - node.hi[1])
        return float(np.hypot(dx, dy))

    def stream(self, q) -> Iterator[tuple[float, int]]:
        """Yield ``(distance, id)`` pairs in increasing order."""
        # node entries carry id -1 so a node pops before points at equal distance
        heap: list = [(self._box_dist(self.root, q), -1, 0, self.root)]
        counter = 1
        while heap:
            d, pid, _, node = heapq.heappop(heap)
            if node is None:
                yield d, pid
                continue
            if node.ids is not None:
                p = self.points[node.ids]
                dists = np.hypot(p[:, 0] - q[0], p[:, 1] - q[1])
                for dd, i in zip(dists.tolist(), node.ids.tolist()):
                    heapq.heappush(heap, (dd, i, 0, None))
            else:
                for child in (node.left, node.right):
                    heapq.heappush(heap, (self._box_dist(child, q), -1, counter, child))
                    counter += 1

    def nearest(self, q, m: int) -> np.ndarray:
        out = []
        for _, i in self.stream(q):
            if len(out) >= m:
                break
            out.append(i)
        return np.array(out, dtype=int)
