"""Slow, definition-level references the engines are checked against."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import CONFIG, TieMode, make_rng
from .model import UncertainSet, point_max_dist, point_min_dist


class TooLarge(ValueError):
    pass


@dataclass(frozen=True)
class EnumerationResult:
    probabilities: np.ndarray
    instantiation_count: int


def enumerate_exact(q, P: UncertainSet, tie_mode: TieMode | None = None) -> EnumerationResult:
    """Walk every joint instantiation and credit the nearest point's owner.

    TOTAL credits the smallest owner index among tied nearest points, CLOSED
    credits nobody on a tie and OPEN credits every tied point.
    """
    if not P.is_discrete:
        raise TypeError("enumeration needs a discrete uncertain set")
    tie_mode = TieMode(tie_mode or CONFIG.tie_mode)
    ks = [p.k for p in P]
    count = math.prod(ks)
    if count > CONFIG.oracle_budget:
        raise TooLarge(f"{count} instantiations exceed the budget of {CONFIG.oracle_budget}")
    choice = np.stack([g.ravel() for g in np.meshgrid(*[np.arange(k) for k in ks], indexing="ij")], axis=1)
    d = np.empty(choice.shape, dtype=float)
    prob = np.ones(count)
    for i, p in enumerate(P):
        di = p._dists(q)
        d[:, i] = di[choice[:, i]]
        prob *= p.weights[choice[:, i]]
    n = P.n
    out = np.zeros(n)
    if tie_mode is TieMode.TOTAL:
        np.add.at(out, np.argmin(d, axis=1), prob)
    else:
        best = d.min(axis=1, keepdims=True)
        tied = d == best
        if tie_mode is TieMode.CLOSED:
            sole = tied.sum(axis=1) == 1
            np.add.at(out, np.argmin(d[sole], axis=1), prob[sole])
        else:
            out += (tied * prob[:, None]).sum(axis=0)
    return EnumerationResult(out, count)


def nn_nonzero_definition(q, P: UncertainSet) -> tuple[int, ...]:
    """i is reported iff delta_i(q) < Delta_j(q) for every j != i."""
    near = [point_min_dist(q, p) for p in P]
    far = [point_max_dist(q, p) for p in P]
    out = []
    for i in range(P.n):
        if all(near[i] < far[j] for j in range(P.n) if j != i):
            out.append(i)
    return tuple(out)


def mc_reference(q, P: UncertainSet, s: int, seed) -> np.ndarray:
    """Plain frequency estimate from ``s`` fresh joint instantiations."""
    if s < 1:
        raise ValueError("s must be at least 1")
    rng = make_rng(seed)
    counts = np.zeros(P.n)
    chunk = 200_000
    done = 0
    while done < s:
        size = min(chunk, s - done)
        inst = P.sample(rng, size)
        d = np.hypot(inst[..., 0] - q[0], inst[..., 1] - q[1])
        counts += np.bincount(np.argmin(d, axis=1), minlength=P.n)
        done += size
    return counts / s
