"""Adaptive Simpson quadrature for piecewise-smooth integrands."""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np


class QuadratureNonconvergence(RuntimeError):
    pass


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self, count: int):
        self.used += count
        if self.used > self.limit:
            raise QuadratureNonconvergence(f"evaluation budget of {self.limit} exhausted")


def adaptive_simpson(f: Callable[[np.ndarray], np.ndarray], a: float, b: float, tol: float, budget: _Budget, max_depth: int = 50) -> float:
    """Integrate a vectorised ``f`` over [a, b] to absolute error ``tol``.

    Interval bisection with the usual |S2 - S1| <= 15 tol test and Richardson
    correction; an explicit stack replaces recursion.
    """
    if b <= a:
        return 0.0
    fa, fm, fb = f(np.array([a, 0.5 * (a + b), b]))
    budget.charge(3)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl, fr = f(np.array([0.5 * (lo + mid), 0.5 * (mid + hi)]))
        budget.charge(2)
        left = (mid - lo) / 6 * (flo + 4 * fl + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * fr + fhi)
        delta = left + right - s
        if depth >= max_depth or abs(delta) <= 15 * eps or mid in (lo, hi):
            total += left + right + delta / 15
            continue
        stack.append((lo, mid, flo, fl, fmid, left, eps / 2, depth + 1))
        stack.append((mid, hi, fmid, fr, fhi, right, eps / 2, depth + 1))
    return total


def integrate_piecewise(f, breaks: Sequence[float], tol: float, max_evals: int) -> float:
    """Integrate over consecutive ``breaks``, one smooth piece at a time.

    Each piece [lo, hi] is mapped by r = lo + (hi - lo)(1 - cos u)/2 for u in
    [0, pi]; the Jacobian vanishes at both ends, which removes the square-root
    behaviour the integrand has at its kinks.
    """
    breaks = sorted(set(float(x) for x in breaks))
    total_len = breaks[-1] - breaks[0] if len(breaks) > 1 else 0.0
    if total_len <= 0:
        return 0.0
    budget = _Budget(max_evals)
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        half = 0.5 * (hi - lo)

        def g(u, lo=lo, half=half):
            r = lo + half * (1 - np.cos(u))
            return f(r) * half * np.sin(u)

        share = tol * (hi - lo) / total_len
        total += adaptive_simpson(g, 0.0, math.pi, share, budget)
    return total
