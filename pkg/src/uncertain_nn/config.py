"""Global knobs shared by the engines.

Everything tunable lives on the single ``CONFIG`` instance so that a value is
set once per process rather than threaded through every call.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class TieMode(str, enum.Enum):
    """How equal distances to locations of *different* points are resolved.

    TOTAL   lexicographic (distance, owner index, location index); probabilities
            always sum to one.
    CLOSED  ``G(r)`` counts locations with ``d <= r``; a point tied with another
            one never wins, so probabilities may sum below one.
    OPEN    ``G(r)`` counts locations with ``d < r``; tied points all win, so
            probabilities may sum above one.
    """

    TOTAL = "total"
    CLOSED = "closed"
    OPEN = "open"


@dataclass
class Config:
    rel_tol: float = 1e-9
    # constant c in k(alpha) = c / alpha^2 * ln(1 / delta')
    discretize_c: float = 1.0
    tie_mode: TieMode = TieMode.TOTAL
    oracle_budget: int = 10**6
    quadrature_max_evals: int = 10**6


CONFIG = Config()


def make_rng(seed) -> np.random.Generator:
    """Counter-based generator; accepts an int, a SeedSequence or a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(seed))


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Independent child streams derived from one master seed."""
    return [make_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]
