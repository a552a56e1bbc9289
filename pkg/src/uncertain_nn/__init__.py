"""Nearest-neighbor queries over points with uncertain locations."""

from .config import CONFIG, TieMode
from .geometry import DegenerateConstraint, Disk, Point2
from .model import (
    DiscreteUncertainPoint,
    DiskUncertainPoint,
    UncertainSet,
    discrete_point,
    disk_point,
    make_set,
)
from .nonzero import enumerate_diagram_features, exclusion_polygon, max_dist_envelope, nn_nonzero
from .quantification import (
    QuantificationVector,
    continuous_quadrature,
    exact_discrete,
    mc_build,
    mc_query,
    mc_sample_size,
    spiral_query,
)

__all__ = [
    "CONFIG",
    "TieMode",
    "DegenerateConstraint",
    "Disk",
    "Point2",
    "DiscreteUncertainPoint",
    "DiskUncertainPoint",
    "UncertainSet",
    "discrete_point",
    "disk_point",
    "make_set",
    "enumerate_diagram_features",
    "exclusion_polygon",
    "max_dist_envelope",
    "nn_nonzero",
    "QuantificationVector",
    "continuous_quadrature",
    "exact_discrete",
    "mc_build",
    "mc_query",
    "mc_sample_size",
    "spiral_query",
]
