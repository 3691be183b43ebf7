"""Curvature, submanifold and inequality checks for doubly warped products."""

__version__ = "0.1.0"

from .config import DEFAULT, Tolerances
from .errors import GeometryError
from .geometry import MetricField, ScalarField, euclidean, riemann, sectional_curvature
from .warped import DoublyWarpedProduct
from .submanifolds import IsometricImmersion
from .inequalities import chen_gap, obstruction_report, proposition_slack, theorem_slack

__all__ = [
    "DEFAULT",
    "Tolerances",
    "GeometryError",
    "MetricField",
    "ScalarField",
    "euclidean",
    "riemann",
    "sectional_curvature",
    "DoublyWarpedProduct",
    "IsometricImmersion",
    "chen_gap",
    "obstruction_report",
    "proposition_slack",
    "theorem_slack",
]
