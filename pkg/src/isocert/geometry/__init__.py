"""Numeric verification of the model hypersurfaces in S^3 x R and H^3 x R."""
from .ambient import AmbientSpace, DomainError, christoffel_at, metric_at
from .families import FAMILIES, ConfigError, Immersion
from .geodesic import (
    ParallelResult,
    StepBudgetError,
    clifford_parallel_oracle,
    geodesic_exp,
    parallel_mean_curvature,
    parallel_mean_curvatures,
)
from .homogeneity import helicoid_homogeneity_check, random_group_checks
from .report import Criterion, GeometryReport, Tolerances, grid_points, grid_verify
from .shape import CurvatureSample, RankError, ShapeBatch, fundamental_residuals, shape_batch, shape_operator_at

__all__ = [
    "FAMILIES",
    "AmbientSpace",
    "ConfigError",
    "Criterion",
    "CurvatureSample",
    "DomainError",
    "GeometryReport",
    "Immersion",
    "ParallelResult",
    "RankError",
    "ShapeBatch",
    "StepBudgetError",
    "Tolerances",
    "christoffel_at",
    "clifford_parallel_oracle",
    "fundamental_residuals",
    "geodesic_exp",
    "grid_points",
    "grid_verify",
    "helicoid_homogeneity_check",
    "metric_at",
    "parallel_mean_curvature",
    "parallel_mean_curvatures",
    "random_group_checks",
    "shape_batch",
    "shape_operator_at",
]
