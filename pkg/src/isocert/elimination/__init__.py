"""Exact reconstruction and certification of the b_i^2 elimination argument."""
from .affine import AffineForm
from .certify import (
    DEFAULT_SEED,
    EliminationTrace,
    Stage,
    compare_golden,
    golden_document,
    load_golden,
    run_certification,
)
from .pipeline import (
    BSquaredSolution,
    Check,
    GaussRelation,
    LinearSystem2,
    PipelineError,
    build_gauss_relations,
    derivative_identity_polys,
    eliminate_A,
    extract_mu_row,
    solve_b_squared,
    solve_mu_system,
    substitute_b3,
    t5_coefficients,
    verify_leading_ratios,
)
from .reference import MU_SYSTEM, perturb, reference_targets

__all__ = [
    "AffineForm",
    "BSquaredSolution",
    "Check",
    "DEFAULT_SEED",
    "EliminationTrace",
    "GaussRelation",
    "LinearSystem2",
    "MU_SYSTEM",
    "PipelineError",
    "Stage",
    "build_gauss_relations",
    "compare_golden",
    "derivative_identity_polys",
    "eliminate_A",
    "extract_mu_row",
    "golden_document",
    "load_golden",
    "perturb",
    "reference_targets",
    "run_certification",
    "solve_b_squared",
    "solve_mu_system",
    "substitute_b3",
    "t5_coefficients",
    "verify_leading_ratios",
]
