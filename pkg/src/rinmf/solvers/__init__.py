"""Regularized NMF solvers and their building blocks."""
from .compensation import Compensation, detect_compensations
from .config import (
    MU_FAMILY,
    PROJECTED_FAMILY,
    RFA_VARIANTS,
    VARIANTS,
    Constraints,
    FactorModel,
    SolverConfig,
    variant_mode,
)
from .core import solve
from .objective import grad_F, lambda_value, objective
from .sparse import hoyer_project, hoyer_sparseness, project_to_sparseness, sparse_nmf_step
from .updates import (
    BoldDriver,
    default_step,
    gd_bold_driver_step,
    gd_step,
    hals_step,
    hals_step_G,
    init_factors,
    mu_step_F,
    mu_step_G,
    oblique_step,
    pg_step_G,
)
