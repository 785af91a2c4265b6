"""Randomized row-action solvers for sparse solutions of consistent linear systems.

The package provides the classical randomized Kaczmarz method (RK), its
sparse variant with soft thresholding (SRK), and a greedy sampling variant
(SSKM) that draws a random row subset each iteration and projects, in the
Bregman sense, onto the most violated hyperplane in the subset. Diagnostics
verify the supporting convergence theory (contraction factors, error bounds,
noise envelopes) directly on solver traces.
"""

from .bregman import (
    DualPair,
    StepMode,
    bregman_distance,
    conjugate_value,
    exact_step,
    inexact_step,
    objective_value,
    project_hyperplane,
    soft_threshold,
)
from .linsys import LinearSystem, normalize_rows, residual, row_residual
from .sampling import (
    SamplerConfig,
    Selection,
    SelectionRule,
    next_index,
    sample_subset,
    select_motzkin,
    theoretical_subset_probability,
)
from .solvers import (
    IterationTrace,
    Method,
    RunStatus,
    SolverSpec,
    StoppingRule,
    init_state,
    run,
    step_once,
)
from .diagnostics import (
    ContractionFactor,
    GammaEstimate,
    SingularValues,
    TheoryReport,
    build_theory_report,
    contraction_factor,
    density,
    error_bound_margin,
    gamma_from_residuals,
    gamma_k,
    min_abs_nonzero,
    mse,
    noisy_envelope,
    one_two_norm,
    smallest_nonzero_singular_value,
)
from .harness import (
    ExperimentConfig,
    TrialResult,
    add_noise,
    child_rng,
    child_seed,
    compare_methods,
    gaussian_instance,
    load_config,
    real_matrix_bench,
    resolve_beta,
    run_trial,
    solve_single,
    sweep_beta,
    sweep_lambda,
)
from .matrixmarket import read_matrix_market, write_matrix_market

__version__ = "0.1.0"

__all__ = [
    "ContractionFactor",
    "DualPair",
    "ExperimentConfig",
    "GammaEstimate",
    "IterationTrace",
    "LinearSystem",
    "Method",
    "RunStatus",
    "SamplerConfig",
    "Selection",
    "SelectionRule",
    "SingularValues",
    "SolverSpec",
    "StepMode",
    "StoppingRule",
    "TheoryReport",
    "TrialResult",
    "add_noise",
    "bregman_distance",
    "build_theory_report",
    "child_rng",
    "child_seed",
    "compare_methods",
    "conjugate_value",
    "contraction_factor",
    "density",
    "error_bound_margin",
    "exact_step",
    "gamma_from_residuals",
    "gamma_k",
    "gaussian_instance",
    "inexact_step",
    "init_state",
    "load_config",
    "min_abs_nonzero",
    "mse",
    "next_index",
    "noisy_envelope",
    "normalize_rows",
    "objective_value",
    "one_two_norm",
    "project_hyperplane",
    "read_matrix_market",
    "real_matrix_bench",
    "residual",
    "resolve_beta",
    "row_residual",
    "run",
    "run_trial",
    "sample_subset",
    "select_motzkin",
    "smallest_nonzero_singular_value",
    "soft_threshold",
    "solve_single",
    "step_once",
    "sweep_beta",
    "sweep_lambda",
    "theoretical_subset_probability",
    "write_matrix_market",
]
