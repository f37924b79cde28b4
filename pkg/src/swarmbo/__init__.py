"""Bayesian optimization with a particle-swarm acquisition maximizer."""

from .acquisition import AcquisitionSpec, ei, evaluate, pi, ucb
from .bench import (
    ExperimentReport,
    MethodSpec,
    ObjectiveSpec,
    default_space,
    eval_objective,
    omega_sweep,
    run_experiment,
    run_grid_search,
    run_local_bo,
    run_random_search,
)
from .boloop import BoConfig, BoResult, run_bo
from .gp import (
    FitBounds,
    GpModel,
    KernelParams,
    Posterior,
    fit_hyperparams,
    fit_model,
    gram_matrix,
    log_marginal_likelihood,
    matern52,
    predict,
)
from .pso import PsoParams, PsoResult, check_stability, run_pso
from .space import (
    Dimension,
    INTEGER,
    REAL,
    SearchSpace,
    clamp,
    materialize,
    sample_uniform,
    validate_space,
)

__version__ = "0.1.0"

__all__ = [
    "AcquisitionSpec", "BoConfig", "BoResult", "Dimension", "ExperimentReport",
    "FitBounds", "GpModel", "INTEGER", "KernelParams", "MethodSpec",
    "ObjectiveSpec", "Posterior", "PsoParams", "PsoResult", "REAL",
    "SearchSpace", "check_stability", "clamp", "default_space", "ei",
    "eval_objective", "evaluate", "fit_hyperparams", "fit_model",
    "gram_matrix", "log_marginal_likelihood", "materialize", "matern52",
    "omega_sweep", "pi", "predict", "run_bo", "run_experiment",
    "run_grid_search", "run_local_bo", "run_pso", "run_random_search",
    "sample_uniform", "ucb", "validate_space",
]
