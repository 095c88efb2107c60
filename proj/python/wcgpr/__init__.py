"""Widely linear complex Gaussian process regression."""

from ._core import (
    ExperimentError,
    KernelPair,
    SingularMatrixError,
    StructuralError,
    augmented_matrix,
    composite_matrix,
    filter_induced_kernel,
    generate_improper_gp,
    generate_improper_noise,
    kernel_from_descriptor,
    lmmse,
    log_marginal_likelihood,
    mse_db,
    proper_cgpr_predict,
    properness_residual,
    reduction_residual,
    run_single,
    run_sweep,
    solve_augmented,
    squared_exponential_pair,
    to_augmented,
    to_composite,
    transform_matrix,
    wcgpr_predict,
    wlmmse,
)

__version__ = "0.1.0"
