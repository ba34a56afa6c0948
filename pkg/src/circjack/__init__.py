"""Jack polynomials, Jack-type hypergeometric functions and circular Jacobi
beta-ensemble limits."""

__version__ = "0.1.0"

from .errors import ConsistencyError, DomainError, UnsupportedModeError
from .partitions import Partition, dominance_leq, enumerate_partitions, gen_pochhammer, hook_product, jack_at_ones
from .jack import JackBasis, JackExpansion, jack_basis, jack_coefficients, jack_eval
from .hyper import (
    HyperSeriesSpec,
    SeriesResult,
    TruncationPolicy,
    alpha1_determinant,
    hyper_F,
    hyper_F2,
    identity_suite,
    one_F_zero_two_continued,
    one_f_zero_closed,
    positivity_check,
)
from .ensemble import (
    AngleSample,
    EnsembleParams,
    MCMCConfig,
    MomentQuery,
    correlation_R,
    manova_density,
    mcmc_sample,
    moments_K,
    norm_const_M,
    oracle_K_quadrature,
    oracle_R_quadrature,
)
from .limits import (
    LimitMeasure,
    LimitQuery,
    S_b,
    airy_multi,
    bulk_edge_check,
    bulk_edge_prediction,
    correlation_limit,
    gamma_mn,
    limit_measure,
    omega_theta,
    saddle_data,
    singularity_limit_check,
    transition_check,
)

__all__ = [
    "airy_multi",
    "alpha1_determinant",
    "AngleSample",
    "bulk_edge_check",
    "bulk_edge_prediction",
    "ConsistencyError",
    "correlation_limit",
    "correlation_R",
    "DomainError",
    "dominance_leq",
    "EnsembleParams",
    "enumerate_partitions",
    "gamma_mn",
    "gen_pochhammer",
    "hook_product",
    "hyper_F",
    "hyper_F2",
    "HyperSeriesSpec",
    "identity_suite",
    "jack_at_ones",
    "jack_basis",
    "jack_coefficients",
    "jack_eval",
    "JackBasis",
    "JackExpansion",
    "limit_measure",
    "LimitMeasure",
    "LimitQuery",
    "manova_density",
    "mcmc_sample",
    "MCMCConfig",
    "MomentQuery",
    "moments_K",
    "norm_const_M",
    "omega_theta",
    "one_f_zero_closed",
    "one_F_zero_two_continued",
    "oracle_K_quadrature",
    "oracle_R_quadrature",
    "Partition",
    "positivity_check",
    "S_b",
    "saddle_data",
    "SeriesResult",
    "singularity_limit_check",
    "transition_check",
    "TruncationPolicy",
    "UnsupportedModeError",
]
