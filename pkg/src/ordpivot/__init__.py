"""Unequal-probability without-replacement sampling toolkit.

Ordered pivotal and Deville systematic sampling with exact design
enumeration, closed-form second-order inclusion probabilities, and design
diagnostics (entropy, variance, design effect, eigenvalue dispersion).
"""

__version__ = "0.1.0"

from .analytics import (
    DesignMatrix,
    deff,
    delta_matrix,
    dmax_closed_form,
    eigen_dispersion,
    entropy,
    entropy_closed_form,
    ht_variance,
    jacobi_eigenvalues,
    kl_divergence,
    markov_pikl,
    srs_pikl,
    variance_closed_form,
)
from .errors import (
    ConstantVariable,
    DivisionByZeroGuard,
    EmptyCluster,
    FrameParseError,
    InvalidProbability,
    NonIntegerSampleSize,
    NonMultiple,
    OrdPivotError,
    PhantomSelected,
    SupportViolation,
    TooLarge,
)
from .inclusion import (
    PiklMatrix,
    SamplingDesign,
    cluster_marginals,
    design_from_paths,
    design_pikl,
    enumerate_design,
    enumerate_two_stage,
    monte_carlo_pikl,
    pikl_closed_form,
    pikl_matrix,
    pivotal_paths,
    systematic_paths,
    total_variation,
    transition_probabilities,
)
from .samplers import (
    RandomSource,
    Sample,
    compromise_markov,
    deville_systematic,
    ordered_pivotal,
    ordered_systematic,
    randomized_pivotal,
    srs,
    two_stage,
)
from .strata import (
    ClusterPopulation,
    ProbabilityVector,
    StrataDecomposition,
    build_clusters,
    cumulate,
    decompose,
    within_cluster_distribution,
)

__all__ = [
    "__version__",
    # strata
    "ProbabilityVector",
    "StrataDecomposition",
    "ClusterPopulation",
    "cumulate",
    "decompose",
    "build_clusters",
    "within_cluster_distribution",
    # samplers
    "RandomSource",
    "Sample",
    "ordered_pivotal",
    "deville_systematic",
    "two_stage",
    "ordered_systematic",
    "srs",
    "compromise_markov",
    "randomized_pivotal",
    # inclusion
    "SamplingDesign",
    "PiklMatrix",
    "pikl_closed_form",
    "pikl_matrix",
    "transition_probabilities",
    "cluster_marginals",
    "enumerate_design",
    "enumerate_two_stage",
    "design_pikl",
    "design_from_paths",
    "monte_carlo_pikl",
    "pivotal_paths",
    "systematic_paths",
    "total_variation",
    # analytics
    "DesignMatrix",
    "entropy",
    "entropy_closed_form",
    "kl_divergence",
    "delta_matrix",
    "ht_variance",
    "variance_closed_form",
    "markov_pikl",
    "srs_pikl",
    "deff",
    "dmax_closed_form",
    "eigen_dispersion",
    "jacobi_eigenvalues",
    # errors
    "OrdPivotError",
    "InvalidProbability",
    "NonIntegerSampleSize",
    "EmptyCluster",
    "PhantomSelected",
    "NonMultiple",
    "TooLarge",
    "SupportViolation",
    "ConstantVariable",
    "DivisionByZeroGuard",
    "FrameParseError",
]
