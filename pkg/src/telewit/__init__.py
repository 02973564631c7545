"""Teleportation witnesses for d (x) d quantum systems.

Builds the partial-transpose entanglement witness and the teleportation
witness derived from it, certifies optimality through spanning sets of
zero-expectation product vectors, cross-checks detection against a
fully-entangled-fraction optimizer, and decomposes witnesses into local
observable products for finite-shot measurement simulation.
"""

from .bases import (
    GELLMANN3_CONVENTIONAL_ORDER,
    LocalBasis,
    LocalBasisDecomposition,
    antisymmetric_gellmann,
    decompose_bipartite,
    decompose_spin1,
    gellmann_basis,
    pauli_basis,
    reconstruct,
    spin1_operators,
    spin1_term_hbar_power,
)
from .fef import NOT_CERTIFIED, USEFUL, FefResult, fef_estimate, is_useful, singlet_fraction
from .linalg import (
    RankDeficientError,
    Spectrum,
    hermitian_eigen,
    kron,
    partial_transpose,
    polar_unitary,
    span_rank,
    trace_product,
)
from .measurement import (
    EstimateReport,
    MeasurementPlan,
    estimate_witness_expectation,
    sample_term,
    shots_for_confidence,
)
from .optimality import (
    OPTIMAL_CERTIFIED,
    OptimalityCertificate,
    certify,
    expectation_on_product,
    reference_kernel_vectors,
    search_kernel_vectors,
)
from .states import (
    DensityMatrix,
    ProductVector,
    PureState,
    bell_diagonal,
    isotropic,
    max_entangled,
    partial_trace,
    product_vector,
    pure_density,
    random_density,
    random_product_pure,
    random_separable,
    singlet,
)
from .witness import (
    DETECTED_USEFUL,
    INCONCLUSIVE,
    ValidationReport,
    WitnessOperator,
    classify,
    entanglement_witness,
    evaluate,
    teleportation_witness,
    validate,
)

__version__ = "0.1.0"
