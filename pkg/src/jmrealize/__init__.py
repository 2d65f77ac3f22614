"""jmrealize: POVM realizations of arbitrary joint-measurability hypergraphs.

Given any downward-closed compatibility structure over a set of measurements,
this package constructs explicit binary POVMs whose joint-measurability
relations are exactly that structure, verifies the construction analytically
(explicit joint witnesses for edges, purity-threshold certificates for
non-edges), and offers an independent numerical feasibility oracle.
"""

from .matrix import (
    DEFAULT_TOL,
    Tolerance,
    add,
    as_operator,
    direct_sum,
    hermitian_eigenvalues,
    identity,
    is_hermitian,
    is_psd,
    kron,
    matmul,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    scale,
    sub,
    zero_matrix,
)
from .clifford import (
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    CliffordFamily,
    CliffordReport,
    build_clifford,
    check_clifford,
    weighted_sum_square_check,
)
from .hypergraph import (
    JmHypergraph,
    facets,
    hypergraph_to_json,
    is_edge,
    minimal_incompatible_sets,
    parse_hypergraph,
)
from .povm import (
    JointPovm,
    NoisyCliffordObservable,
    Povm,
    clifford_compatibility_threshold,
    joint_povm_from_json,
    joint_povm_to_json,
    make_joint_povm,
    make_noisy_observable,
    marginalize,
    povm_from_json,
    povm_residuals,
    povm_to_json,
    recover_purity,
    specker_eta,
    trivial_povm,
    validate_povm,
)
from .feasibility import (
    FEASIBLE,
    ITERATION_LIMIT,
    PRESUMED_INFEASIBLE,
    FeasibilityReport,
    decide_joint_measurability,
    verify_witness,
)
from .realization import (
    Realization,
    RealizationBlock,
    VerificationReport,
    blockwise_joint_witness,
    realization_from_json,
    realization_to_json,
    realize,
    verify_realization,
)

__version__ = "0.1.0"
