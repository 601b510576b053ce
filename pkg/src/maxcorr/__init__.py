"""Maximal correlation of bipartite states and certified entanglement bounds."""

from .correlation import (
    CorrelationReport,
    ObservablePair,
    VariationalResult,
    extract_witness,
    mu_classical,
    mu_schmidt,
    mu_variational,
    normalized_operator,
)
from .entanglement import (
    Decomposition,
    IsotropicBounds,
    PptReport,
    QuasiConvexityReport,
    bell_fidelity,
    decomposition_search,
    fidelity_mu_lower_bound,
    lambda_bounds,
    mu_ent_upper,
    ppt_check,
    quasi_convexity_check,
    random_povm_decomposition,
    separable_iso_decomposition,
    single_qubit_cliffords,
    twirl_clifford_average,
    twirl_exact,
)
from .errors import (
    DegenerateMarginalError,
    DimensionMismatchError,
    InvalidDecompositionError,
    MaxcorrError,
    NegativeEigenvalueError,
    NotHermitianError,
    NotSquareError,
    ParseError,
    RangeError,
    UnknownSuiteError,
    ValidationError,
)
from .linalg import (
    hermitian_eig,
    kron,
    partial_trace,
    partial_transpose,
    psd_pinv_sqrt,
    psd_sqrt,
    realign,
    singular_values,
)
from .states import (
    BipartiteState,
    ClassicalJoint,
    LocalChannel,
    StateDiagnostics,
    apply_local,
    bell_projector,
    classical_bsc,
    embed_classical,
    isotropic,
    measure_computational,
    random_channel,
    random_density,
    random_product,
    random_pure,
    tensor_bipartite,
    validate,
)

__version__ = "0.1.0"
