"""Exact positive cubature formulas for bandlimited signals on weighted graphs."""

__version__ = "0.1.0"

from graph_cubature.graph import (  # noqa: E402
    Graph,
    GraphError,
    apply_laplacian,
    build_laplacian,
    gradient_norm,
    induced_subgraph,
    l1_norm,
    l2_norm,
    sum_values,
)
from graph_cubature.kernels import BACKEND  # noqa: E402
from graph_cubature.spectral import (  # noqa: E402
    BandwidthError,
    EigenConvergenceError,
    PaleyWienerBasis,
    SpectralDecomposition,
    bernstein_check,
    eigendecompose,
    graph_spectrum,
    in_X_tau,
    project_pw,
    pw_basis,
)
from graph_cubature.partition import (  # noqa: E402
    ClusterSpectral,
    Partition,
    PartitionError,
    cluster_spectral,
    validate_partition,
)
from graph_cubature.functionals import (  # noqa: E402
    ConstantsReport,
    FunctionalError,
    FunctionalFamily,
    NormalizedFunctional,
    compute_constants,
    load_custom,
    make_average,
    make_dirac,
    normalize,
    sample,
)
from graph_cubature.cubature import (  # noqa: E402
    CubatureWeights,
    InfeasibleError,
    SamplingMatrix,
    build_sampling_matrix,
    default_omega,
    reconstruct,
    solve_weights,
    verify_weights,
)
