"""Forward Dirichlet-to-Neumann maps of resistor networks and
log-linear recovery of edge conductivities from the boundary response.
"""

from .errors import (
    AllRowsDegenerate,
    ExpansionMismatch,
    InconsistentDataWarning,
    InteriorNotGrounded,
    NetworkError,
    NetworkFormatError,
    NotPositiveDefinite,
    NotSparseDifference,
    RankDeficient,
    RoundTripFailure,
    TooManySystems,
)
from .forward import (
    BoundaryPair,
    DtNMap,
    dtn,
    dtn_subdet,
    harmonic_extension,
    kirchhoff_subdet,
    schur_identity_check,
)
from .inverse import (
    LogLinearSystem,
    RecoveryReport,
    build_system,
    difference_rows,
    enumerate_admissible_pairs,
    recover,
    solve_system,
    system_rank,
)
from .network import (
    Edge,
    KirchhoffMatrix,
    Network,
    kirchhoff,
    lattice_fixture,
    parse_network,
    serialize_network,
)
from .paths import (
    AdmissibleRow,
    PathSystem,
    PathTerm,
    enumerate_path_systems,
    expand_det,
    is_log_linear_admissible,
    term_sign,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
