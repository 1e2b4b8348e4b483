from .classical import (
    RoadColoring,
    SyncReport,
    alternating_sum_bound,
    classical_mixing_bound,
    graph_product,
    is_synchronizing_word,
    nonsync_enumeration_oracle,
    nonsync_probability,
    stochastic_matrix,
    sync_report,
)
from .diagonal import (
    CouplingState,
    DiagonalProjection,
    gns_vector,
    is_channel_coupling,
    is_diagonal_projection,
    maximal_diagonal_projection,
    optimize_overlap,
    qci_bounds,
    support_projection,
)
from .dilation import (
    DiagonalCoupling,
    TensorDilation,
    diagonal_coupling,
    induced_channel,
    validate,
)
from .errors import QmcError
from .objects import KrausChannel, State, Superoperator, invariant_state, transfer_matrix
from .scattering import (
    MixingCertificate,
    certificate,
    extended_dual,
    fixed_space_dim,
    fixed_spaces,
    is_asymptotically_complete,
    mixing_bound,
)

__all__ = [
    "State",
    "KrausChannel",
    "Superoperator",
    "transfer_matrix",
    "invariant_state",
    "CouplingState",
    "DiagonalProjection",
    "gns_vector",
    "support_projection",
    "is_diagonal_projection",
    "maximal_diagonal_projection",
    "qci_bounds",
    "optimize_overlap",
    "is_channel_coupling",
    "TensorDilation",
    "DiagonalCoupling",
    "validate",
    "induced_channel",
    "diagonal_coupling",
    "MixingCertificate",
    "extended_dual",
    "fixed_space_dim",
    "fixed_spaces",
    "is_asymptotically_complete",
    "certificate",
    "mixing_bound",
    "RoadColoring",
    "SyncReport",
    "stochastic_matrix",
    "graph_product",
    "is_synchronizing_word",
    "nonsync_probability",
    "nonsync_enumeration_oracle",
    "alternating_sum_bound",
    "classical_mixing_bound",
    "sync_report",
    "QmcError",
]
