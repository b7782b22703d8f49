"""Phase retrievability of quantum channels.

Decides and quantifies whether a channel determines pure input states up
to global phase, analyzes the complementary operator system behind that
question, and studies the two-arm interferometric coupling that can
enhance it.
"""

from .channels import (
    DensityMatrix,
    KrausFamily,
    PureState,
    adjoint_apply,
    apply,
    complementary,
    frame_operator,
    from_json_dict,
    load_channel,
    mix_kraus,
    pad,
    random_kraus_family,
    random_unitary,
    save_channel,
    stinespring,
    to_json_dict,
)
from .criteria import (
    RepDecomposition,
    Verdict,
    complementary_system_dim,
    eb_obstruction,
    psic_dim_bound,
    rank_obstruction,
    system_dim_via_gram,
    twirl_channel,
    twirl_dim_check,
    twirl_obstruction,
)
from .errors import PhaseportError
from .injectivity import (
    CollisionResult,
    InjectivityReport,
    TransferMatrix,
    avg_injectivity,
    cp_injectivity,
    injectivity_report,
    kernel_h0,
    op_norm_0to2,
    povm_injectivity,
    pure_collision_search,
    transfer_matrix,
)
from .interferometer import (
    CouplingSpec,
    PortMap,
    Visibility,
    classical_mix,
    couple,
    cross_operator,
    degenerate_thetas,
    e_theta,
    is_frame,
    port_adjoint_decomposition,
    port_map,
    port_system_dim,
    port_system_matrix,
    port_system_terms,
    visibility,
)
from .linalg import (
    HermitianBasis,
    RankTolerance,
    gell_mann_basis,
    herm_eig,
    hs_inner,
    kron,
    numerical_rank,
    unvec,
    vec,
)
from .zoo import builtin_names, zoo

__version__ = "0.1.0"
