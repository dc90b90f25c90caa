"""Tensor norms on two-prover games and Bell functionals.

Computes and cross-verifies four norms at desk scale: the injective
norm (equal to the classical game value), the classical Bell bound, the
Hilbertian norm gamma2 (1 on every quantum behavior) and its dual
gamma2* (an upper bound on entangled values, tight for XOR games),
together with parallel composition, quantum strategy simulation,
see-saw lower bounds and constructive Gaussian sign rounding.
"""

__version__ = "0.1.0"

from .classical import (
    ClassicalCertificate,
    bell_classical_value,
    classical_value,
    classical_value_heuristic,
    evaluate_certificate,
    injective_norm,
)
from .errors import (
    CapExceeded,
    DimensionMismatch,
    GameNormsError,
    SchemaError,
    SolverFailure,
    SpaceTagError,
)
from .games import (
    BehaviorTensor,
    BellFunctional,
    Game,
    MarginalTensor,
    chsh_bell,
    chsh_game,
    compose,
    compose_behaviors,
    compose_games,
    game_to_functional,
    infty1_norm,
    infty1_norm_joint,
    is_xor_game,
    one_infty_norm,
    pairing,
    power,
    power_game,
    random_bell,
    random_game,
    strategy_to_behavior,
    tensor_marginals,
    uniform_behavior,
    xor_game,
)
from .hilbertian import (
    GROTHENDIECK_K,
    KRIVINE_C,
    Decomposition,
    Gamma2Result,
    Gamma2StarResult,
    GramWitness,
    VectorSystem,
    XorValue,
    gamma2,
    gamma2_star,
    gamma2_star_decomposition_bound,
    opnorm_1inf_to_2,
    opnorm_2_to_inf1,
    verify_direct_product,
    verify_grothendieck,
    w2_bound,
    witness_vectors,
    xor_entangled_value,
)
from .quantum import (
    Observable,
    ProjectiveMeasurement,
    PureState,
    QuantumStrategy,
    SeesawResult,
    TsirelsonStrategy,
    behavior_of,
    clifford_generators,
    correlation,
    maximally_entangled_state,
    random_strategy,
    seesaw_lower_bound,
    strategy_vector_systems,
    tsirelson_strategy,
)
from .rounding import (
    CovarianceModel,
    IdentityReport,
    RoundingCertificate,
    SignSampleBatch,
    grothendieck_identity_check,
    krivine_covariance,
    round_bell,
    sample_signs,
)
from .sdp import (
    ResidualReport,
    SdpProblem,
    SdpSolution,
    check_solution,
    solve,
    spectral_norm,
)
from .serialize import emit, emit_file, parse, parse_file
