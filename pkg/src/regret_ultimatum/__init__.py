"""Regret-based solver for the ultimatum game."""
from .engine import (
    REJECT,
    EndpointStrategy,
    RegretReport,
    delta_R,
    in_winning_domain,
    max_delta_R_over_p,
    regret_conditional_responder,
    regret_diff_proposer,
    regret_diff_responder,
)
from .eu import (
    EUOptimum,
    EURegime,
    eu_best_response,
    eu_optimal_three,
    eu_regret_gap,
    eu_winning_condition,
)
from .kernels import BACKEND
from .logmath import SignedLog
from .mini import (
    TwoOfferOptimum,
    TwoOfferVerdict,
    Winner,
    classify_two_offer,
    critical_probability,
    eu_two_offer_winner,
    hetero_thresholds,
    kappa,
    optimize_proposer_two,
    responder_p0_bound,
    superfair_pi_c,
)
from .model import (
    DegenerateGameError,
    GameSpec,
    GameValidationError,
    ProposerStrategy,
    RegretSpec,
    ResponderStrategy,
    UtilitySpec,
    eval_regret,
    eval_utility,
    validate_game,
)
from .multi import (
    InfeasibleError,
    ProposerOptimum,
    U2Mode,
    WinningDomain,
    max_mean_utility_over_domain,
    optimize_U1,
    optimize_U2,
    winning_domain,
)

__version__ = "0.1.0"
