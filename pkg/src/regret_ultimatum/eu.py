"""Expected-utility limit (linear regret) in closed form.

Written directly from the expected-utility differences, independent of the
regret engine, so the two can cross-check each other.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import GameSpec, ProposerStrategy, ResponderStrategy, eval_utility


class EURegime(str, Enum):
    TWO_OFFER_REDUCTION = "TwoOfferReduction"
    PROBABILISTIC_MIXING = "ProbabilisticMixing"
    RESPONDER_WINS = "ResponderWins"


@dataclass(frozen=True)
class EUOptimum:
    value: float
    pi_c: float
    regime: EURegime


@dataclass(frozen=True)
class BestResponse:
    strategy: ResponderStrategy
    ties: tuple[int, ...] = ()

    @property
    def degenerate(self) -> bool:
        return bool(self.ties)


def _kept(game: GameSpec) -> np.ndarray:
    return np.asarray(eval_utility(game.u_proposer, np.array(game.offers)), dtype=float)


def _given(game: GameSpec) -> np.ndarray:
    shares = np.maximum(game.total - np.array(game.offers), 0.0)
    return np.asarray(eval_utility(game.u_responder, shares), dtype=float)


def eu_regret_gap(game: GameSpec, pi, p) -> float:
    """Responder minus proposer regret under expected utility.

    ``sum_{l<n} pi_l [p_l u(a_l) + (1 - p_l) u(A - a_l) - u(a_n)]``.
    """
    pi = np.asarray(pi.pi if isinstance(pi, ProposerStrategy) else pi, dtype=float)
    p = np.asarray(p.p if isinstance(p, ResponderStrategy) else p, dtype=float)
    kept, given = _kept(game), _given(game)
    terms = p[:-1] * kept[:-1] + (1.0 - p[:-1]) * given[:-1] - kept[-1]
    return float(pi[:-1] @ terms)


def eu_best_response(game: GameSpec) -> BestResponse:
    """Responder's gap-minimizing reply: reject exactly the offers the
    proposer values above what the responder would receive.

    Ties are accepted (any value gives the same gap) and reported.
    """
    kept, given = _kept(game), _given(game)
    p = np.where(kept > given, 0.0, 1.0)
    p[-1] = 1.0
    ties = tuple(int(i) for i in np.flatnonzero(kept[:-1] == given[:-1]))
    return BestResponse(ResponderStrategy(tuple(p)), ties)


def eu_winning_condition(game: GameSpec, pi) -> bool:
    """True when the proposer's regret stays strictly below the responder's
    against the responder's best reply."""
    reply = eu_best_response(game).strategy
    return eu_regret_gap(game, pi, reply) > 0.0


def eu_optimal_three(game: GameSpec) -> EUOptimum:
    """Closed-form proposer optimum for three offers with ``a_0 > A/2 > a_1 > a_2``."""
    if game.size != 3:
        raise ValueError("closed form covers exactly three offers")
    a0, a1, a2 = game.offers
    half = game.total / 2
    if not (a0 > half > a1 > a2):
        raise ValueError("regime needs a_0 > A/2 > a_1 > a_2")
    u0, u1, u2 = _kept(game)
    r0 = float(_given(game)[0])
    if r0 >= u2:
        # a_0 alone already beats the sure offer for the responder
        pi_c = 1.0
    else:
        pi_c = 1.0 - (u2 - r0) / (u1 - r0)
    value = pi_c * (u0 - u2) + (1.0 - pi_c) * (u1 - u2) + u2
    regime = EURegime.TWO_OFFER_REDUCTION if pi_c >= 1.0 else EURegime.PROBABILISTIC_MIXING
    return EUOptimum(float(value), float(pi_c), regime)
