"""Closed-form analysis of the two-offer game.

With offers ``a_0 > a_1`` the responder's only nontrivial reply is to reject
``a_0`` with some probability, and the regret gap is linear in the
proposer's weight on ``a_0`` with slope ``kappa``.  The sign of its
intercept decides who can force whom, and its root is the critical
probability ``pi_c``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .logmath import ZERO, SignedLog, log_sinh, signed_sum
from .model import (
    DegenerateGameError,
    GameSpec,
    UtilityKind,
    eval_regret,
    eval_regret_signed,
    eval_utility,
    require_valid,
)

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


class Winner(str, Enum):
    RESPONDER_WINS = "ResponderWins"
    PROPOSER_WINS_WITH_BOUND = "ProposerWinsWithBound"
    PROPOSER_ALWAYS_WINS = "ProposerAlwaysWins"
    PROPOSER_WINS = "ProposerWins"
    TIE = "Tie"


@dataclass(frozen=True)
class TwoOfferVerdict:
    winner: Winner
    pi_c: float
    kappa: float
    p0_bound: float | None = None


@dataclass(frozen=True)
class TwoOfferOptimum:
    """Best mean outcome for the proposer with the sure offer held fixed.

    ``pi_star`` is the critical probability at ``a0_star``; when
    ``open_boundary`` is set the value is a supremum approached from
    ``pi_0 < pi_star``.
    """

    value: float
    a0_star: float
    pi_star: float
    open_boundary: bool


def _require_two(game: GameSpec) -> None:
    if game.size != 2:
        raise ValueError(f"two-offer analysis needs exactly 2 offers, got {game.size}")


def _shares(game: GameSpec):
    a0, a1 = game.offers
    x0 = float(eval_utility(game.u_responder, max(game.total - a0, 0.0)))
    x1 = float(eval_utility(game.u_responder, max(game.total - a1, 0.0)))
    y0 = float(eval_utility(game.u_proposer, a0))
    y1 = float(eval_utility(game.u_proposer, a1))
    return x0, x1, y0, y1


def _g(game: GameSpec, x: float) -> SignedLog:
    return eval_regret_signed(game.regret, x)


def kappa_signed(game: GameSpec) -> SignedLog:
    """Slope of the gap in ``pi_0``, from the product-of-sinh form."""
    _require_two(game)
    if game.regret.is_linear:
        return ZERO
    x0, x1, _, _ = _shares(game)
    beta = game.regret.beta
    args = [(x1 - x0) / (2 * beta), x0 / (2 * beta), x1 / (2 * beta)]
    if any(a == 0.0 for a in args):
        return ZERO
    sign = int(np.prod(np.sign(args)))
    return SignedLog(sign, math.log(4.0) + sum(log_sinh(abs(a)) for a in args))


def kappa_difference(game: GameSpec) -> float:
    """Same slope from its defining three-term difference (plain floats)."""
    _require_two(game)
    x0, x1, _, _ = _shares(game)
    g = game.regret
    return float(-eval_regret(g, x0) + eval_regret(g, x1) - eval_regret(g, x1 - x0))


def kappa(game: GameSpec) -> float:
    """Nonnegative slope of the two-offer regret gap.

    The product form is returned; it is cross-checked against the
    difference form wherever the latter is not dominated by cancellation.
    """
    k = kappa_signed(game)
    value = float(k)
    if math.isfinite(value) and not game.regret.is_linear:
        x0, x1, _, _ = _shares(game)
        g = game.regret
        diff = kappa_difference(game)
        if math.isfinite(diff):
            terms = abs(eval_regret(g, x0)) + abs(eval_regret(g, x1)) + abs(eval_regret(g, x1 - x0))
            tol = max(1e-9 * abs(value), 64 * np.finfo(float).eps * terms)
            if abs(diff - value) > tol:
                raise ArithmeticError(f"kappa forms disagree: {value!r} vs {diff!r}")
    return value


def intercept_signed(game: GameSpec) -> SignedLog:
    """``g[u_I(a_1)] - g[u_II(A - a_1)] + g[u_II(A - a_1) - u_II(A - a_0)]``.

    Positive means the responder can force the sure offer.
    """
    _require_two(game)
    x0, x1, _, y1 = _shares(game)
    return signed_sum([_g(game, y1), -_g(game, x1), _g(game, x1 - x0)])


def critical_probability(game: GameSpec) -> float:
    """``1 + (g[u_II(A - a_0)] - g[u_I(a_1)]) / kappa``; may fall outside [0, 1]."""
    _require_two(game)
    x0, _, _, y1 = _shares(game)
    num = signed_sum([_g(game, x0), -_g(game, y1)])
    k = kappa_signed(game)
    if k.sign == 0:
        if num.sign == 0:
            raise DegenerateGameError("kappa and numerator both vanish; pi_c undefined")
        if game.regret.is_linear:
            return num.sign * math.inf
        raise DegenerateGameError("kappa vanishes; pi_c undefined")
    log_ratio = num.log_abs - k.log_abs
    ratio = num.sign * k.sign * (math.inf if log_ratio > 709.0 else math.exp(log_ratio))
    return 1.0 + ratio


def classify_two_offer(game: GameSpec) -> TwoOfferVerdict:
    require_valid(game)
    _require_two(game)
    k = kappa_signed(game)
    intercept = intercept_signed(game)
    if intercept > 0:
        pi_c = critical_probability(game) if k.sign else -math.inf
        return TwoOfferVerdict(Winner.RESPONDER_WINS, pi_c, float(k), _p0_bound(game, intercept))
    pi_c = critical_probability(game)
    winner = Winner.PROPOSER_ALWAYS_WINS if pi_c >= 1.0 else Winner.PROPOSER_WINS_WITH_BOUND
    return TwoOfferVerdict(winner, pi_c, float(k))


def _p0_bound(game: GameSpec, intercept: SignedLog) -> float:
    _, _, y0, y1 = _shares(game)
    spread = _g(game, y0 - y1)
    den = intercept + spread
    return math.exp(intercept.log_abs - den.log_abs)


def responder_p0_bound(game: GameSpec) -> float:
    """Upper bound on the responder's acceptance probability of ``a_0``.

    Any acceptance probability below it keeps the proposer's regret strictly
    larger for every positive weight on ``a_0``.
    """
    verdict = classify_two_offer(game)
    if verdict.winner is not Winner.RESPONDER_WINS:
        raise ValueError(f"no acceptance bound: {verdict.winner.value}")
    return verdict.p0_bound


def eu_two_offer_winner(game: GameSpec) -> Winner:
    """Winner in the expected-utility limit: the responder wins iff it values
    the sure offer above what it gets from the greedy one."""
    _require_two(game)
    a0, a1 = game.offers
    if game.homogeneous:
        lhs, rhs = a1, game.total - a0
    else:
        lhs = eval_utility(game.u_proposer, a1)
        rhs = eval_utility(game.u_responder, game.total - a0)
    if lhs > rhs:
        return Winner.RESPONDER_WINS
    if lhs < rhs:
        return Winner.PROPOSER_WINS
    return Winner.TIE


def _require_log(game: GameSpec) -> tuple[float, float]:
    if game.u_proposer.kind is not UtilityKind.LOG or game.u_responder.kind is not UtilityKind.LOG:
        raise ValueError("thresholds need logarithmic utilities for both players")
    return game.u_proposer.gamma, game.u_responder.gamma


def hetero_thresholds(game: GameSpec) -> tuple[float, float]:
    """Money thresholds for ``a_1`` under logarithmic utilities.

    Returns ``(responder_wins_above, proposer_immune_at_or_below)``: the
    responder wins once ``a_1`` exceeds the first; the proposer is immune to
    rejection while ``a_1`` stays at or below the second.
    """
    _require_two(game)
    g1, g2 = _require_log(game)
    return game.total / (1.0 + g2 / g1), (g1 / g2) * (game.total - game.offers[0])


def superfair_pi_c(game: GameSpec, check: bool = True) -> float:
    """Critical probability for the unfair/superfair pair ``a_1 = A - a_0``
    when the responder is wealthier; lies below 1."""
    _require_two(game)
    g1, g2 = _require_log(game)
    a0, a1 = game.offers
    if check:
        problems = []
        if not math.isclose(a1, game.total - a0, rel_tol=1e-12, abs_tol=1e-12):
            problems.append("a_1 must equal A - a_0")
        if not a1 < game.total / 2:
            problems.append("a_1 must be below A/2")
        if not g2 > g1:
            problems.append("responder gamma must exceed proposer gamma")
        if problems:
            raise ValueError("; ".join(problems))
    x0, x1, _, y1 = _shares(game)
    num = float(signed_sum([_g(game, y1), -_g(game, x0)]))
    den = float(kappa_signed(game))
    if den == 0:
        raise DegenerateGameError("kappa vanishes; pi_c undefined")
    return 1.0 - num / den


def golden_section_max(f, lo: float, hi: float, tol: float = 1e-7, max_iter: int = 200):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def optimize_proposer_two(
    game: GameSpec,
    a1: float | None = None,
    utility_weighted: bool = False,
    prescan: int = 400,
    tol: float = 1e-7,
) -> TwoOfferOptimum:
    """Choose the greedy offer ``a_0`` maximizing the proposer's mean outcome.

    The sure offer ``a1`` (default: ``game.offers[-1]``) is held fixed below
    ``A/2``; ``a_0`` ranges over ``[A - a1, A)``.  The proposer mixes with
    weight just under ``min(pi_c, 1)`` on ``a_0``.  By default outcomes are
    raw money; ``utility_weighted`` uses the proposer's utility instead.
    """
    total = game.total
    a1 = float(game.offers[-1] if a1 is None else a1)
    if not 0 < a1 < total / 2:
        raise ValueError(f"sure offer must lie in (0, A/2), got {a1}")

    if utility_weighted:
        w = lambda x: float(eval_utility(game.u_proposer, x))  # noqa: E731
    else:
        w = float
    w1 = w(a1)

    def weight(a0: float) -> float:
        try:
            pc = critical_probability(game.with_offers((a0, a1)))
        except DegenerateGameError:
            return 0.0
        return min(max(pc, 0.0), 1.0)

    def objective(a0: float) -> float:
        return weight(a0) * (w(a0) - w1) + w1

    lo, hi = total - a1, total - 1e-9
    xs = np.linspace(lo, hi, prescan)
    vals = np.array([objective(x) for x in xs])
    i = int(np.argmax(vals))
    best_x, best_v = float(xs[i]), float(vals[i])
    left, right = xs[max(i - 1, 0)], xs[min(i + 1, prescan - 1)]
    x, v = golden_section_max(objective, float(left), float(right), tol=tol)
    if v > best_v:
        best_x, best_v = x, v
    pc = weight(best_x)
    return TwoOfferOptimum(best_v, best_x, pc, open_boundary=pc < 1.0)
