"""Regret functionals of responder and proposer and their difference.

Everything is expressed through the odd comparator ``g``.  Regret values are
precomputed into a :class:`RegretTables` bundle; for sinh regret whose
arguments exceed the float range every entry is divided by a common factor
``exp(log_scale)``, which preserves signs and ratios of all sums.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import kernels
from .logmath import SINH_LINEAR_LIMIT, SignedLog, scaled_sinh
from .model import (
    GameSpec,
    GameValidationError,
    ProposerStrategy,
    ResponderStrategy,
    eval_regret,
)

# |dR| at or below this (in the working scale) counts as a tie, i.e. not winning.
TIE_TOL = 1e-12

REJECT = "reject"

PiLike = Union[ProposerStrategy, Sequence[float], np.ndarray]
PLike = Union[ResponderStrategy, Sequence[float], np.ndarray]


@dataclass(frozen=True)
class RegretTables:
    gp: np.ndarray  # g[u_I(a_n) - u_I(a_i)]
    gn: float  # g[u_I(a_n)]
    gr: np.ndarray  # g[u_II(A - a_k)]
    gd: np.ndarray  # g[u_II(A - a_i) - u_II(A - a_j)], upper triangle used
    log_scale: float = 0.0


def regret_tables(game: GameSpec) -> RegretTables:
    u1 = game.proposer_utilities()
    u2 = game.responder_utilities()
    gp_arg = u1[-1] - u1
    gd_arg = u2[:, None] - u2[None, :]
    if game.regret.is_linear:
        return RegretTables(gp_arg, float(u1[-1]), u2.copy(), gd_arg)
    beta = game.regret.beta
    biggest = max(np.abs(gp_arg).max(), abs(u1[-1]), np.abs(u2).max(), np.abs(gd_arg).max()) / beta
    scale = float(biggest) if biggest > SINH_LINEAR_LIMIT else 0.0
    g = lambda x: scaled_sinh(np.asarray(x) / beta, scale)  # noqa: E731
    return RegretTables(g(gp_arg), float(g(u1[-1])), g(u2), g(gd_arg), scale)


@dataclass(frozen=True)
class RegretReport:
    """Responder and proposer regret functionals and ``delta = proposer - responder``."""

    rho_responder: SignedLog
    rho_proposer: SignedLog
    delta: SignedLog

    @property
    def responder_wins(self) -> bool:
        return self.rho_responder > 0 and self.rho_responder < self.rho_proposer

    @property
    def proposer_wins(self) -> bool:
        return self.rho_responder > self.rho_proposer


@dataclass(frozen=True)
class EndpointStrategy:
    """Responder strategy rejecting the ``k`` greediest offers outright.

    ``k = 0`` is the trivial accept-everything vertex.
    """

    k: int
    size: int

    def __post_init__(self):
        if not 0 <= self.k <= self.size - 1:
            raise ValueError(f"endpoint k must be in [0, {self.size - 1}], got {self.k}")

    @property
    def trivial(self) -> bool:
        return self.k == 0

    def expand(self) -> ResponderStrategy:
        if self.k == 0:
            return ResponderStrategy.accept_all(self.size)
        return ResponderStrategy.endpoint(self.size, self.k)


def _pi_array(game: GameSpec, pi: PiLike) -> np.ndarray:
    if not isinstance(pi, ProposerStrategy):
        pi = ProposerStrategy(tuple(pi))
    if len(pi) != game.size:
        raise GameValidationError([f"length: pi has {len(pi)} entries for {game.size} offers"])
    return pi.as_array()


def _p_array(game: GameSpec, p: PLike) -> np.ndarray:
    if isinstance(p, EndpointStrategy):
        p = p.expand()
    if not isinstance(p, ResponderStrategy):
        p = ResponderStrategy(tuple(p))
    if len(p) != game.size:
        raise GameValidationError([f"length: p has {len(p)} entries for {game.size} offers"])
    return p.as_array()


def _responder_scaled(t: RegretTables, pi: np.ndarray, p: np.ndarray) -> float:
    accept_mass = float(p @ pi)
    pairwise = 0.0
    size = len(pi)
    for i in range(size):
        for j in range(i + 1, size):
            pairwise += (p[j] - p[i]) * pi[i] * pi[j] * t.gd[i, j]
    return (1.0 - accept_mass) * float(pi @ t.gr) + pairwise


def _proposer_scaled(t: RegretTables, pi: np.ndarray, p: np.ndarray) -> float:
    accept_mass = float(p @ pi)
    return float((p * pi) @ t.gp) + (1.0 - accept_mass) * t.gn


def regret_conditional_responder(game: GameSpec, pi: PiLike, realized) -> float:
    """Responder's regret for having rejected, given the realized outcome.

    ``realized`` is an offer index (the offer came in and was accepted under
    the rejecting lottery) or :data:`REJECT` (nothing was received).  Uses
    the pure-regret split ``f(x) = g(x)`` for ``x > 0`` and 0 otherwise.
    """
    pi_arr = _pi_array(game, pi)
    u2 = game.responder_utilities()
    if isinstance(realized, str) and realized == REJECT:
        ref = 0.0
    else:
        if isinstance(realized, bool) or not isinstance(realized, (int, np.integer)):
            raise TypeError("realized must be an offer index or REJECT")
        if not 0 <= realized <= game.n:
            raise IndexError(f"offer index {realized} out of range [0, {game.n}]")
        ref = u2[realized]
    diff = u2 - ref
    f = np.where(diff > 0, eval_regret(game.regret, diff), 0.0)
    return float(pi_arr @ f)


def regret_diff_responder(game: GameSpec, pi: PiLike, p: PLike) -> float:
    """Responder's regret functional (positive: accepting was preferable)."""
    return float(delta_R(game, pi, p).rho_responder)


def regret_diff_proposer(game: GameSpec, pi: PiLike, p: PLike) -> float:
    """Proposer's regret functional for not having offered the last option surely."""
    return float(delta_R(game, pi, p).rho_proposer)


def delta_R(game: GameSpec, pi: PiLike, p: PLike, tables: RegretTables | None = None) -> RegretReport:
    pi_arr = _pi_array(game, pi)
    p_arr = _p_array(game, p)
    t = tables or regret_tables(game)
    r2 = _responder_scaled(t, pi_arr, p_arr)
    r1 = _proposer_scaled(t, pi_arr, p_arr)
    return RegretReport(
        SignedLog.from_scaled(r2, t.log_scale),
        SignedLog.from_scaled(r1, t.log_scale),
        SignedLog.from_scaled(r1 - r2, t.log_scale),
    )


def max_delta_R_batch(game: GameSpec, pis: np.ndarray, tables: RegretTables | None = None,
                      backend: str | None = None) -> tuple[np.ndarray, np.ndarray, float]:
    """Endpoint maximum of the gap for a batch of proposer strategies.

    Returns ``(values, k, log_scale)``; true maxima are ``values * exp(log_scale)``.
    """
    t = tables or regret_tables(game)
    pis = np.ascontiguousarray(pis, dtype=float)
    if pis.ndim != 2 or pis.shape[1] != game.size:
        raise ValueError(f"expected an (m, {game.size}) array of strategies")
    vals, ks = kernels.endpoint_max(
        pis,
        np.ascontiguousarray(t.gp, dtype=float),
        float(t.gn),
        np.ascontiguousarray(t.gr, dtype=float),
        np.ascontiguousarray(t.gd, dtype=float),
        backend=backend,
    )
    return np.asarray(vals), np.asarray(ks), t.log_scale


def max_delta_R_over_p(game: GameSpec, pi: PiLike) -> tuple[SignedLog, EndpointStrategy]:
    """Maximize the gap over all admissible responder strategies.

    The gap is affine in each acceptance probability, so the maximum sits at
    a vertex of the admissible set.  The accept-everything vertex never has a
    positive gap and is reported only when it strictly beats the ``n``
    nontrivial endpoints; other ties go to the smallest ``k``.
    """
    pi_arr = _pi_array(game, pi)
    vals, ks, scale = max_delta_R_batch(game, pi_arr[None, :])
    return SignedLog.from_scaled(vals[0], scale), EndpointStrategy(int(ks[0]), game.size)


def winning_mask(scaled_max: np.ndarray) -> np.ndarray:
    """Strict membership test on endpoint maxima in the working scale."""
    return np.asarray(scaled_max) < -TIE_TOL


def in_winning_domain(game: GameSpec, pi: PiLike) -> bool:
    pi_arr = _pi_array(game, pi)
    vals, _, _ = max_delta_R_batch(game, pi_arr[None, :])
    return bool(winning_mask(vals)[0])


def eval_endpoint(game: GameSpec, pi: PiLike, k: int) -> SignedLog:
    return delta_R(game, pi, EndpointStrategy(k, game.size)).delta

