"""Winning domains on the proposer's simplex and mean-utility optimization
for two or more offers."""
from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .engine import RegretTables, max_delta_R_batch, regret_tables, winning_mask
from .kernels import worker_count
from .model import GameSpec, ProposerStrategy, require_valid


class InfeasibleError(RuntimeError):
    """No offer choice admits a strictly winning proposer strategy."""


class U2Mode(str, Enum):
    FULL = "full"
    TILDE = "tilde"


@lru_cache(maxsize=32)
def _grid(size: int, units: int) -> np.ndarray:
    # stars and bars: bar positions -> part sizes, lexicographic in pi_0, pi_1, ...
    rows = []
    for bars in itertools.combinations(range(units + size - 1), size - 1):
        edges = (-1,) + bars + (units + size - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(size)])
    out = np.array(rows, dtype=float) / units
    out.setflags(write=False)
    return out


def grid_units(step: float) -> int:
    if not 0 < step <= 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5], got {step}")
    units = round(1.0 / step)
    if abs(units * step - 1.0) > 1e-9:
        raise ValueError(f"grid step must divide 1, got {step}")
    return units


def simplex_grid(size: int, step: float) -> np.ndarray:
    """All probability vectors of length ``size`` with entries on multiples of ``step``."""
    return _grid(size, grid_units(step))


@dataclass(frozen=True, eq=False)
class WinningDomain:
    """Grid points of the simplex where the proposer strictly wins."""

    game: GameSpec
    grid_step: float
    points: np.ndarray
    mask: np.ndarray

    @property
    def n(self) -> int:
        return self.game.n

    @property
    def members(self) -> np.ndarray:
        return self.points[self.mask]

    def __len__(self) -> int:
        return int(self.mask.sum())

    @property
    def empty(self) -> bool:
        return not self.mask.any()

    def strategies(self) -> list[ProposerStrategy]:
        return [ProposerStrategy(tuple(row)) for row in self.members]

    def to_csv(self, fh=None) -> str | None:
        """Write ``pi_0, ..., pi_n, in_domain`` rows; returns text if no handle given."""
        buf = fh if fh is not None else io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"pi_{i}" for i in range(self.game.size)] + ["in_domain"])
        for row, inside in zip(self.points, self.mask):
            w.writerow([f"{v:.6g}" for v in row] + [int(inside)])
        return None if fh is not None else buf.getvalue()


@dataclass(frozen=True)
class ProposerOptimum:
    """Maximal mean utility over the winning domain.

    ``supremum`` marks optima sitting on the domain boundary, where the true
    value is only approached from inside.
    """

    value: float
    pi_star: tuple[float, ...]
    offers_star: tuple[float, ...]
    supremum: bool = False


def winning_domain(game: GameSpec, grid_step: float = 0.01,
                   tables: RegretTables | None = None) -> WinningDomain:
    require_valid(game)
    pts = simplex_grid(game.size, grid_step)
    vals, _, _ = max_delta_R_batch(game, pts, tables)
    return WinningDomain(game, grid_step, pts, winning_mask(vals))


def _best_member(game: GameSpec, domain_pts: np.ndarray, mask: np.ndarray):
    if not mask.any():
        return None
    util = domain_pts @ game.proposer_utilities()
    util = np.where(mask, util, -np.inf)
    i = int(np.argmax(util))
    return float(util[i]), domain_pts[i]


def _on_boundary(game: GameSpec, pi: np.ndarray, step: float, tables: RegretTables) -> bool:
    u = game.proposer_utilities()
    moves = []
    for i, j in itertools.permutations(range(game.size), 2):
        if u[i] > u[j] and pi[j] >= step - 1e-12:
            q = pi.copy()
            q[i] += step
            q[j] -= step
            moves.append(np.clip(q, 0.0, 1.0))
    if not moves:
        return False
    vals, _, _ = max_delta_R_batch(game, np.array(moves), tables)
    return bool((~winning_mask(vals)).any())


def max_mean_utility_over_domain(game: GameSpec, domain: WinningDomain) -> ProposerOptimum | None:
    """Best proposer mean utility over domain members; ``None`` when empty.

    Ties go to the first member in grid order.
    """
    best = _best_member(game, domain.points, domain.mask)
    if best is None:
        return None
    value, pi = best
    edge = _on_boundary(game, pi, domain.grid_step, regret_tables(game))
    return ProposerOptimum(value, tuple(float(x) for x in pi), game.offers, edge)


def _evaluate_offers(template: GameSpec, offers: tuple[float, ...], grid_step: float):
    game = template.with_offers(offers)
    pts = simplex_grid(game.size, grid_step)
    vals, _, _ = max_delta_R_batch(game, pts)
    best = _best_member(game, pts, winning_mask(vals))
    if best is None:
        return None
    return best[0], offers, best[1]


def _offer_ladder(lo: float, hi: float, step: float) -> list[float]:
    """Points ``lo + k * step`` strictly inside ``(lo, hi)``."""
    count = math.ceil((hi - lo) / step - 1e-9) - 1
    return [round(lo + k * step, 10) for k in range(1, count + 1)]


def _scan(template: GameSpec, candidates: list[tuple[float, ...]], grid_step: float):
    if not candidates:
        return None
    workers = min(worker_count(), len(candidates))
    if workers > 1 and len(candidates) > 8:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(lambda o: _evaluate_offers(template, o, grid_step), candidates))
    else:
        results = [_evaluate_offers(template, o, grid_step) for o in candidates]
    best = None
    for r in results:
        if r is not None and (best is None or r[0] > best[0] + 1e-12):
            best = r
    return best


def _finish(template: GameSpec, best, grid_step: float) -> ProposerOptimum:
    value, offers, pi = best
    game = template.with_offers(offers)
    edge = _on_boundary(game, pi, grid_step, regret_tables(game))
    return ProposerOptimum(value, tuple(float(x) for x in pi), tuple(offers), edge)


def _refine(template, best, grid_step, free, offer_step, refine_step, make):
    """Rescan each free offer on a finer ladder around the incumbent."""
    center = best[1]
    candidates = []
    ranges = []
    for idx in free:
        c = center[idx]
        ranges.append(np.arange(c - offer_step, c + offer_step + refine_step / 2, refine_step))
    for combo in itertools.product(*ranges):
        offers = make(combo)
        if offers is not None:
            candidates.append(offers)
    refined = _scan(template, candidates, grid_step)
    if refined is not None and refined[0] > best[0] + 1e-12:
        return refined
    return best


def _strictly_ordered(offers, total) -> bool:
    return offers[0] < total and all(offers[i] > offers[i + 1] for i in range(len(offers) - 1))


def optimize_U1(game: GameSpec, a_last: float | None = None, grid_step: float = 0.01,
                offer_step: float = 1.0, refine_step: float | None = None) -> ProposerOptimum:
    """Two offers: choose the greedy offer and the mixing weights.

    ``a_last`` (default ``game.offers[-1]``) is the offer accepted for sure.
    Offers are scanned on a ladder of ``offer_step``; ties keep the smaller
    offer.
    """
    a_last = float(game.offers[-1] if a_last is None else a_last)
    total = game.total
    candidates = [(a, a_last) for a in _offer_ladder(a_last, total, offer_step)]
    best = _scan(game, candidates, grid_step)
    if best is None:
        raise InfeasibleError(f"no winning two-offer strategy for sure offer {a_last}")
    if refine_step:
        best = _refine(game, best, grid_step, [0], offer_step, refine_step,
                       lambda c: (c[0], a_last) if _strictly_ordered((c[0], a_last), total) else None)
    return _finish(game, best, grid_step)


def optimize_U2(game: GameSpec, a_last: float | None = None, mode: U2Mode | str = U2Mode.FULL,
                a0: float | None = None, grid_step: float = 0.01, offer_step: float = 1.0,
                refine_step: float | None = None) -> ProposerOptimum:
    """Three offers over the winning domain, with free intermediate offer.

    In ``full`` mode both non-sure offers are scanned; in ``tilde`` mode the
    greedy offer ``a0`` (default ``game.offers[0]``) is held fixed.
    """
    mode = U2Mode(mode)
    a_last = float(game.offers[-1] if a_last is None else a_last)
    total = game.total
    if mode is U2Mode.TILDE:
        a0 = float(game.offers[0] if a0 is None else a0)
        if not a_last < a0 < total:
            raise ValueError("need a_last < a0 < total")
        candidates = [(a0, a1, a_last) for a1 in _offer_ladder(a_last, a0, offer_step)]
        free = [1]
    else:
        candidates = [
            (x0, x1, a_last)
            for x0 in _offer_ladder(a_last, total, offer_step)
            for x1 in _offer_ladder(a_last, x0, offer_step)
        ]
        free = [0, 1]
    best = _scan(game, candidates, grid_step)
    if best is None:
        raise InfeasibleError(f"no winning three-offer strategy for sure offer {a_last}")
    if refine_step:
        def make(combo):
            if mode is U2Mode.TILDE:
                offers = (a0, combo[0], a_last)
            else:
                offers = (combo[0], combo[1], a_last)
            return offers if _strictly_ordered(offers, total) else None
        best = _refine(game, best, grid_step, free, offer_step, refine_step, make)
    return _finish(game, best, grid_step)
