"""Game instances, monetary utilities and regret functions."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .logmath import SINH_LINEAR_LIMIT, ZERO, SignedLog, log_sinh

PROB_TOL = 1e-9


class GameValidationError(ValueError):
    """Raised when a game or strategy violates its ordering/normalization rules."""

    def __init__(self, problems: Sequence[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DegenerateGameError(ArithmeticError):
    """The instance makes a closed-form quantity undefined (e.g. kappa == 0)."""


class UtilityKind(str, Enum):
    LINEAR = "linear"
    LOG = "log"


class RegretKind(str, Enum):
    LINEAR = "linear"
    SINH = "sinh"


@dataclass(frozen=True)
class UtilitySpec:
    """Monetary utility: ``x`` or ``ln(x / gamma + 1)``."""

    kind: UtilityKind = UtilityKind.LINEAR
    gamma: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", _utility_kind(self.kind))
        if self.kind is UtilityKind.LOG:
            if self.gamma is None or not self.gamma > 0:
                raise ValueError(f"logarithmic utility needs gamma > 0, got {self.gamma}")
            object.__setattr__(self, "gamma", float(self.gamma))
        elif self.gamma is not None:
            raise ValueError("gamma is only meaningful for logarithmic utility")

    @classmethod
    def linear(cls) -> "UtilitySpec":
        return cls(UtilityKind.LINEAR)

    @classmethod
    def log(cls, gamma: float) -> "UtilitySpec":
        return cls(UtilityKind.LOG, gamma)

    def __call__(self, x):
        return eval_utility(self, x)

    def to_dict(self) -> dict[str, Any]:
        if self.kind is UtilityKind.LOG:
            return {"kind": "log", "gamma": self.gamma}
        return {"kind": "linear"}

    @classmethod
    def from_dict(cls, d: dict[str, Any] | None) -> "UtilitySpec":
        if not d:
            return cls.linear()
        return cls(d.get("kind", "linear"), d.get("gamma"))


def _utility_kind(kind) -> UtilityKind:
    if isinstance(kind, UtilityKind):
        return kind
    k = str(kind).lower()
    if k in ("log", "logarithmic", "ln"):
        return UtilityKind.LOG
    if k in ("linear", "lin", "identity"):
        return UtilityKind.LINEAR
    raise ValueError(f"unknown utility kind {kind!r}")


@dataclass(frozen=True)
class RegretSpec:
    """Regret comparator ``g``: identity (expected utility) or ``sinh(x / beta)``."""

    kind: RegretKind = RegretKind.SINH
    beta: float | None = 1.0

    def __post_init__(self):
        kind = RegretKind(str(getattr(self.kind, "value", self.kind)).lower())
        object.__setattr__(self, "kind", kind)
        if kind is RegretKind.SINH:
            if self.beta is None or not self.beta > 0 or math.isinf(self.beta):
                raise ValueError(f"sinh regret needs finite beta > 0, got {self.beta}")
            object.__setattr__(self, "beta", float(self.beta))
        else:
            object.__setattr__(self, "beta", None)

    @classmethod
    def linear(cls) -> "RegretSpec":
        return cls(RegretKind.LINEAR, None)

    @classmethod
    def sinh(cls, beta: float) -> "RegretSpec":
        return cls(RegretKind.SINH, beta)

    @property
    def is_linear(self) -> bool:
        return self.kind is RegretKind.LINEAR

    def __call__(self, x):
        return eval_regret(self, x)


def eval_utility(spec: UtilitySpec, x):
    """Evaluate ``u(x)``; accepts scalars or arrays of nonnegative money."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError(f"utility is defined for money x >= 0, got {x}")
    if spec.kind is UtilityKind.LOG:
        out = np.log1p(arr / spec.gamma)
    else:
        out = arr
    return float(out) if out.ndim == 0 else out


def eval_regret(spec: RegretSpec, x):
    """Evaluate ``g(x)`` as a float (``+-inf`` past the double range).

    Use :func:`eval_regret_signed` when the magnitude itself is needed
    beyond that range.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("regret argument must be finite")
    if spec.is_linear:
        out = arr
    else:
        with np.errstate(over="ignore"):
            out = np.sinh(arr / spec.beta)
    return float(out) if out.ndim == 0 else out


def eval_regret_signed(spec: RegretSpec, x: float) -> SignedLog:
    """``g(x)`` as a :class:`SignedLog`, exact in sign for any finite ``x``."""
    x = float(x)
    if x == 0.0:
        return ZERO
    sign = 1 if x > 0 else -1
    if spec.is_linear:
        return SignedLog(sign, math.log(abs(x)))
    y = abs(x) / spec.beta
    if y <= SINH_LINEAR_LIMIT:
        s = math.sinh(y)
        return SignedLog(sign, math.log(s)) if s > 0 else ZERO
    return SignedLog(sign, log_sinh(y))


def _normalize(vec: Sequence[float], name: str) -> tuple[float, ...]:
    arr = np.asarray(vec, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise GameValidationError([f"{name} must be a non-empty vector"])
    if np.any(arr < 0) or np.any(arr > 1 + PROB_TOL) or np.any(np.isnan(arr)):
        raise GameValidationError([f"{name} entries must lie in [0, 1]"])
    total = arr.sum()
    if abs(total - 1.0) > PROB_TOL:
        raise GameValidationError([f"{name} sums to {total!r}, not 1"])
    return tuple(float(v) for v in arr / total)


@dataclass(frozen=True)
class ProposerStrategy:
    """Prior probabilities of each offer; renormalized when off by <= 1e-9."""

    pi: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "pi", _normalize(self.pi, "pi"))

    def __len__(self) -> int:
        return len(self.pi)

    def as_array(self) -> np.ndarray:
        return np.array(self.pi)

    @classmethod
    def point_mass(cls, size: int, index: int) -> "ProposerStrategy":
        pi = [0.0] * size
        pi[index] = 1.0
        return cls(tuple(pi))


@dataclass(frozen=True)
class ResponderStrategy:
    """Acceptance probabilities, nondecreasing, with the last one pinned to 1."""

    p: tuple[float, ...]

    def __post_init__(self):
        arr = np.asarray(self.p, dtype=float)
        problems = []
        if arr.ndim != 1 or arr.size == 0:
            problems.append("p must be a non-empty vector")
        else:
            if np.any(arr < 0) or np.any(arr > 1):
                problems.append("p entries must lie in [0, 1]")
            if np.any(np.diff(arr) < 0):
                problems.append("p must be nondecreasing")
            if arr[-1] != 1.0:
                problems.append("the last acceptance probability must equal 1")
        if problems:
            raise GameValidationError(problems)
        object.__setattr__(self, "p", tuple(float(v) for v in arr))

    def __len__(self) -> int:
        return len(self.p)

    def as_array(self) -> np.ndarray:
        return np.array(self.p)

    @classmethod
    def endpoint(cls, size: int, k: int) -> "ResponderStrategy":
        """Reject the ``k`` greediest offers, accept the rest."""
        if not 1 <= k <= size - 1:
            raise ValueError(f"endpoint index must be in [1, {size - 1}], got {k}")
        return cls(tuple([0.0] * k + [1.0] * (size - k)))

    @classmethod
    def accept_all(cls, size: int) -> "ResponderStrategy":
        return cls(tuple([1.0] * size))


@dataclass(frozen=True)
class GameSpec:
    """One ultimatum instance.

    ``offers`` are the amounts the proposer keeps, greediest first; the
    responder receives ``total - offers[k]``.  Ordering is not enforced on
    construction (see :func:`validate_game`) so degenerate instances can be
    probed directly.
    """

    total: float
    offers: tuple[float, ...]
    regret: RegretSpec = field(default_factory=RegretSpec)
    u_proposer: UtilitySpec = field(default_factory=UtilitySpec.linear)
    u_responder: UtilitySpec = field(default_factory=UtilitySpec.linear)

    def __post_init__(self):
        object.__setattr__(self, "total", float(self.total))
        object.__setattr__(self, "offers", tuple(float(a) for a in self.offers))

    @property
    def n(self) -> int:
        """Index of the last offer (so there are ``n + 1`` offers)."""
        return len(self.offers) - 1

    @property
    def size(self) -> int:
        return len(self.offers)

    @property
    def homogeneous(self) -> bool:
        return self.u_proposer == self.u_responder

    def with_offers(self, offers: Sequence[float]) -> "GameSpec":
        return GameSpec(self.total, tuple(offers), self.regret, self.u_proposer, self.u_responder)

    def with_regret(self, regret: RegretSpec) -> "GameSpec":
        return GameSpec(self.total, self.offers, regret, self.u_proposer, self.u_responder)

    def proposer_utilities(self) -> np.ndarray:
        return np.asarray(eval_utility(self.u_proposer, np.array(self.offers)), dtype=float)

    def responder_utilities(self) -> np.ndarray:
        shares = np.maximum(self.total - np.array(self.offers), 0.0)
        return np.asarray(eval_utility(self.u_responder, shares), dtype=float)

    def to_dict(self) -> dict[str, Any]:
        return {
            "A": self.total,
            "offers": list(self.offers),
            "beta": self.regret.beta,
            "u_proposer": self.u_proposer.to_dict(),
            "u_responder": self.u_responder.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "GameSpec":
        beta = d.get("beta")
        regret = RegretSpec.linear() if beta is None else RegretSpec.sinh(beta)
        return cls(
            total=d["A"],
            offers=tuple(d["offers"]),
            regret=regret,
            u_proposer=UtilitySpec.from_dict(d.get("u_proposer")),
            u_responder=UtilitySpec.from_dict(d.get("u_responder")),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GameSpec":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems

    def __bool__(self) -> bool:
        return self.ok


def validate_game(
    game: GameSpec,
    pi: ProposerStrategy | None = None,
    p: ResponderStrategy | None = None,
) -> ValidationReport:
    """Check ``total > a_0 > ... > a_n > 0`` and strategy lengths; never raises."""
    problems = []
    a = game.offers
    if len(a) < 2:
        problems.append("ordering: at least two offers are required")
    if not math.isfinite(game.total) or game.total <= 0:
        problems.append("positivity: total must be positive")
    if any(not math.isfinite(x) for x in a):
        problems.append("positivity: offers must be finite")
    if a and a[0] >= game.total:
        problems.append(f"ordering: greediest offer {a[0]} must be below total {game.total}")
    if a and a[-1] <= 0:
        problems.append(f"positivity: last offer {a[-1]} must be positive")
    bad = [i for i in range(len(a) - 1) if not a[i] > a[i + 1]]
    if bad:
        problems.append(f"ordering: offers must strictly decrease (violated at index {bad[0]})")
    if pi is not None and len(pi) != len(a):
        problems.append(f"length: pi has {len(pi)} entries for {len(a)} offers")
    if p is not None and len(p) != len(a):
        problems.append(f"length: p has {len(p)} entries for {len(a)} offers")
    return ValidationReport(tuple(problems))


def require_valid(game: GameSpec, pi=None, p=None) -> None:
    report = validate_game(game, pi, p)
    if not report.ok:
        raise GameValidationError(report.problems)
