"""Signed log-magnitude reals for regret values that overflow float64.

``sinh(x / beta)`` exceeds the double range once ``|x| / beta`` passes ~710,
yet the solvers only consume signs and ratios of regret sums.  Values are
carried as ``(sign, log|value|)`` and summed in the log domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

# Above this argument sinh is evaluated through its logarithm.
SINH_LINEAR_LIMIT = 700.0


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as ``sign * exp(log_abs)``."""

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0 and self.log_abs != -math.inf:
            object.__setattr__(self, "log_abs", -math.inf)

    @classmethod
    def from_float(cls, x: float) -> "SignedLog":
        if math.isnan(x):
            raise ValueError("cannot represent NaN")
        if x == 0.0:
            return ZERO
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_scaled(cls, value: float, log_scale: float) -> "SignedLog":
        """Build from ``value * exp(log_scale)`` without forming the product."""
        s = cls.from_float(float(value))
        if s.sign == 0:
            return s
        return cls(s.sign, s.log_abs + log_scale)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.log_abs > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_abs)

    def __neg__(self) -> "SignedLog":
        return SignedLog(-self.sign, self.log_abs)

    def __add__(self, other) -> "SignedLog":
        return signed_sum([self, _coerce(other)])

    __radd__ = __add__

    def __sub__(self, other) -> "SignedLog":
        return signed_sum([self, -_coerce(other)])

    def __rsub__(self, other) -> "SignedLog":
        return signed_sum([_coerce(other), -self])

    def _key(self) -> tuple[int, float]:
        # Monotone ordering key: positives by magnitude, negatives reversed.
        return (self.sign, self.sign * self.log_abs if self.sign else 0.0)

    def __lt__(self, other) -> bool:
        return self._key() < _coerce(other)._key()

    def __le__(self, other) -> bool:
        return self._key() <= _coerce(other)._key()

    def __gt__(self, other) -> bool:
        return self._key() > _coerce(other)._key()

    def __ge__(self, other) -> bool:
        return self._key() >= _coerce(other)._key()

    def __eq__(self, other) -> bool:
        try:
            return self._key() == _coerce(other)._key()
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self) -> int:
        return hash(self._key())


ZERO = SignedLog(0, -math.inf)


def _coerce(x) -> SignedLog:
    if isinstance(x, SignedLog):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return SignedLog.from_float(float(x))
    raise TypeError(f"cannot compare SignedLog with {type(x).__name__}")


def signed_sum(values: Iterable[SignedLog]) -> SignedLog:
    """Sum signed log-magnitude values without leaving the log domain."""
    pos, neg = [], []
    for v in values:
        if v.sign > 0:
            pos.append(v.log_abs)
        elif v.sign < 0:
            neg.append(v.log_abs)
    lp = float(np.logaddexp.reduce(pos)) if pos else -math.inf
    ln = float(np.logaddexp.reduce(neg)) if neg else -math.inf
    if lp == ln:
        return ZERO
    if lp > ln:
        return SignedLog(1, lp + math.log1p(-math.exp(ln - lp)))
    return SignedLog(-1, ln + math.log1p(-math.exp(lp - ln)))


def log_sinh(y):
    """``log(sinh(y))`` for ``y >= 0``; ``-inf`` at zero.  Works on arrays."""
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore"):
        small = np.log(np.sinh(np.minimum(y, 20.0)))
        large = y - math.log(2.0) + np.log1p(-np.exp(-2.0 * y))
    out = np.where(y < 20.0, small, large)
    return out if out.ndim else float(out)


def scaled_sinh(y, log_scale: float):
    """``sinh(y) * exp(-log_scale)`` computed without overflow."""
    y = np.asarray(y, dtype=float)
    if log_scale == 0.0:
        return np.sinh(y)
    with np.errstate(divide="ignore", under="ignore"):
        return np.sign(y) * np.exp(log_sinh(np.abs(y)) - log_scale)
