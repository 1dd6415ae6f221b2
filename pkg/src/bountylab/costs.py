"""Search-cost distributions.

Every solver in the package consumes costs through this interface: the CDF F,
the density f, the ratio F/f (which must be non-decreasing for the designer's
first-order condition to have a unique fixed point), the quantile function,
and seeded sampling for Monte Carlo runs.

Three families are supported:

* ``uniform`` on [c_low, c_high]
* ``power``:  F(c) = ((c - c_low) / (c_high - c_low))**alpha, alpha > 0
* ``exponential``: rate ``rate`` shifted to start at c_low (c_high = +inf)

The power family with alpha = 1 is the uniform. All three have non-decreasing
F/f, which is re-checked numerically on a grid at construction time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

UNIFORM = "uniform"
POWER = "power"
EXPONENTIAL = "exponential"

_FAMILIES = (UNIFORM, POWER, EXPONENTIAL)

# Quantile level used as a finite stand-in for an infinite upper endpoint.
_EFFECTIVE_TAIL = 1e-12
_HAZARD_GRID = 1024


def _as_scalar_or_array(x: np.ndarray, scalar: bool):
    return float(x) if scalar else x


@dataclass(frozen=True)
class CostDistribution:
    """Immutable cost law; safe for concurrent reads.

    ``alpha`` is only meaningful for the power family and ``rate`` only for
    the exponential family; both default to 1.0 and are ignored elsewhere.
    """

    kind: str
    c_low: float
    c_high: float
    alpha: float = 1.0
    rate: float = 1.0

    def __post_init__(self) -> None:
        self.validate()

    # -- constructors ------------------------------------------------------

    @classmethod
    def uniform(cls, c_low: float, c_high: float) -> "CostDistribution":
        return cls(UNIFORM, float(c_low), float(c_high))

    @classmethod
    def power(cls, c_low: float, c_high: float, alpha: float) -> "CostDistribution":
        return cls(POWER, float(c_low), float(c_high), alpha=float(alpha))

    @classmethod
    def exponential(cls, c_low: float, rate: float) -> "CostDistribution":
        return cls(EXPONENTIAL, float(c_low), math.inf, rate=float(rate))

    # -- validation --------------------------------------------------------

    def validate(self) -> None:
        """Reject parameterizations outside the supported families."""
        if self.kind not in _FAMILIES:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        if not math.isfinite(self.c_low):
            raise ValueError("c_low must be finite")
        if not self.c_high > self.c_low:
            raise ValueError("c_low < c_high required")
        if not self.c_high > 0:
            raise ValueError("c_high > 0 required")
        if self.kind in (UNIFORM, POWER) and not math.isfinite(self.c_high):
            raise ValueError(f"{self.kind} distribution needs a finite c_high")
        if self.kind == EXPONENTIAL and math.isfinite(self.c_high):
            raise ValueError("exponential distribution has c_high = +inf")
        if self.kind == POWER and not self.alpha > 0:
            raise ValueError("power distribution needs alpha > 0")
        if self.kind == EXPONENTIAL and not self.rate > 0:
            raise ValueError("exponential distribution needs rate > 0")
        self._check_hazard_monotone()

    def _check_hazard_monotone(self) -> None:
        # Numerical enforcement of the standing assumption that F/f is
        # non-decreasing; the closed forms below satisfy it analytically.
        lo, hi = self.c_low, self.upper_bound()
        grid = np.linspace(lo, hi, _HAZARD_GRID)
        h = self.hazard_ratio(grid)
        if np.any(np.diff(h) < -1e-12 * max(1.0, float(np.max(np.abs(h))))):
            raise ValueError("F/f is not non-decreasing on the support grid")

    # -- support -----------------------------------------------------------

    def upper_bound(self) -> float:
        """Finite upper endpoint; the 1 - 1e-12 quantile if c_high is infinite."""
        if math.isfinite(self.c_high):
            return self.c_high
        return float(self.quantile(1.0 - _EFFECTIVE_TAIL))

    # -- distribution functions --------------------------------------------

    def cdf(self, c):
        """F(c); clamps to 0 below c_low and to 1 above c_high."""
        arr = np.asarray(c, dtype=float)
        scalar = arr.ndim == 0
        x = np.atleast_1d(arr)
        span = self.c_high - self.c_low
        if self.kind == UNIFORM:
            out = (x - self.c_low) / span
        elif self.kind == POWER:
            t = np.clip((x - self.c_low) / span, 0.0, 1.0)
            out = t**self.alpha
        else:
            out = -np.expm1(-self.rate * np.maximum(x - self.c_low, 0.0))
        out = np.clip(out, 0.0, 1.0)
        return _as_scalar_or_array(out[0] if scalar else out, scalar)

    def pdf(self, c):
        """f(c); zero outside the support."""
        arr = np.asarray(c, dtype=float)
        scalar = arr.ndim == 0
        x = np.atleast_1d(arr)
        inside = (x >= self.c_low) & (x <= self.c_high)
        span = self.c_high - self.c_low
        if self.kind == UNIFORM:
            out = np.where(inside, 1.0 / span, 0.0)
        elif self.kind == POWER:
            t = np.clip((x - self.c_low) / span, 0.0, 1.0)
            with np.errstate(divide="ignore"):
                out = np.where(inside, self.alpha / span * t ** (self.alpha - 1.0), 0.0)
        else:
            out = np.where(inside, self.rate * np.exp(-self.rate * np.maximum(x - self.c_low, 0.0)), 0.0)
        return _as_scalar_or_array(out[0] if scalar else out, scalar)

    def hazard_ratio(self, c):
        """F(c)/f(c) in closed form; returns the limit 0 at and below c_low.

        uniform:      c - c_low
        power:        (c - c_low) / alpha
        exponential:  (exp(rate (c - c_low)) - 1) / rate
        """
        arr = np.asarray(c, dtype=float)
        scalar = arr.ndim == 0
        x = np.atleast_1d(arr)
        if math.isfinite(self.c_high):
            x = np.minimum(x, self.c_high)
        d = np.maximum(x - self.c_low, 0.0)
        if self.kind == UNIFORM:
            out = d
        elif self.kind == POWER:
            out = d / self.alpha
        else:
            out = np.expm1(self.rate * d) / self.rate
        return _as_scalar_or_array(out[0] if scalar else out, scalar)

    def quantile(self, u):
        """Inverse CDF; rejects u outside [0, 1]."""
        arr = np.asarray(u, dtype=float)
        scalar = arr.ndim == 0
        x = np.atleast_1d(arr)
        if np.any((x < 0.0) | (x > 1.0)) or np.any(np.isnan(x)):
            raise ValueError("quantile level must lie in [0, 1]")
        span = self.c_high - self.c_low
        if self.kind == UNIFORM:
            out = self.c_low + x * span
        elif self.kind == POWER:
            out = self.c_low + span * x ** (1.0 / self.alpha)
        else:
            with np.errstate(divide="ignore"):
                out = self.c_low - np.log1p(-x) / self.rate
        return _as_scalar_or_array(out[0] if scalar else out, scalar)

    def sample(self, seed: int, count: int) -> np.ndarray:
        """``count`` iid draws; a pure function of (seed, count)."""
        if count < 0:
            raise ValueError("count must be >= 0")
        rng = np.random.default_rng(seed)
        return np.asarray(self.quantile(rng.random(count)))

    # -- config-file form ---------------------------------------------------

    def to_json(self) -> dict:
        obj: dict = {"kind": self.kind, "c_low": self.c_low}
        obj["c_high"] = self.c_high if math.isfinite(self.c_high) else None
        if self.kind == POWER:
            obj["alpha"] = self.alpha
        if self.kind == EXPONENTIAL:
            obj["rate"] = self.rate
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "CostDistribution":
        kind = obj.get("kind")
        if kind == UNIFORM:
            return cls.uniform(obj["c_low"], obj["c_high"])
        if kind == POWER:
            return cls.power(obj["c_low"], obj["c_high"], obj.get("alpha", 1.0))
        if kind == EXPONENTIAL:
            if obj.get("c_high") is not None:
                raise ValueError("exponential distribution takes c_high = null")
            return cls.exponential(obj["c_low"], obj.get("rate", 1.0))
        raise ValueError(f"unknown distribution kind {kind!r}")
