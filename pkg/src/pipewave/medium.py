"""Gas pressure law and periodic cross-section profiles.

The gas is isentropic with pressure P(rho) = kappa * rho**gamma.  The pipe
cross-section a(x) > 0 is periodic with period ``delta`` and comes in three
flavors: piecewise-constant, sinusoidal, and sampled (piecewise-linear
interpolation of uniform samples).  Profiles know how to evaluate
themselves pointwise, integrate exactly over arbitrary intervals (needed
for cell-averaged capacities on finite-volume grids), and report the
moments <a>, <1/a>, <1/a^2>, <1/a^3> over one period.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GAMMA_LO = 1.0
GAMMA_HI = 5.0 / 3.0


class VacuumError(ValueError):
    """Non-positive density: the pressure law left its domain."""


@dataclass(frozen=True)
class GasModel:
    """Isentropic pressure law P(rho) = kappa * rho**gamma.

    gamma is restricted to (1, 5/3) unless ``allow_any_gamma`` is set.
    """

    kappa: float = 1.0
    gamma: float = 1.4
    allow_any_gamma: bool = False

    def __post_init__(self):
        if not self.kappa > 0.0:
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if not self.allow_any_gamma and not (GAMMA_LO < self.gamma < GAMMA_HI):
            raise ValueError(
                f"gamma={self.gamma} outside (1, 5/3); pass allow_any_gamma=True to override"
            )

    def pressure(self, rho):
        """Return (P, P', P'') at the given density (scalar or array).

        Raises VacuumError for any non-positive density.
        """
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0.0):
            raise VacuumError("non-positive density: vacuum state reached")
        p = self.kappa * rho**self.gamma
        dp = self.kappa * self.gamma * rho ** (self.gamma - 1.0)
        d2p = self.kappa * self.gamma * (self.gamma - 1.0) * rho ** (self.gamma - 2.0)
        if rho.ndim == 0:
            return float(p), float(dp), float(d2p)
        return p, dp, d2p

    def sound_speed(self, rho):
        """sqrt(P'(rho))."""
        _, dp, _ = self.pressure(rho)
        return np.sqrt(dp)


class CrossSectionProfile:
    """Base class for delta-periodic strictly positive area functions."""

    period: float

    def _reduce(self, x):
        # map to [0, period) with float64 arithmetic
        return np.asarray(x, dtype=float) % self.period

    def __call__(self, x):
        return self.area(x)

    def area(self, x):
        raise NotImplementedError

    def antiderivative(self, x):
        """F(x) = integral of a from 0 to x, exact, vectorized."""
        raise NotImplementedError

    def cell_average(self, x_lo, x_hi):
        """(1/(x_hi-x_lo)) * integral of a over [x_lo, x_hi].

        Exact for the analytic kinds; for sampled profiles it is the exact
        integral of the piecewise-linear interpolant (trapezoid rule).
        """
        x_lo = np.asarray(x_lo, dtype=float)
        x_hi = np.asarray(x_hi, dtype=float)
        if np.any(x_hi <= x_lo):
            raise ValueError("degenerate interval: x_hi must exceed x_lo")
        out = (self.antiderivative(x_hi) - self.antiderivative(x_lo)) / (x_hi - x_lo)
        return float(out) if out.ndim == 0 else out

    def moment(self, p: int) -> float:
        """Period mean of a**p for p in {1, -1, -2, -3}."""
        raise NotImplementedError

    def unit_samples(self, n: int):
        """Samples of a(y*delta) at y_j = j/n, j = 0..n-1."""
        y = np.arange(n) / n
        return self.area(y * self.period)

    @property
    def profile_id(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class PiecewiseConstantProfile(CrossSectionProfile):
    """Left-closed piecewise-constant profile: value[j] on [break[j], break[j+1]).

    ``breakpoints`` are the left edges of the sub-intervals; they must be
    strictly increasing, start at 0, and stay below ``period``.
    """

    values: tuple
    breakpoints: tuple
    period: float = 1.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        brks = np.asarray(self.breakpoints, dtype=float)
        object.__setattr__(self, "values", tuple(vals))
        object.__setattr__(self, "breakpoints", tuple(brks))
        if self.period <= 0.0:
            raise ValueError("period must be positive")
        if vals.size != brks.size or vals.size == 0:
            raise ValueError("values and breakpoints must have equal nonzero length")
        if brks[0] != 0.0 or np.any(np.diff(brks) <= 0.0) or brks[-1] >= self.period:
            raise ValueError("breakpoints must be strictly increasing and cover [0, period)")
        if np.any(vals <= 0.0):
            raise ValueError("cross-section values must be strictly positive")

    def _edges(self):
        return np.concatenate([np.asarray(self.breakpoints), [self.period]])

    def area(self, x):
        xr = self._reduce(x)
        idx = np.searchsorted(np.asarray(self.breakpoints), xr, side="right") - 1
        out = np.asarray(self.values)[idx]
        return float(out) if out.ndim == 0 else out

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        edges = self._edges()
        vals = np.asarray(self.values)
        widths = np.diff(edges)
        cum = np.concatenate([[0.0], np.cumsum(vals * widths)])
        per_int = cum[-1]
        n_per = np.floor(x / self.period)
        xr = x - n_per * self.period
        idx = np.searchsorted(np.asarray(self.breakpoints), xr, side="right") - 1
        partial = cum[idx] + vals[idx] * (xr - edges[idx])
        return n_per * per_int + partial

    def moment(self, p: int) -> float:
        vals = np.asarray(self.values)
        widths = np.diff(self._edges())
        return float(np.sum(vals**p * widths) / self.period)

    @property
    def profile_id(self) -> str:
        vals = ",".join(repr(v) for v in self.values)
        return f"piecewise[{vals}]/{self.period!r}"


@dataclass(frozen=True)
class SinusoidalProfile(CrossSectionProfile):
    """a(x) = mean + amplitude * sin(2*pi*x/period), |amplitude| < mean."""

    mean: float
    amplitude: float
    period: float = 1.0

    def __post_init__(self):
        if self.period <= 0.0:
            raise ValueError("period must be positive")
        if not abs(self.amplitude) < self.mean:
            raise ValueError("need |amplitude| < mean for a strictly positive area")

    def area(self, x):
        x = np.asarray(x, dtype=float)
        out = self.mean + self.amplitude * np.sin(2.0 * np.pi * x / self.period)
        return float(out) if out.ndim == 0 else out

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        w = 2.0 * np.pi / self.period
        return self.mean * x - (self.amplitude / w) * (np.cos(w * x) - 1.0)

    def moment(self, p: int) -> float:
        # closed forms for the mean of (m + A sin)^p over one period
        m, A = self.mean, self.amplitude
        d = m * m - A * A
        if p == 1:
            return m
        if p == -1:
            return 1.0 / np.sqrt(d)
        if p == -2:
            return m / d**1.5
        if p == -3:
            return (2.0 * m * m + A * A) / (2.0 * d**2.5)
        raise ValueError(f"unsupported moment {p}")

    @property
    def profile_id(self) -> str:
        return f"sinusoid[{self.mean!r}+{self.amplitude!r}sin]/{self.period!r}"


@dataclass(frozen=True)
class SampledProfile(CrossSectionProfile):
    """Uniform samples over one period, interpolated piecewise-linearly.

    samples[j] = a(j*period/n); the segment from the last sample wraps back
    to the first.  Integrals are exact for the interpolant, which is the
    trapezoid rule on the sample grid.
    """

    samples: tuple
    period: float = 1.0

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float)
        object.__setattr__(self, "samples", tuple(s))
        if self.period <= 0.0:
            raise ValueError("period must be positive")
        if s.size < 2:
            raise ValueError("need at least 2 samples")
        if np.any(s <= 0.0):
            raise ValueError("cross-section samples must be strictly positive")

    def _nodes(self):
        s = np.asarray(self.samples)
        n = s.size
        x = np.arange(n + 1) * (self.period / n)
        v = np.concatenate([s, [s[0]]])
        return x, v

    def area(self, x):
        xr = self._reduce(x)
        xs, vs = self._nodes()
        out = np.interp(xr, xs, vs)
        return float(out) if out.ndim == 0 else out

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        xs, vs = self._nodes()
        seg = 0.5 * (vs[:-1] + vs[1:]) * np.diff(xs)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        per_int = cum[-1]
        n_per = np.floor(x / self.period)
        xr = x - n_per * self.period
        idx = np.clip(np.searchsorted(xs, xr, side="right") - 1, 0, len(seg) - 1)
        x0 = xs[idx]
        v0 = vs[idx]
        slope = (vs[idx + 1] - vs[idx]) / (xs[idx + 1] - xs[idx])
        dx = xr - x0
        partial = cum[idx] + v0 * dx + 0.5 * slope * dx * dx
        return n_per * per_int + partial

    def moment(self, p: int) -> float:
        s = np.asarray(self.samples)
        return float(np.mean(s**p))

    @property
    def profile_id(self) -> str:
        return f"sampled[n={len(self.samples)}]/{self.period!r}"


def constant_profile(value: float, period: float = 1.0) -> PiecewiseConstantProfile:
    """Uniform pipe a(x) = value (degenerate single-piece profile)."""
    return PiecewiseConstantProfile(values=(value,), breakpoints=(0.0,), period=period)
