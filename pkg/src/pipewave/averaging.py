"""Averaging operators on periodic functions of one period.

Three operators act on a periodic function b:

* ``mean``:        <b>   = (1/delta) * integral of b over one period,
* ``fluctuation``: {b}   = b - <b>   (zero-mean part),
* ``bracket``:     [[b]] = zero-mean antiderivative of {b}.

A ``PeriodicFunction`` holds uniform samples over one period and,
optionally, an exact piecewise-polynomial representation.  When the exact
form is present the operators integrate polynomial pieces analytically, so
discontinuous data (piecewise-constant pipe profiles) lose no accuracy;
otherwise the sampled path uses the trapezoid rule / FFT antiderivative,
which is spectrally accurate for smooth periodic data.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as npoly

DEFAULT_SAMPLES = 1024
MIN_SAMPLES = 16
_CONSISTENCY_TOL = 1e-14


class PiecewisePolynomial:
    """Piecewise polynomial on the unit interval [0, 1).

    ``breaks`` is an increasing array with breaks[0] == 0 and
    breaks[-1] == 1; piece j is the polynomial ``coeffs[j]`` (lowest degree
    first, in the global variable y) on [breaks[j], breaks[j+1]).
    """

    __slots__ = ("breaks", "coeffs")

    def __init__(self, breaks, coeffs):
        breaks = np.asarray(breaks, dtype=float)
        if breaks[0] != 0.0 or breaks[-1] != 1.0 or np.any(np.diff(breaks) <= 0):
            raise ValueError("breaks must increase strictly from 0 to 1")
        if len(coeffs) != len(breaks) - 1:
            raise ValueError("need one coefficient array per piece")
        self.breaks = breaks
        self.coeffs = [np.atleast_1d(np.asarray(c, dtype=float)) for c in coeffs]

    @classmethod
    def constant(cls, value):
        return cls([0.0, 1.0], [[float(value)]])

    def evaluate(self, y):
        y = np.asarray(y, dtype=float) % 1.0
        idx = np.clip(np.searchsorted(self.breaks, y, side="right") - 1, 0, len(self.coeffs) - 1)
        out = np.empty_like(y)
        for j, c in enumerate(self.coeffs):
            sel = idx == j
            if np.any(sel):
                out[sel] = npoly.polyval(y[sel], c)
        return out

    def _aligned(self, other):
        breaks = np.union1d(self.breaks, other.breaks)
        return breaks, self._split(breaks), other._split(breaks)

    def _split(self, breaks):
        idx = np.clip(np.searchsorted(self.breaks, breaks[:-1], side="right") - 1, 0, len(self.coeffs) - 1)
        return [self.coeffs[j] for j in idx]

    def __add__(self, other):
        if np.isscalar(other):
            pieces = [c.copy() for c in self.coeffs]
            for c in pieces:
                c[0] += other
            return PiecewisePolynomial(self.breaks, pieces)
        breaks, a, b = self._aligned(other)
        return PiecewisePolynomial(breaks, [npoly.polyadd(p, q) for p, q in zip(a, b)])

    def __sub__(self, other):
        if np.isscalar(other):
            return self + (-other)
        return self + (other * -1.0)

    def __mul__(self, other):
        if np.isscalar(other):
            return PiecewisePolynomial(self.breaks, [c * other for c in self.coeffs])
        breaks, a, b = self._aligned(other)
        return PiecewisePolynomial(breaks, [npoly.polymul(p, q) for p, q in zip(a, b)])

    def power(self, n: int):
        if n < 0:
            if not self.is_piecewise_constant():
                raise ValueError("negative powers stay polynomial only for constant pieces")
            return PiecewisePolynomial(self.breaks, [[c[0] ** n] for c in self.coeffs])
        out = PiecewisePolynomial.constant(1.0)
        for _ in range(n):
            out = out * self
        return out

    def is_piecewise_constant(self):
        return all(c.size == 1 or not np.any(c[1:]) for c in self.coeffs)

    def integral(self) -> float:
        total = 0.0
        for j, c in enumerate(self.coeffs):
            ci = npoly.polyint(c)
            total += npoly.polyval(self.breaks[j + 1], ci) - npoly.polyval(self.breaks[j], ci)
        return float(total)

    def antiderivative(self):
        """Continuous antiderivative A with A(0) = 0 (global variable y)."""
        pieces = []
        acc = 0.0
        for j, c in enumerate(self.coeffs):
            ci = npoly.polyint(c)
            # shift so the piece starts at the accumulated value at breaks[j]
            ci[0] += acc - npoly.polyval(self.breaks[j], ci)
            pieces.append(ci)
            acc = npoly.polyval(self.breaks[j + 1], ci)
        return PiecewisePolynomial(self.breaks, pieces)


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class PeriodicFunction:
    """Uniform samples of a periodic function over one period.

    samples[j] = f(j * period / n).  ``exact``, when present, is the
    piecewise-polynomial representation on the normalized coordinate
    u = y / period; sampled values must then agree with it pointwise.
    """

    __slots__ = ("samples", "period", "exact")

    def __init__(self, samples, period=1.0, exact: PiecewisePolynomial | None = None):
        samples = np.asarray(samples, dtype=float).copy()
        if samples.ndim != 1 or samples.size < MIN_SAMPLES:
            raise ValueError(f"need a 1-D array of at least {MIN_SAMPLES} samples")
        if not _is_power_of_two(samples.size):
            raise ValueError("sample count must be a power of two")
        if period <= 0.0:
            raise ValueError("period must be positive")
        if exact is not None:
            u = np.arange(samples.size) / samples.size
            ref = exact.evaluate(u)
            scale = max(1.0, float(np.max(np.abs(ref))))
            if np.max(np.abs(samples - ref)) > _CONSISTENCY_TOL * scale:
                raise ValueError("samples disagree with the exact representation")
        samples.flags.writeable = False
        self.samples = samples
        self.period = float(period)
        self.exact = exact

    # -- constructors -------------------------------------------------
    @classmethod
    def from_callable(cls, fn, n=DEFAULT_SAMPLES, period=1.0):
        y = np.arange(n) * (period / n)
        return cls(fn(y), period=period)

    @classmethod
    def from_piecewise(cls, exact: PiecewisePolynomial, n=DEFAULT_SAMPLES, period=1.0):
        u = np.arange(n) / n
        return cls(exact.evaluate(u), period=period, exact=exact)

    @property
    def n(self) -> int:
        return self.samples.size

    def _wrap(self, samples, exact):
        return PeriodicFunction(samples, period=self.period, exact=exact)

    # -- the three averaging operators --------------------------------
    def mean(self) -> float:
        if self.exact is not None:
            return self.exact.integral()
        return float(np.mean(self.samples))

    def fluctuation(self) -> "PeriodicFunction":
        m = self.mean()
        exact = None if self.exact is None else self.exact - m
        return self._wrap(self.samples - m, exact)

    def bracket(self) -> "PeriodicFunction":
        m = self.mean()
        if self.exact is not None:
            anti = (self.exact - m).antiderivative()
            unit = anti - anti.integral()
            exact = unit * self.period
            u = np.arange(self.n) / self.n
            return self._wrap(exact.evaluate(u), exact)
        hat = np.fft.rfft(self.samples - m)
        k = np.arange(hat.size)
        hat[1:] = hat[1:] * (self.period / (2j * np.pi * k[1:]))
        hat[0] = 0.0
        return self._wrap(np.fft.irfft(hat, n=self.n), None)

    # -- pointwise algebra ---------------------------------------------
    def _check_compatible(self, other):
        if self.n != other.n or self.period != other.period:
            raise ValueError("operands must share sample count and period")

    def __add__(self, other):
        if np.isscalar(other):
            exact = None if self.exact is None else self.exact + other
            return self._wrap(self.samples + other, exact)
        self._check_compatible(other)
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = self.exact + other.exact
        return self._wrap(self.samples + other.samples, exact)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self + (other * -1.0)

    def __rsub__(self, other):
        return (self * -1.0) + other

    def __mul__(self, other):
        if np.isscalar(other):
            exact = None if self.exact is None else self.exact * other
            return self._wrap(self.samples * other, exact)
        self._check_compatible(other)
        exact = None
        if self.exact is not None and other.exact is not None:
            exact = self.exact * other.exact
        return self._wrap(self.samples * other.samples, exact)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if np.isscalar(other):
            return self * (1.0 / other)
        return self * other.reciprocal()

    def __pow__(self, n: int):
        if n == 0:
            return self._wrap(np.ones(self.n), PiecewisePolynomial.constant(1.0))
        if n < 0:
            return self.reciprocal() ** (-n) if n != -1 else self.reciprocal()
        exact = None if self.exact is None else self.exact.power(n)
        return self._wrap(self.samples**n, exact)

    def reciprocal(self) -> "PeriodicFunction":
        amax = float(np.max(np.abs(self.samples)))
        if float(np.min(np.abs(self.samples))) <= 1e-12 * amax:
            raise ZeroDivisionError("denominator not bounded away from zero")
        exact = None
        if self.exact is not None and self.exact.is_piecewise_constant():
            exact = self.exact.power(-1)
        return self._wrap(1.0 / self.samples, exact)


# -- module-level operator spellings ----------------------------------
def mean(f: PeriodicFunction) -> float:
    """Period mean <f>."""
    return f.mean()


def fluctuation(f: PeriodicFunction) -> PeriodicFunction:
    """Zero-mean part {f} = f - <f>."""
    return f.fluctuation()


def bracket(f: PeriodicFunction) -> PeriodicFunction:
    """Zero-mean antiderivative [[f]] of the fluctuation of f."""
    return f.bracket()


_OPS = {
    "+": lambda f, g: f + g,
    "-": lambda f, g: f - g,
    "*": lambda f, g: f * g,
    "/": lambda f, g: f / g,
    "power": lambda f, n: f ** int(n),
}


def pointwise(f: PeriodicFunction, g, op: str) -> PeriodicFunction:
    """Combine two periodic functions pointwise; op in {+, -, *, /, power}.

    Exactness is preserved whenever the result stays piecewise-polynomial
    (for '/' and negative powers: piecewise-constant denominators only).
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}; expected one of {sorted(_OPS)}") from None
    return fn(f, g)
