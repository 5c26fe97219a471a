"""Effective-medium coefficients for the periodically-varying pipe.

The effective evolution system for the period-averaged density deviation
and flux carries fifteen bracket coefficients C1..C15 built from the pipe
shape a(y) on the unit period, plus derived alpha/beta coefficient lists
(including the mixed-derivative variants alpha5b, beta11b used by the
stable dispersive formulation).

Every a_y-bearing bracket is evaluated through integration-by-parts
rewrites; the key identity is

    [[a^-3 a_y]] = -(1/2) {a^-2},

which follows from [[b_y]] = {b} for periodic b.  This keeps discontinuous
(piecewise-constant) profiles exact: no derivative of a is ever sampled.
A separate quadrature route evaluates the raw nested-bracket forms with a
spectral derivative a_y for smooth profiles, as an independent
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .averaging import DEFAULT_SAMPLES, PeriodicFunction, PiecewisePolynomial, mean
from .medium import (
    CrossSectionProfile,
    GasModel,
    PiecewiseConstantProfile,
    SampledProfile,
)

C_NAMES = tuple(f"c{i}" for i in range(1, 16))
ALPHA_NAMES = ("alpha1", "alpha2", "alpha3", "alpha4", "alpha5", "alpha5b",
               "alpha6", "alpha7", "alpha8")
BETA_NAMES = ("beta1", "beta2", "beta3", "beta4", "beta5", "beta6", "beta7",
              "beta8", "beta9", "beta10", "beta11", "beta11b")


def unit_function(profile: CrossSectionProfile, n: int = DEFAULT_SAMPLES) -> PeriodicFunction:
    """The pipe shape as a function of the fast variable y in [0, 1).

    Piecewise-constant and sampled profiles carry their exact piecewise
    representation; smooth analytic profiles are sampled (the trapezoid /
    FFT path is spectrally accurate for them).
    """
    samples = profile.unit_samples(n)
    exact = None
    if isinstance(profile, PiecewiseConstantProfile):
        breaks = np.concatenate([np.asarray(profile.breakpoints) / profile.period, [1.0]])
        exact = PiecewisePolynomial(breaks, [[v] for v in profile.values])
    elif isinstance(profile, SampledProfile):
        m = len(profile.samples)
        nodes = np.arange(m + 1) / m
        vals = np.concatenate([np.asarray(profile.samples), [profile.samples[0]]])
        pieces = []
        for j in range(m):
            slope = (vals[j + 1] - vals[j]) / (nodes[j + 1] - nodes[j])
            pieces.append([vals[j] - slope * nodes[j], slope])
        exact = PiecewisePolynomial(nodes, pieces)
    return PeriodicFunction(samples, period=1.0, exact=exact)


def mean_area_pair(profile: CrossSectionProfile):
    """The four shape moments (<a>, <1/a>, <1/a^2>, <1/a^3>)."""
    return (profile.moment(1), profile.moment(-1), profile.moment(-2), profile.moment(-3))


@dataclass(frozen=True)
class BracketCoefficients:
    """The C1..C15 table for one profile and background density."""

    c1: float
    c2: float
    c3: float
    c4: float
    c5: float
    c6: float
    c7: float
    c8: float
    c9: float
    c10: float
    c11: float
    c12: float
    c13: float
    c14: float
    c15: float
    rho0: float
    profile_id: str
    mean_a: float
    mean_ainv: float
    mean_ainv2: float
    mean_ainv3: float

    def as_dict(self):
        return {name: getattr(self, name) for name in C_NAMES}


def bracket_coefficients(profile: CrossSectionProfile, rho0: float,
                         n: int = DEFAULT_SAMPLES) -> BracketCoefficients:
    """Evaluate C1..C15 through the a_y-free forms.

    Exact for piecewise-constant profiles (piecewise-polynomial
    integration); spectrally accurate for smooth ones.
    """
    if rho0 <= 0.0:
        raise ValueError("rho0 must be positive")
    a = unit_function(profile, n)
    if np.any(a.samples <= 0.0):
        raise ValueError("profile must be strictly positive")
    ai = a.reciprocal()
    ai2 = ai * ai
    br_a = a.bracket()
    br_ai = ai.bracket()
    fl_a = a.fluctuation()
    # s := [[a^-3 a_y]] = -(1/2){a^-2}
    s = ai2.fluctuation() * (-0.5)

    m_a, m_i1, m_i2, m_i3 = mean_area_pair(profile)
    r2 = rho0 * rho0

    c1 = mean(ai * br_a)
    c2 = mean(ai * br_a.bracket())
    c3 = -(m_i1 - m_a * m_i2) / (2.0 * r2)
    c4 = -mean(a * ai2.bracket()) / (2.0 * rho0)
    c5 = -(m_i3 - m_i1 * m_i2) / (2.0 * r2)
    c6 = -(m_i3 + m_a * m_i2**2 - 2.0 * m_i1 * m_i2) / (4.0 * r2)
    c7 = m_i2 * c1 / (2.0 * rho0)
    c8 = -mean(ai2 * br_a * fl_a) / rho0
    c9 = -mean(ai * br_a * br_a)
    c10 = m_i1 / r2
    c11 = -mean(a * br_ai * br_ai)
    c12 = m_i3 / r2
    c13 = mean(a * s) / rho0
    c14 = m_i1 / rho0
    c15 = mean(a * br_ai) / rho0

    return BracketCoefficients(
        c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6, c7=c7, c8=c8, c9=c9,
        c10=c10, c11=c11, c12=c12, c13=c13, c14=c14, c15=c15,
        rho0=rho0, profile_id=profile.profile_id,
        mean_a=m_a, mean_ainv=m_i1, mean_ainv2=m_i2, mean_ainv3=m_i3,
    )


def bracket_coefficients_quadrature(profile: CrossSectionProfile, rho0: float,
                                    n: int = DEFAULT_SAMPLES) -> BracketCoefficients:
    """Evaluate C1..C15 from the raw nested-bracket forms.

    a_y is computed spectrally, so this route is meaningful for smooth
    profiles only; it exists as an independent cross-check of
    ``bracket_coefficients``.
    """
    if rho0 <= 0.0:
        raise ValueError("rho0 must be positive")
    a = unit_function(profile, n)
    a = PeriodicFunction(a.samples, period=1.0)  # drop exactness: pure quadrature
    ai = a.reciprocal()
    ay = _spectral_derivative(a)
    g = ai * ai * ai * ay  # a^-3 a_y
    br_a = a.bracket()
    br_ai = ai.bracket()
    r2 = rho0 * rho0

    c1 = mean(ai * br_a)
    c2 = mean(ai * br_a.bracket())
    c3 = mean(a * g.bracket()) / r2
    c4 = mean(g * br_a.bracket()) / rho0
    c5 = mean(ai * g.bracket()) / r2
    c6 = mean(g * (a * g.bracket()).bracket()) / r2
    c7 = mean(g * (a * br_ai).bracket()) / rho0
    c8 = mean(a * (g * br_a).bracket()) / rho0
    c9 = mean(a * (ai * br_a).bracket())
    c10 = mean(ai) / r2
    c11 = mean(ai * (a * br_ai).bracket())
    c12 = mean(ai * ai * ai) / r2
    c13 = mean(a * g.bracket()) / rho0
    c14 = mean(ai) / rho0
    c15 = mean(a * br_ai) / rho0

    return BracketCoefficients(
        c1=c1, c2=c2, c3=c3, c4=c4, c5=c5, c6=c6, c7=c7, c8=c8, c9=c9,
        c10=c10, c11=c11, c12=c12, c13=c13, c14=c14, c15=c15,
        rho0=rho0, profile_id=profile.profile_id + "|quadrature",
        mean_a=mean(a), mean_ainv=mean(ai), mean_ainv2=mean(ai * ai),
        mean_ainv3=mean(ai * ai * ai),
    )


def coefficient_identity_forms(profile: CrossSectionProfile, rho0: float,
                               n: int = DEFAULT_SAMPLES,
                               include_ay_forms: bool = True) -> dict:
    """Independent evaluations of every multi-form coefficient.

    Returns a dict name -> list of values that must all agree.  Forms
    carrying an explicit a_y use a spectral derivative and are only
    included when ``include_ay_forms`` is set (smooth profiles).
    """
    a = unit_function(profile, n)
    ai = a.reciprocal()
    ai2 = ai * ai
    br_a = a.bracket()
    br_ai = ai.bracket()
    fl_a = a.fluctuation()
    s = ai2.fluctuation() * (-0.5)
    m_a, m_i1, m_i2, m_i3 = mean_area_pair(profile)
    r2 = rho0 * rho0
    c1_primary = mean(ai * br_a)

    forms = {
        "c1": [c1_primary, -mean(a * br_ai)],
        "c2": [mean(ai * br_a.bracket()), mean(a * br_ai.bracket())],
        "c3": [mean(a * s) / r2,
               -0.5 * mean(ai2 * fl_a) / r2,
               -(m_i1 - m_a * m_i2) / (2.0 * r2)],
        "c4": [0.5 * mean(ai2 * br_a) / rho0,
               mean(a * s.bracket()) / rho0,
               -mean(a * ai2.bracket()) / (2.0 * rho0)],
        "c5": [mean(ai * s) / r2,
               -0.5 * mean(ai2 * ai.fluctuation()) / r2,
               -(m_i3 - m_i1 * m_i2) / (2.0 * r2)],
        "c6": [0.5 * mean(ai2 * (a * s).fluctuation()) / r2,
               -(m_i3 + m_a * m_i2**2 - 2.0 * m_i1 * m_i2) / (4.0 * r2)],
        "c7": [0.5 * mean(ai2 * (a * br_ai).fluctuation()) / rho0,
               mean(ai * (a * s).bracket()) / rho0,
               m_i2 * c1_primary / (2.0 * rho0)],
        "c9": [mean(a * (ai * br_a).bracket()), -mean(ai * br_a * br_a)],
        "c11": [mean(ai * (a * br_ai).bracket()), -mean(a * br_ai * br_ai)],
        "c13": [mean(a * s) / rho0, -0.5 * mean(ai2 * fl_a) / rho0],
        "c15": [mean(a * br_ai) / rho0, -mean(ai * br_a) / rho0],
    }
    # c8 via two a_y-free routes; the second uses the product rule
    # a^-3 a_y [[a]] = -(1/2)[(a^-2 [[a]])_y - a^-2 {a}], so
    # [[a^-3 a_y [[a]]]] = -(1/2)({a^-2 [[a]]} - [[a^-2 {a}]]).
    inner = ((ai2 * br_a).fluctuation() - (ai2 * fl_a).bracket()) * (-0.5)
    forms["c8"] = [-mean(ai2 * br_a * fl_a) / rho0, mean(a * inner) / rho0]

    if include_ay_forms:
        a_q = PeriodicFunction(a.samples, period=1.0)
        ai_q = a_q.reciprocal()
        ay = _spectral_derivative(a_q)
        g = ai_q * ai_q * ai_q * ay
        br_a_q = a_q.bracket()
        br_ai_q = ai_q.bracket()
        forms["c3"].append(-mean(g * br_a_q) / r2)
        forms["c3"].append(mean(a_q * g.bracket()) / r2)
        forms["c4"].append(mean(g * br_a_q.bracket()) / rho0)
        forms["c5"].append(-mean(g * br_ai_q) / r2)
        forms["c6"].append(mean(g * (a_q * g.bracket()).bracket()) / r2)
        forms["c7"].append(mean(g * (a_q * br_ai_q).bracket()) / rho0)
        forms["c8"].append(-mean(g * br_a_q * br_a_q) / rho0)
        forms["c13"].append(-mean(g * br_a_q) / rho0)
    return forms


def _spectral_derivative(f: PeriodicFunction) -> PeriodicFunction:
    hat = np.fft.rfft(f.samples)
    k = 2j * np.pi * np.arange(hat.size) / f.period
    if f.n % 2 == 0:
        k[-1] = 0.0  # drop the unmatched Nyquist mode of d/dy
    return PeriodicFunction(np.fft.irfft(hat * k, n=f.n), period=f.period)


@dataclass(frozen=True)
class HomogCoefficients:
    """alpha/beta coefficients of the effective evolution system."""

    alpha1: float
    alpha2: float
    alpha3: float
    alpha4: float
    alpha5: float
    alpha5b: float
    alpha6: float
    alpha7: float
    alpha8: float
    beta1: float
    beta2: float
    beta3: float
    beta4: float
    beta5: float
    beta6: float
    beta7: float
    beta8: float
    beta9: float
    beta10: float
    beta11: float
    beta11b: float
    delta: float
    rho0: float
    gas: GasModel
    mean_a: float
    mean_ainv: float
    profile_id: str

    def as_dict(self):
        return {name: getattr(self, name) for name in ALPHA_NAMES + BETA_NAMES}

    def sound_speed(self) -> float:
        """Long-wave phase speed of the mixed-derivative dispersion relation."""
        return float(np.sqrt(self.alpha1 * (self.beta1 + self.beta3 * self.rho0)))

    def leading_sound_speed(self) -> float:
        """Long-wave speed without the first-order pressure-curvature term."""
        return float(np.sqrt(self.alpha1 * self.beta1))


def homog_coefficients(C: BracketCoefficients, gas: GasModel, rho0: float,
                       delta: float = 1.0) -> HomogCoefficients:
    """Assemble the alpha/beta lists from the bracket-coefficient table."""
    if rho0 != C.rho0:
        raise ValueError("rho0 does not match the bracket-coefficient table")
    if delta <= 0.0:
        raise ValueError("delta must be positive")
    _, dP, d2P = gas.pressure(rho0)
    ma, mi = C.mean_a, C.mean_ainv
    d1, d2 = delta, delta * delta

    alpha1 = -1.0 / ma
    alpha2 = d1 * (-C.c1 / (mi * ma**2))
    alpha3 = d1 * (2.0 * C.c13 / (mi * ma))
    alpha4 = d2 * ((4.0 * C.c13**2 + 4.0 * C.c13 * C.c14) / (mi * dP * ma**2)
                   - C.c3 / (dP * ma**2)
                   - C.c13 * d2P / (dP**2 * ma**2))
    alpha5 = d2 * (C.c9 / (mi * ma**3) - C.c2 / (mi * ma**2))
    alpha5b = d2 * (-C.c9 / (mi * ma**2) + C.c2 / (mi * ma))
    alpha6 = d2 * (-2.0 * C.c3 / (mi * ma))
    alpha7 = d2 * (2.0 * C.c8 / (mi * ma**2) - 2.0 * C.c4 / (mi * ma))
    alpha8 = d2 * (-2.0 * C.c13 * C.c1 / (mi**2 * ma**2)
                   + 2.0 * C.c8 / (mi * ma**2)
                   - 2.0 * C.c4 / (mi * ma))

    beta1 = -dP / mi
    beta2 = d1 * (-2.0 * C.c13 - 2.0 * C.c14) / (mi * ma)
    beta3 = d1 * (-d2P / mi)
    beta4 = d1 * (C.c1 * dP / (mi**2 * ma))
    beta5 = d2 * ((2.0 * C.c10 + 2.0 * C.c3) / (mi * ma))
    beta6 = d2 * (2.0 * C.c1 * C.c13 / (mi**2 * ma**2) - C.c8 / (mi * ma**2))
    beta7 = d2 * (-2.0 * C.c1 * C.c13 / (mi**2 * ma**2)
                  + 4.0 * C.c7 / (mi**2 * ma)
                  - 2.0 * C.c4 / (mi * ma))
    beta8 = d2 * ((-3.0 * C.c5 + 4.0 * C.c6 + C.c12) / mi**2
                  + (4.0 * C.c13**2 + 4.0 * C.c13 * C.c14) / (mi**2 * ma))
    beta9 = d2 * (2.0 * C.c7 * dP / mi**3
                  + C.c1 * d2P / (mi**2 * ma)
                  - 2.0 * C.c1 * C.c13 * dP / (mi**3 * ma))
    beta10 = d2 * (C.c1 * d2P / (mi**2 * ma))
    beta11 = d2 * (C.c11 * dP / (mi**3 * ma) - C.c2 * dP / (mi**2 * ma))
    beta11b = d2 * (-C.c11 / (mi**2 * ma) + C.c2 / (mi * ma))

    return HomogCoefficients(
        alpha1=alpha1, alpha2=alpha2, alpha3=alpha3, alpha4=alpha4,
        alpha5=alpha5, alpha5b=alpha5b, alpha6=alpha6, alpha7=alpha7,
        alpha8=alpha8,
        beta1=beta1, beta2=beta2, beta3=beta3, beta4=beta4, beta5=beta5,
        beta6=beta6, beta7=beta7, beta8=beta8, beta9=beta9, beta10=beta10,
        beta11=beta11, beta11b=beta11b,
        delta=delta, rho0=rho0, gas=gas,
        mean_a=ma, mean_ainv=mi, profile_id=C.profile_id,
    )


def effective_coefficients(profile: CrossSectionProfile, gas: GasModel,
                           rho0: float, delta: float | None = None,
                           n: int = DEFAULT_SAMPLES) -> HomogCoefficients:
    """Convenience: bracket table + alpha/beta assembly in one call."""
    if delta is None:
        delta = profile.period
    C = bracket_coefficients(profile, rho0, n=n)
    return homog_coefficients(C, gas, rho0, delta=delta)
