"""Linear dispersion relations of the effective evolution system.

Two forms of the linearized system around the quiescent state:

* ``xxx``: all dispersive terms as third space derivatives.  Its
  frequencies go complex beyond a finite wavenumber band edge, so the form
  is ill-posed as an evolution equation at high k.
* ``xxt``: mixed space-time third derivatives (the stable reformulation);
  the frequency stays real for all real k whenever alpha5b, beta11b > 0.

Both relations are returned as +- branch pairs with the principal complex
square root.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .homogenize import HomogCoefficients

IM_TOL = 1e-10


@dataclass(frozen=True)
class DispersionSample:
    k: float
    omega_plus: complex
    omega_minus: complex
    form: str


def _radicand_xxx(k, H: HomogCoefficients, rho0: float):
    left = H.alpha1 + 1j * k * H.alpha2 - k**2 * H.alpha5
    right = (H.beta1 + H.beta3 * rho0
             + 1j * k * H.beta4 + 1j * k * H.beta10 * rho0
             - k**2 * H.beta11)
    return left * right


def omega_xxx(k, H: HomogCoefficients, rho0: float):
    """Frequency pair of the all-space-derivative form at wavenumber k."""
    k_arr = np.asarray(k, dtype=float)
    w = np.abs(k_arr) * np.sqrt(_radicand_xxx(k_arr, H, rho0).astype(complex))
    if k_arr.ndim == 0:
        return DispersionSample(float(k_arr), complex(w), -complex(w), "xxx")
    return w


def omega_xxt(k, H: HomogCoefficients, rho0: float):
    """Frequency pair of the mixed-derivative (stable) form at wavenumber k."""
    k_arr = np.asarray(k, dtype=float)
    num = H.alpha1 * (H.beta1 + H.beta3 * rho0)
    den = (1.0 + H.alpha5b * k_arr**2) * (1.0 + H.beta11b * k_arr**2)
    if np.any(den == 0.0):
        raise ZeroDivisionError("1 + alpha5b*k^2 vanished: unstable coefficient signs")
    w = np.abs(k_arr) * np.sqrt((num / den).astype(complex))
    if k_arr.ndim == 0:
        return DispersionSample(float(k_arr), complex(w), -complex(w), "xxt")
    return w


def phase_speed_k0(H: HomogCoefficients, rho0: float) -> float:
    """k -> 0 phase velocity of both forms: sqrt(alpha1*(beta1 + beta3*rho0))."""
    return float(np.sqrt(H.alpha1 * (H.beta1 + H.beta3 * rho0)))


@dataclass(frozen=True)
class StabilityReport:
    k_max: float
    n_samples: int
    max_im_xxx: float
    max_im_xxt: float
    k_star_xxx: float | None  # smallest k where the xxx form goes complex


def stability_scan(H: HomogCoefficients, rho0: float, k_max: float,
                   n_samples: int) -> StabilityReport:
    """Scan |Im omega| over k in [0, k_max] for both forms.

    Reports the per-form maxima and the smallest k at which the xxx form
    turns complex (bisection-refined; None when the scan stays real).
    """
    if k_max <= 0.0 or n_samples < 2:
        raise ValueError("need k_max > 0 and at least 2 samples")
    k = np.linspace(0.0, k_max, n_samples)
    im_xxx = np.abs(np.imag(omega_xxx(k, H, rho0)))
    im_xxt = np.abs(np.imag(omega_xxt(k, H, rho0)))

    k_star = None
    bad = np.nonzero(im_xxx > IM_TOL)[0]
    if bad.size:
        j = bad[0]
        if j == 0:
            k_star = 0.0
        else:
            lo, hi = k[j - 1], k[j]
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                w = omega_xxx(mid, H, rho0)
                if abs(w.omega_plus.imag) > IM_TOL:
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-12 * max(1.0, hi):
                    break
            k_star = 0.5 * (lo + hi)

    return StabilityReport(
        k_max=k_max, n_samples=n_samples,
        max_im_xxx=float(np.max(im_xxx)), max_im_xxt=float(np.max(im_xxt)),
        k_star_xxx=k_star,
    )
