"""Pure-NumPy interface sweep for the f-wave solver.

Reference implementation of the compiled kernel in ``_fwave.pyx``; the two
must apply the same formulas in the same order.  Arrays carry two ghost
cells per side; the sweep covers the n+1 interfaces adjacent to interior
cells.
"""

import numpy as np

DEGENERACY_TOL = 1e-12


def fwave_sweep(rho, m, a, kappa, gamma, dx):
    """Per-interface f-wave decomposition and fluctuations.

    Parameters: extended cell arrays (n+4 entries, 2 ghosts per side).
    Returns (apdq, amdq, smax): right/left-going fluctuations with shape
    (n+1, 2) on the interfaces adjacent to interior cells, and the largest
    absolute wave speed per interface.
    """
    kg = np.sqrt(kappa * gamma)
    # one power per cell: w = rho^((gamma-1)/2) gives both P and c
    w = rho ** (0.5 * (gamma - 1.0))
    p = kappa * rho * w * w
    c = kg * w

    rho_l, rho_r = rho[1:-2], rho[2:-1]
    m_l, m_r = m[1:-2], m[2:-1]
    a_l, a_r = a[1:-2], a[2:-1]
    p_l, p_r = p[1:-2], p[2:-1]
    c_l, c_r = c[1:-2], c[2:-1]
    u_l = m_l / rho_l
    u_r = m_r / rho_r

    # flux difference minus the interface source (dx*Psi)
    d1 = a_r * m_r - a_l * m_l
    d2 = (a_r * m_r * u_r + a_r * p_r) - (a_l * m_l * u_l + a_l * p_l) \
        - 0.5 * (p_l + p_r) * (a_r - a_l)

    a_t = 0.5 * (a_l + a_r)
    rho_t = 0.5 * (rho_l + rho_r)
    m_t = 0.5 * (m_l + m_r)
    c_t = kg * rho_t ** (0.5 * (gamma - 1.0))

    den1 = m_t - rho_t * c_t
    den2 = m_t + rho_t * c_t
    guard = DEGENERACY_TOL * rho_t * c_t
    lam1_t = a_t * den1 / rho_t
    lam2_t = a_t * den2 / rho_t

    # eigenvector columns; rescaled (a_t, lambda_t) where the normalized
    # form degenerates (sonic states)
    deg1 = np.abs(den1) < guard
    deg2 = np.abs(den2) < guard
    with np.errstate(divide="ignore", invalid="ignore"):
        r11 = np.where(deg1, a_t, rho_t / np.where(deg1, 1.0, den1))
        r12 = np.where(deg2, a_t, rho_t / np.where(deg2, 1.0, den2))
    r21 = np.where(deg1, lam1_t, 1.0)
    r22 = np.where(deg2, lam2_t, 1.0)

    det = r11 * r22 - r12 * r21
    b1 = (d1 * r22 - r12 * d2) / det
    b2 = (r11 * d2 - d1 * r21) / det

    z1 = np.stack([b1 * r11, b1 * r21], axis=1)
    z2 = np.stack([b2 * r12, b2 * r22], axis=1)

    s1 = np.minimum(a_l * (u_l - c_l), a_r * (u_r - c_r))
    s2 = np.maximum(a_l * (u_l + c_l), a_r * (u_r + c_r))

    apdq = np.zeros_like(z1)
    amdq = np.zeros_like(z1)
    for z, s in ((z1, s1), (z2, s2)):
        w_plus = np.where(s > 0.0, 1.0, np.where(s == 0.0, 0.5, 0.0))[:, None]
        apdq += w_plus * z
        amdq += (1.0 - w_plus) * z

    smax = np.maximum(np.abs(s1), np.abs(s2))
    return apdq, amdq, smax
