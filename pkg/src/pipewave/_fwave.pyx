# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled interface sweep for the f-wave solver.

Formula-for-formula twin of ``_fwave_py.fwave_sweep``; one fused pass over
the interfaces instead of a few dozen NumPy temporaries.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, fmax, fmin, pow, sqrt

cnp.import_array()

DEF DEGENERACY_TOL = 1e-12


def fwave_sweep(double[::1] rho, double[::1] m, double[::1] a,
                double kappa, double gamma, double dx):
    """Per-interface f-wave decomposition and fluctuations.

    Parameters: extended cell arrays (n+4 entries, 2 ghosts per side).
    Returns (apdq, amdq, smax) on the n+1 interfaces adjacent to interior
    cells.
    """
    cdef Py_ssize_t n_ext = rho.shape[0]
    cdef Py_ssize_t n_iface = n_ext - 3
    apdq_arr = np.zeros((n_iface, 2))
    amdq_arr = np.zeros((n_iface, 2))
    smax_arr = np.empty(n_iface)
    p_arr = np.empty(n_ext)
    c_arr = np.empty(n_ext)
    cdef double[:, ::1] apdq = apdq_arr
    cdef double[:, ::1] amdq = amdq_arr
    cdef double[::1] smax = smax_arr
    cdef double[::1] p = p_arr
    cdef double[::1] c = c_arr

    cdef double kg = sqrt(kappa * gamma)
    cdef double half_gm1 = 0.5 * (gamma - 1.0)
    cdef Py_ssize_t i, j, il, ir
    cdef double w
    cdef double rho_l, rho_r, m_l, m_r, a_l, a_r
    cdef double p_l, p_r, u_l, u_r, c_l, c_r
    cdef double d1, d2, a_t, rho_t, m_t, c_t
    cdef double den1, den2, guard, lam1_t, lam2_t
    cdef double r11, r12, r21, r22, det, b1, b2
    cdef double z11, z12, z21, z22, s1, s2

    # one power per cell: w = rho^((gamma-1)/2) gives both P and c
    for i in range(n_ext):
        w = pow(rho[i], half_gm1)
        p[i] = kappa * rho[i] * w * w
        c[i] = kg * w

    for j in range(n_iface):
        il = j + 1
        ir = j + 2
        rho_l = rho[il]; rho_r = rho[ir]
        m_l = m[il]; m_r = m[ir]
        a_l = a[il]; a_r = a[ir]
        p_l = p[il]; p_r = p[ir]
        c_l = c[il]; c_r = c[ir]
        u_l = m_l / rho_l
        u_r = m_r / rho_r

        d1 = a_r * m_r - a_l * m_l
        d2 = (a_r * m_r * u_r + a_r * p_r) - (a_l * m_l * u_l + a_l * p_l) \
            - 0.5 * (p_l + p_r) * (a_r - a_l)

        a_t = 0.5 * (a_l + a_r)
        rho_t = 0.5 * (rho_l + rho_r)
        m_t = 0.5 * (m_l + m_r)
        c_t = kg * pow(rho_t, half_gm1)

        den1 = m_t - rho_t * c_t
        den2 = m_t + rho_t * c_t
        guard = DEGENERACY_TOL * rho_t * c_t
        lam1_t = a_t * den1 / rho_t
        lam2_t = a_t * den2 / rho_t

        if fabs(den1) < guard:
            r11 = a_t; r21 = lam1_t
        else:
            r11 = rho_t / den1; r21 = 1.0
        if fabs(den2) < guard:
            r12 = a_t; r22 = lam2_t
        else:
            r12 = rho_t / den2; r22 = 1.0

        det = r11 * r22 - r12 * r21
        b1 = (d1 * r22 - r12 * d2) / det
        b2 = (r11 * d2 - d1 * r21) / det

        z11 = b1 * r11; z12 = b1 * r21
        z21 = b2 * r12; z22 = b2 * r22

        s1 = fmin(a_l * (u_l - c_l), a_r * (u_r - c_r))
        s2 = fmax(a_l * (u_l + c_l), a_r * (u_r + c_r))

        if s1 > 0.0:
            apdq[j, 0] += z11; apdq[j, 1] += z12
        elif s1 < 0.0:
            amdq[j, 0] += z11; amdq[j, 1] += z12
        else:
            apdq[j, 0] += 0.5 * z11; apdq[j, 1] += 0.5 * z12
            amdq[j, 0] += 0.5 * z11; amdq[j, 1] += 0.5 * z12
        if s2 > 0.0:
            apdq[j, 0] += z21; apdq[j, 1] += z22
        elif s2 < 0.0:
            amdq[j, 0] += z21; amdq[j, 1] += z22
        else:
            apdq[j, 0] += 0.5 * z21; apdq[j, 1] += 0.5 * z22
            amdq[j, 0] += 0.5 * z21; amdq[j, 1] += 0.5 * z22

        smax[j] = fmax(fabs(s1), fabs(s2))

    return apdq_arr, amdq_arr, smax_arr
