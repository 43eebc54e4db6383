# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled twin of _kernels_py: the Riesz-kernel inner loops.

Same contracts and the same arithmetic scheme as the numpy implementation
(two pow calls per quadrature node, sandwich checked on squared
distances), so the two backends agree to rounding.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt

cnp.import_array()

BACKEND_NAME = "compiled"

from ._kernels_py import SandwichViolation, _mu_tensor


cdef inline void _orbit_bounds_sq_point(double[:, ::1] P, Py_ssize_t i,
                                        double[::1] c, Py_ssize_t n,
                                        double* lo2, double* hi2) noexcept nogil:
    cdef Py_ssize_t mask, d
    cdef double d2, diff, best_lo = 1e308, best_hi = 0.0
    for mask in range(1 << n):
        d2 = 0.0
        for d in range(n):
            if (mask >> d) & 1:
                diff = -P[i, d] - c[d]
            else:
                diff = P[i, d] - c[d]
            d2 += diff * diff
        if d2 < best_lo:
            best_lo = d2
        if d2 > best_hi:
            best_hi = d2
    lo2[0] = best_lo
    hi2[0] = best_hi


def kernel_many_x(gammas, double pk, double dnorm, int j, X, y,
                  axis_t, axis_w, bint check_sandwich=True,
                  double sandwich_tol=1e-9, double hyperplane_tol=1e-6):
    """K_j(x, y) for many x (rows of X) against one y."""
    T_np, wmu_np = _mu_tensor(axis_t, axis_w)
    cdef double[:, ::1] Xv = np.ascontiguousarray(np.atleast_2d(X), dtype=np.float64)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[:, ::1] T = np.ascontiguousarray(T_np, dtype=np.float64)
    cdef double[::1] wmu = np.ascontiguousarray(wmu_np, dtype=np.float64)
    cdef Py_ssize_t m = Xv.shape[0], n = Xv.shape[1], nmu = T.shape[0]
    cdef double gj = float(gammas[j])
    out_np = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_np

    cdef double yn2 = 0.0, ny
    cdef Py_ssize_t d, i, q
    for d in range(n):
        yn2 += yv[d] * yv[d]
    ny = sqrt(yn2)
    cdef bint on_hyp = (gj > 0.0) and (fabs(yv[j]) < hyperplane_tol * max(ny, 1e-300))
    cdef double y0n2 = yn2 - yv[j] * yv[j]
    cdef double half_pk = -0.5 * pk

    cdef double nx2, acc1, accal, A2, As2, A02, u, us, dot_, dots, dot0
    cdef double eta_d, eta_j, lo2 = 0.0, hi2 = 0.0, slack2 = 0.0, hi
    cdef int bad = 0
    with nogil:
        for i in range(m):
            nx2 = 0.0
            for d in range(n):
                nx2 += Xv[i, d] * Xv[i, d]
            if check_sandwich:
                _orbit_bounds_sq_point(Xv, i, yv, n, &lo2, &hi2)
                hi = sqrt(hi2)
                slack2 = sandwich_tol * (1.0 + hi) * (2.0 * hi + 1.0)
            acc1 = 0.0
            accal = 0.0
            for q in range(nmu):
                dot_ = 0.0
                dots = 0.0
                dot0 = 0.0
                eta_j = 0.0
                for d in range(n):
                    eta_d = Xv[i, d] * T[q, d]
                    if d == j:
                        eta_j = eta_d
                        dot_ += yv[d] * eta_d
                        dots -= yv[d] * eta_d
                    else:
                        dot_ += yv[d] * eta_d
                        dots += yv[d] * eta_d
                        dot0 += yv[d] * eta_d
                A2 = nx2 + yn2 - 2.0 * dot_
                if A2 < 0.0:
                    A2 = 0.0
                if check_sandwich and (A2 < lo2 - slack2 or A2 > hi2 + slack2):
                    bad = 1
                    break
                u = pow(A2, half_pk)
                acc1 += wmu[q] * (eta_j - yv[j]) * u
                if gj > 0.0:
                    if on_hyp:
                        A02 = nx2 + y0n2 - 2.0 * dot0
                        if A02 < 0.0:
                            A02 = 0.0
                        accal += wmu[q] * 2.0 * (pk - 2.0) * eta_j * pow(A02, half_pk)
                    else:
                        As2 = nx2 + yn2 - 2.0 * dots
                        if As2 < 0.0:
                            As2 = 0.0
                        if check_sandwich and (As2 < lo2 - slack2 or As2 > hi2 + slack2):
                            bad = 1
                            break
                        us = pow(As2, half_pk)
                        accal += wmu[q] * (A2 * u - As2 * us)
            if bad:
                break
            if gj > 0.0:
                if not on_hyp:
                    accal /= yv[j]
                out[i] = dnorm * (acc1 + gj / (pk - 2.0) * accal)
            else:
                out[i] = dnorm * acc1
    if bad:
        raise SandwichViolation("A(x,y,eta) left the orbit-distance sandwich")
    return out_np


def kernel_many_y(gammas, double pk, double dnorm, int j, x, Y,
                  axis_t, axis_w, bint check_sandwich=True,
                  double sandwich_tol=1e-9, double hyperplane_tol=1e-6):
    """K_j(x, y) for one x against many y (rows of Y)."""
    T_np, wmu_np = _mu_tensor(axis_t, axis_w)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double[:, ::1] Yv = np.ascontiguousarray(np.atleast_2d(Y), dtype=np.float64)
    cdef double[::1] wmu = np.ascontiguousarray(wmu_np, dtype=np.float64)
    eta_np = np.ascontiguousarray(np.asarray(x, dtype=np.float64)[None, :] * T_np)
    cdef double[:, ::1] eta = eta_np
    cdef Py_ssize_t m = Yv.shape[0], n = Yv.shape[1], nmu = eta.shape[0]
    cdef double gj = float(gammas[j])
    out_np = np.empty(m, dtype=np.float64)
    cdef double[::1] out = out_np

    cdef double nx2 = 0.0
    cdef Py_ssize_t d, i, q
    for d in range(n):
        nx2 += xv[d] * xv[d]
    cdef double half_pk = -0.5 * pk

    cdef double yn2, ny, acc1, accal, A2, As2, A02, u, us, dot_, dots, dot0
    cdef double lo2 = 0.0, hi2 = 0.0, slack2 = 0.0, hi
    cdef bint on_hyp
    cdef int bad = 0
    with nogil:
        for i in range(m):
            yn2 = 0.0
            for d in range(n):
                yn2 += Yv[i, d] * Yv[i, d]
            ny = sqrt(yn2)
            on_hyp = (gj > 0.0) and (fabs(Yv[i, j]) < hyperplane_tol * max(ny, 1e-300))
            if check_sandwich:
                _orbit_bounds_sq_point(Yv, i, xv, n, &lo2, &hi2)
                hi = sqrt(hi2)
                slack2 = sandwich_tol * (1.0 + hi) * (2.0 * hi + 1.0)
            acc1 = 0.0
            accal = 0.0
            for q in range(nmu):
                dot_ = 0.0
                dots = 0.0
                dot0 = 0.0
                for d in range(n):
                    if d == j:
                        dot_ += Yv[i, d] * eta[q, d]
                        dots -= Yv[i, d] * eta[q, d]
                    else:
                        dot_ += Yv[i, d] * eta[q, d]
                        dots += Yv[i, d] * eta[q, d]
                        dot0 += Yv[i, d] * eta[q, d]
                A2 = nx2 + yn2 - 2.0 * dot_
                if A2 < 0.0:
                    A2 = 0.0
                if check_sandwich and (A2 < lo2 - slack2 or A2 > hi2 + slack2):
                    bad = 1
                    break
                u = pow(A2, half_pk)
                acc1 += wmu[q] * (eta[q, j] - Yv[i, j]) * u
                if gj > 0.0:
                    if on_hyp:
                        A02 = nx2 + (yn2 - Yv[i, j] * Yv[i, j]) - 2.0 * dot0
                        if A02 < 0.0:
                            A02 = 0.0
                        accal += wmu[q] * 2.0 * (pk - 2.0) * eta[q, j] * pow(A02, half_pk)
                    else:
                        As2 = nx2 + yn2 - 2.0 * dots
                        if As2 < 0.0:
                            As2 = 0.0
                        if check_sandwich and (As2 < lo2 - slack2 or As2 > hi2 + slack2):
                            bad = 1
                            break
                        us = pow(As2, half_pk)
                        accal += wmu[q] * (A2 * u - As2 * us)
            if bad:
                break
            if gj > 0.0:
                if not on_hyp:
                    accal /= Yv[i, j]
                out[i] = dnorm * (acc1 + gj / (pk - 2.0) * accal)
            else:
                out[i] = dnorm * acc1
    if bad:
        raise SandwichViolation("A(x,y,eta) left the orbit-distance sandwich")
    return out_np
