"""Pure-numpy implementation of the hot kernels.

These are the inner loops that dominate the runtime of the singular-
integral machinery: the explicit Riesz kernel evaluated across large point
sets with the intertwining quadrature inside.  A compiled twin lives in
_ckern.pyx; dunklriesz._backend picks whichever is available.  Both
implementations must agree to near machine precision (tested).

Conventions: axis_t / axis_w are the x-independent reference nodes/weights
of the rank-1 intertwining rule per coordinate (node eta_j = x_j * t);
`dnorm` is the effective Riesz normalization d_k / c_k; the A-metric
sandwich  min_g|g.x - y| <= A <= max_g|g.x - y|  is asserted on every
evaluated node when check_sandwich is set (compared on squared distances,
A itself is never materialized: the power A^-p_k is taken from A^2).
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"
CHUNK = 2048


class SandwichViolation(AssertionError):
    """Raised when an A-metric value escapes the orbit-distance sandwich."""


def _mu_tensor(axis_t, axis_w):
    """Tensorized reference nodes (m, N) and weights (m,) from per-axis rules."""
    grids = np.meshgrid(*axis_t, indexing="ij")
    T = np.stack([g.ravel() for g in grids], axis=1)
    w = axis_w[0]
    for a in axis_w[1:]:
        w = np.multiply.outer(w, a)
    return T, np.asarray(w).ravel()


def _orbit_bounds_sq(X, y):
    """min_g |g.x - y|^2 and max_g per row of X, for the sign-flip group."""
    n = X.shape[1]
    d2min = None
    d2max = None
    for mask in range(1 << n):
        signs = np.array([1.0 if not (mask >> j) & 1 else -1.0 for j in range(n)])
        d2 = np.sum((X * signs[None, :] - y[None, :]) ** 2, axis=1)
        d2min = d2 if d2min is None else np.minimum(d2min, d2)
        d2max = d2 if d2max is None else np.maximum(d2max, d2)
    return d2min, d2max


def _check_sandwich_sq(A2, lo2, hi2, tol):
    hi = np.sqrt(hi2)
    slack = tol * (1.0 + hi) * (2.0 * hi + 1.0)
    if np.any(A2 < lo2[:, None] - slack[:, None]) \
            or np.any(A2 > hi2[:, None] + slack[:, None]):
        raise SandwichViolation("A(x,y,eta) left the orbit-distance sandwich")


def kernel_many_x(gammas, pk, dnorm, j, X, y, axis_t, axis_w,
                  check_sandwich=True, sandwich_tol=1e-9,
                  hyperplane_tol=1e-6):
    """K_j(x, y) for many x (rows of X) against one y."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    y = np.asarray(y, dtype=float)
    T, wmu = _mu_tensor(axis_t, axis_w)
    gj = gammas[j]
    ny = float(np.linalg.norm(y))
    yn2 = float(y @ y)
    ys = y.copy()
    ys[j] = -ys[j]
    on_hyperplane = gj > 0 and abs(y[j]) < hyperplane_tol * max(ny, 1e-300)
    y0 = y.copy()
    y0[j] = 0.0
    out = np.empty(len(X))
    for lo_i in range(0, len(X), CHUNK):
        Xc = X[lo_i:lo_i + CHUNK]
        eta = Xc[:, None, :] * T[None, :, :]            # (m, mu, N)
        nx2 = np.sum(Xc ** 2, axis=1)[:, None]
        A2 = np.maximum(nx2 + yn2 - 2.0 * (eta @ y), 0.0)
        if check_sandwich:
            blo2, bhi2 = _orbit_bounds_sq(Xc, y)
            _check_sandwich_sq(A2, blo2, bhi2, sandwich_tol)
        u = A2 ** (-0.5 * pk)                            # A^-p_k
        val = np.sum(wmu[None, :] * (eta[:, :, j] - y[j]) * u, axis=1)
        if gj > 0:
            if on_hyperplane:
                A02 = np.maximum(nx2 + float(y0 @ y0) - 2.0 * (eta @ y0), 0.0)
                kal = np.sum(wmu[None, :] * 2.0 * (pk - 2.0)
                             * eta[:, :, j] * A02 ** (-0.5 * pk), axis=1)
            else:
                As2 = np.maximum(nx2 + yn2 - 2.0 * (eta @ ys), 0.0)
                if check_sandwich:
                    _check_sandwich_sq(As2, blo2, bhi2, sandwich_tol)
                us = As2 ** (-0.5 * pk)
                kal = np.sum(wmu[None, :] * (A2 * u - As2 * us), axis=1) / y[j]
            val = val + gj / (pk - 2.0) * kal
        out[lo_i:lo_i + CHUNK] = dnorm * val
    return out


def kernel_many_y(gammas, pk, dnorm, j, x, Y, axis_t, axis_w,
                  check_sandwich=True, sandwich_tol=1e-9,
                  hyperplane_tol=1e-6):
    """K_j(x, y) for one x against many y (rows of Y)."""
    x = np.asarray(x, dtype=float)
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    T, wmu = _mu_tensor(axis_t, axis_w)
    eta = x[None, :] * T                                 # (mu, N)
    nx2 = float(x @ x)
    gj = gammas[j]
    out = np.empty(len(Y))
    for lo_i in range(0, len(Y), CHUNK):
        Yc = Y[lo_i:lo_i + CHUNK]
        yn2 = np.sum(Yc ** 2, axis=1)[:, None]
        A2 = np.maximum(yn2 + nx2 - 2.0 * (Yc @ eta.T), 0.0)
        if check_sandwich:
            blo2, bhi2 = _orbit_bounds_sq(Yc, x)         # same orbit either way
            _check_sandwich_sq(A2, blo2, bhi2, sandwich_tol)
        u = A2 ** (-0.5 * pk)
        val = np.sum(wmu[None, :] * (eta[None, :, j] - Yc[:, j:j + 1]) * u, axis=1)
        if gj > 0:
            ny = np.linalg.norm(Yc, axis=1)
            small = np.abs(Yc[:, j]) < hyperplane_tol * np.maximum(ny, 1e-300)
            Ys = Yc.copy()
            Ys[:, j] = -Ys[:, j]
            As2 = np.maximum(yn2 + nx2 - 2.0 * (Ys @ eta.T), 0.0)
            if check_sandwich:
                _check_sandwich_sq(As2, blo2, bhi2, sandwich_tol)
            us = As2 ** (-0.5 * pk)
            safe = np.where(small, 1.0, Yc[:, j])
            kal = np.sum(wmu[None, :] * (A2 * u - As2 * us), axis=1) / safe
            if small.any():
                Y0 = Yc[small].copy()
                Y0[:, j] = 0.0
                A02 = np.maximum(np.sum(Y0 ** 2, 1)[:, None] + nx2
                                 - 2.0 * (Y0 @ eta.T), 0.0)
                kal[small] = np.sum(wmu[None, :] * 2.0 * (pk - 2.0)
                                    * eta[None, :, j] * A02 ** (-0.5 * pk), axis=1)
            val = val + gj / (pk - 2.0) * kal
        out[lo_i:lo_i + CHUNK] = dnorm * val
    return out
