"""Dunkl kernel E_k and intertwining measures mu_x for the sign-flip groups.

The rank-1 factor e_g(z) is the entire solution of the one-dimensional
eigenproblem with e_g(0) = 1; the product over coordinates gives E_k for
Z_2^N.  Evaluation switches between the defining power series (small
arguments, perfectly conditioned) and Bessel-function forms (large
arguments, where the alternating series would cancel catastrophically):

    e_g(t)       = G(g+1/2) (|t|/2)^(1/2-g) [I_{g-1/2}(|t|) + sgn(t) I_{g+1/2}(|t|)]
    e_g(i theta) = G(g+1/2) (|th|/2)^(1/2-g) [J_{g-1/2}(|th|) + i sgn(th) J_{g+1/2}(|th|)]

mu_x is the rank-1 beta-type probability density c_g (1-t)^(g-1) (1+t)^g dt
in t = eta/x, tensorized across coordinates and realized as a Gauss-Jacobi
rule so the total mass is exactly one.  Only existence and the support
co(G.x) are given by the theory; the beta form is a design choice gated by
the exponential-moment identity  int e^{lam eta} dmu_x(eta) = E_k(lam, x),
which the test suite enforces at 1e-10.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, iv, ive, jv, roots_jacobi

from .rootsys import ReflectionSetup

SERIES_SWITCH_IMAG = 8.0     # beyond this the alternating series sheds digits
SERIES_SWITCH_REAL = 30.0    # real series is positive-term; switch only to cap terms
SERIES_MAX_TERMS = 500


def rank1_series(gamma: float, z, max_terms: int = SERIES_MAX_TERMS):
    """Power series sum a_n z^n with a_0 = 1, a_n = a_{n-1}/(n + 2g [n odd])."""
    z = np.asarray(z)
    dtype = complex if np.iscomplexobj(z) else float
    term = np.ones(z.shape, dtype=dtype)
    out = term.copy()
    for n in range(1, max_terms + 1):
        term = term * z / (n + 2.0 * gamma * (n % 2))
        out = out + term
        if np.all(np.abs(term) <= 1e-17 * (np.abs(out) + 1.0)):
            return out
    if not np.all(np.abs(term) <= 1e-12 * (np.abs(out) + 1.0)):
        raise FloatingPointError("rank-1 kernel series failed to decay "
                                 f"within {max_terms} terms")
    return out


def _shaped(fn):
    """Run fn on a raveled float/complex array, restore the input shape."""
    def wrapper(gamma, arg):
        arr = np.asarray(arg)
        flat = fn(gamma, arr.ravel())
        if arr.ndim == 0:
            return flat[0]
        return flat.reshape(arr.shape)
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_shaped
def rank1_imag(gamma: float, theta) -> np.ndarray:
    """e_g(i theta) for real theta."""
    theta = np.asarray(theta, dtype=float)
    if gamma == 0.0:
        return np.exp(1j * theta)
    out = np.empty(theta.shape, dtype=complex)
    small = np.abs(theta) <= SERIES_SWITCH_IMAG
    if small.any():
        out[small] = rank1_series(gamma, 1j * theta[small])
    big = ~small
    if big.any():
        th = theta[big]
        at = np.abs(th)
        pref = np.exp(gammaln(gamma + 0.5) + (0.5 - gamma) * np.log(at / 2.0))
        out[big] = pref * (jv(gamma - 0.5, at) + 1j * np.sign(th) * jv(gamma + 0.5, at))
    return out


@_shaped
def rank1_real(gamma: float, t) -> np.ndarray:
    """e_g(t) for real t."""
    t = np.asarray(t, dtype=float)
    if gamma == 0.0:
        return np.exp(t)
    out = np.empty(t.shape, dtype=float)
    small = np.abs(t) <= SERIES_SWITCH_REAL
    if small.any():
        out[small] = rank1_series(gamma, t[small]).real
    big = ~small
    if big.any():
        ts = t[big]
        at = np.abs(ts)
        # ive = iv * exp(-|t|) keeps the growing exponential out of the Bessel call
        pref = np.exp(gammaln(gamma + 0.5) + (0.5 - gamma) * np.log(at / 2.0) + at)
        out[big] = pref * (ive(gamma - 0.5, at) + np.sign(ts) * ive(gamma + 0.5, at))
    return out


@_shaped
def rank1_complex(gamma: float, z) -> np.ndarray:
    """e_g(z) for complex z; the holomorphic continuation of the series."""
    z = np.asarray(z, dtype=complex)
    if gamma == 0.0:
        return np.exp(z)
    out = np.empty(z.shape, dtype=complex)
    small = np.abs(z) <= SERIES_SWITCH_IMAG
    real_ax = (~small) & (z.imag == 0.0)
    imag_ax = (~small) & (z.real == 0.0) & ~real_ax
    rest = ~(small | real_ax | imag_ax)
    if small.any():
        out[small] = rank1_series(gamma, z[small])
    if real_ax.any():
        out[real_ax] = rank1_real(gamma, z[real_ax].real)
    if imag_ax.any():
        out[imag_ax] = rank1_imag(gamma, z[imag_ax].imag)
    if rest.any():
        zz = z[rest]
        pref = math.exp(gammaln(gamma + 0.5)) * (zz / 2.0) ** (0.5 - gamma)
        out[rest] = pref * (iv(gamma - 0.5, zz) + iv(gamma + 0.5, zz))
    return out


@dataclass(frozen=True)
class DunklKernelEvaluator:
    """Product-form E_k evaluator bound to a setup."""

    setup: ReflectionSetup
    complex_arguments: bool = True

    def __call__(self, lam, x):
        return dunkl_kernel(self.setup, lam, x)


def dunkl_kernel(setup: ReflectionSetup, lam, x):
    """E_k(lam, x) = prod_j e_{gamma_j}(lam_j x_j).

    lam may be real, purely imaginary or fully complex; x is real.  Inputs
    broadcast over leading axes; the coordinate axis is the last one.
    """
    lam = np.asarray(lam)
    x = np.asarray(x, dtype=float)
    args = lam * x
    if np.iscomplexobj(args):
        if np.all(args.imag == 0.0):
            fn, args = rank1_real, args.real
        elif np.all(args.real == 0.0):
            fn, args = rank1_imag, args.imag
        else:
            fn = rank1_complex
    else:
        fn = rank1_real
    out = None
    for j, g in enumerate(setup.multiplicities):
        col = fn(g, args[..., j])
        out = col if out is None else out * col
    return out


# ---------------------------------------------------------------------------
# intertwining measure
# ---------------------------------------------------------------------------

@lru_cache(maxsize=128)
def rank1_reference_rule(gamma: float, npts: int):
    """Gauss-Jacobi nodes/weights for c_g (1-t)^(g-1) (1+t)^g dt on (-1,1).

    Weights sum to one up to rounding; nodes lie strictly inside (-1, 1).
    gamma = 0 degenerates to the exact point mass at t = 1.
    """
    if npts < 1:
        raise ValueError("npts must be >= 1")
    if gamma < 0:
        raise ValueError("negative multiplicity")
    if gamma == 0.0:
        return np.array([1.0]), np.array([1.0])
    t, v = roots_jacobi(npts, gamma - 1.0, gamma)
    lognorm = -(2.0 * gamma) * math.log(2.0) - (
        gammaln(gamma) + gammaln(gamma + 1.0) - gammaln(2.0 * gamma + 1.0))
    return t, v * math.exp(lognorm)


@dataclass(frozen=True)
class IntertwiningMeasure:
    """Quadrature representation of mu_x: nodes in co(G.x), weights sum to 1."""

    base_point: tuple[float, ...]
    nodes: np.ndarray      # (m, N)
    weights: np.ndarray    # (m,)
    axis_nodes: tuple      # per-axis node arrays (already scaled by x_j)
    axis_weights: tuple

    def mass(self) -> float:
        return float(np.sum(self.weights))

    def in_support_box(self, tol: float = 0.0) -> bool:
        x = np.asarray(self.base_point)
        return bool(np.all(np.abs(self.nodes) <= np.abs(x)[None, :] + tol))

    def moment(self, lam) -> float:
        """int e^{<lam, eta>} dmu_x(eta) by the quadrature."""
        lam = np.asarray(lam, dtype=float)
        return float(np.sum(self.weights * np.exp(self.nodes @ lam)))

    def to_text(self) -> str:
        lines = ["# intertwining measure dump",
                 "base " + " ".join(repr(v) for v in self.base_point)]
        for nd, w in zip(self.nodes, self.weights):
            lines.append(" ".join(repr(float(v)) for v in nd) + " " + repr(float(w)))
        return "\n".join(lines) + "\n"


def intertwining_measure(setup: ReflectionSetup, x, npts: int = 64) -> IntertwiningMeasure:
    """mu_x as a tensor Gauss-Jacobi rule; exact point mass on gamma_j = 0 axes."""
    x = np.asarray(x, dtype=float)
    axis_nodes, axis_weights = [], []
    for j, g in enumerate(setup.multiplicities):
        if g == 0.0:
            axis_nodes.append(np.array([x[j]]))
            axis_weights.append(np.array([1.0]))
        elif x[j] == 0.0:
            axis_nodes.append(np.array([0.0]))
            axis_weights.append(np.array([1.0]))
        else:
            t, w = rank1_reference_rule(g, npts)
            axis_nodes.append(x[j] * t)
            axis_weights.append(w)
    grids = np.meshgrid(*axis_nodes, indexing="ij")
    nodes = np.stack([gg.ravel() for gg in grids], axis=1)
    wt = axis_weights[0]
    for w in axis_weights[1:]:
        wt = np.multiply.outer(wt, w)
    return IntertwiningMeasure(
        base_point=tuple(float(v) for v in x),
        nodes=nodes,
        weights=np.asarray(wt).ravel(),
        axis_nodes=tuple(axis_nodes),
        axis_weights=tuple(axis_weights),
    )
