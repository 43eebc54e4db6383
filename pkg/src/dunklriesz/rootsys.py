"""Reflection group, root system, weighted measure and derived constants.

Only the sign-flip groups Z_2^N (products of rank-1 reflections along the
coordinate axes) are supported: this is the one family for which the
intertwining measure, the kernel and the transform all admit computable
closed or series forms.  Roots carry the normalization <a,a> = 2, so the
positive roots are sqrt(2)*e_j and the one-dimensional weight picks up a
factor 2^gamma from |sqrt(2) x|^(2 gamma).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product

import numpy as np

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ReflectionSetup:
    """Sign-flip reflection group on R^N with per-axis multiplicities.

    Parameters
    ----------
    dimension : number of coordinates N >= 1.
    multiplicities : tuple of N values gamma_j >= 0, one per positive root
        sqrt(2)*e_j.  The group-invariance constraint is automatic here
        because each orbit {+-sqrt(2) e_j} carries a single value.
    """

    dimension: int
    multiplicities: tuple[float, ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")
        if len(self.multiplicities) != self.dimension:
            raise ValueError("need one multiplicity per coordinate")
        if any(g < 0 for g in self.multiplicities):
            raise ValueError("multiplicities must be nonnegative")
        object.__setattr__(self, "multiplicities",
                           tuple(float(g) for g in self.multiplicities))

    @property
    def positive_roots(self) -> np.ndarray:
        """Rows are the positive roots sqrt(2)*e_j, norm^2 = 2 exactly."""
        return SQRT2 * np.eye(self.dimension)

    @property
    def group_signs(self) -> np.ndarray:
        """All 2^N sign patterns; row s represents the diagonal matrix diag(s)."""
        return np.array(list(product((1.0, -1.0), repeat=self.dimension)))

    def reflect(self, axis: int, x: np.ndarray) -> np.ndarray:
        """Apply sigma_alpha for the positive root along `axis`."""
        y = np.array(x, dtype=float, copy=True)
        y[..., axis] = -y[..., axis]
        return y

    def orbit(self, x) -> np.ndarray:
        """All points g.x, one per group element, shape (2^N, N)."""
        return self.group_signs * np.asarray(x, dtype=float)[None, :]


@dataclass(frozen=True)
class DerivedConstants:
    """Constants attached to a setup.

    riesz_norm is the constant actually multiplying the singular-integral
    and explicit-kernel routes; it equals d_k / c_k, which is what makes
    those routes consistent with the -i xi_j/|xi| multiplier (the bare d_k
    normalizes the defining integral against the Gaussian-normalized
    measure).  At k = 0 it reduces to the textbook Riesz constant
    Gamma((N+1)/2) / pi^((N+1)/2).
    """

    gamma_k: float
    p_k: float
    c_k: float
    d_k: float
    weight_exponents: tuple[float, ...]
    riesz_norm: float
    sphere_factor: float


def weight_density(setup: ReflectionSetup, x) -> np.ndarray:
    """m_k density prod_{alpha in R+} |<alpha,x>|^(2 k(alpha)) at points x.

    Accepts a single point (N,) or a batch (..., N).  Total function: zero
    on reflection hyperplanes when the corresponding multiplicity is
    positive, one everywhere for k = 0.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    pts = np.atleast_2d(x)
    out = np.ones(pts.shape[:-1])
    for j, g in enumerate(setup.multiplicities):
        if g > 0:
            out = out * np.abs(SQRT2 * pts[..., j]) ** (2.0 * g)
    return float(out[0]) if scalar else out


def axis_weight_constant(gamma: float) -> float:
    """One-dimensional Gaussian m_k mass: int exp(-t^2/2) 2^g |t|^(2g) dt."""
    return 2.0 ** (2.0 * gamma + 0.5) * math.gamma(gamma + 0.5)


def compute_constants(setup: ReflectionSetup) -> DerivedConstants:
    """gamma_k, p_k, c_k, d_k and the effective Riesz normalization.

    c_k is assembled from the closed-form per-axis Gaussian moments; the
    quadrature cross-check lives in the test suite.
    """
    gamma_k = float(sum(setup.multiplicities))
    n = setup.dimension
    p_k = 2.0 * gamma_k + n + 1.0
    c_k = 1.0
    for g in setup.multiplicities:
        c_k *= axis_weight_constant(g)
    d_k = 2.0 ** ((p_k - 1.0) / 2.0) * math.gamma(p_k / 2.0) / math.sqrt(math.pi)
    # surface factor: int phi(|y|) dm_k = sphere_factor * int phi(r) r^(2 gamma_k + N - 1) dr
    sphere_factor = c_k / (2.0 ** (gamma_k + n / 2.0 - 1.0) * math.gamma(gamma_k + n / 2.0))
    return DerivedConstants(
        gamma_k=gamma_k,
        p_k=p_k,
        c_k=c_k,
        d_k=d_k,
        weight_exponents=tuple(2.0 * g for g in setup.multiplicities),
        riesz_norm=d_k / c_k,
        sphere_factor=sphere_factor,
    )


def orbit_distance(setup: ReflectionSetup, x, y) -> float:
    """min over g in G of |g.x - y|."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    orb = setup.orbit(x)
    return float(np.min(np.linalg.norm(orb - y[None, :], axis=1)))


def orbit_distance_many(setup: ReflectionSetup, pts, y) -> np.ndarray:
    """min_g |g.x - y| for a batch of x, shape (m, N) -> (m,)."""
    pts = np.asarray(pts, dtype=float)
    y = np.asarray(y, dtype=float)
    signs = setup.group_signs            # (2^N, N)
    d2 = np.sum((pts[:, None, :] * signs[None, :, :] - y[None, None, :]) ** 2, axis=2)
    return np.sqrt(np.min(d2, axis=1))


def orbit_max_distance_many(setup: ReflectionSetup, pts, y) -> np.ndarray:
    """max_g |g.x - y| for a batch of x."""
    pts = np.asarray(pts, dtype=float)
    y = np.asarray(y, dtype=float)
    signs = setup.group_signs
    d2 = np.sum((pts[:, None, :] * signs[None, :, :] - y[None, None, :]) ** 2, axis=2)
    return np.sqrt(np.max(d2, axis=1))
