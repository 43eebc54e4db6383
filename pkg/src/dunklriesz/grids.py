"""Tensor-product quadrature grids carrying the m_k weight.

Per coordinate the rule is a symmetric composite on [-R, R]:

    [0, r0*2^-M]              Gauss-Jacobi panel, weight t^(2g) exact
    [r0*2^-m-1, r0*2^-m]      dyadically graded Gauss-Legendre panels
    [r0, R]                   uniform Gauss-Legendre panels

mirrored to the negative axis.  The dyadic grading keeps algebraic kernels
(|y|^-s against the weight) spectrally integrable panel by panel, which the
singular-integral routes rely on.  Grids never contain a node at 0, and the
mirror symmetry is exact, so every reflection acts by axis reversal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .rootsys import ReflectionSetup, compute_constants


@dataclass(frozen=True)
class GridSpec:
    """Per-coordinate quadrature parameters (QuadratureScheme of the design)."""

    radius: float = 12.0
    inner_radius: float = 1.0
    dyadic_levels: int = 8
    jacobi_points: int = 12
    dyadic_points: int = 8
    outer_panels: int = 16
    outer_points: int = 14

    @staticmethod
    def default_for(dimension: int) -> "GridSpec":
        if dimension == 1:
            return GridSpec()
        if dimension == 2:
            return GridSpec(radius=9.0, dyadic_levels=7, jacobi_points=10,
                            dyadic_points=7, outer_panels=10, outer_points=11)
        # N >= 3 used for gradient/norm work, keep it light
        return GridSpec(radius=7.0, dyadic_levels=4, jacobi_points=5,
                        dyadic_points=4, outer_panels=7, outer_points=9)

    def refined(self, factor: int = 2) -> "GridSpec":
        return replace(self,
                       jacobi_points=self.jacobi_points * factor,
                       dyadic_points=self.dyadic_points * factor,
                       outer_points=self.outer_points * factor)


def half_axis_rule(gamma: float, spec: GridSpec):
    """Positive-axis nodes/weights integrating f against 2^g t^(2g) dt on (0, R]."""
    nodes, weights = [], []
    a0 = spec.inner_radius * 2.0 ** (-spec.dyadic_levels)
    if gamma > 0:
        s, v = roots_jacobi(spec.jacobi_points, 0.0, 2.0 * gamma)
        nodes.append(a0 * (s + 1.0) / 2.0)
        weights.append(v * (a0 / 2.0) ** (2.0 * gamma + 1.0))
    else:
        s, v = roots_legendre(spec.jacobi_points)
        nodes.append(a0 * (s + 1.0) / 2.0)
        weights.append(v * (a0 / 2.0))
    s, v = roots_legendre(spec.dyadic_points)
    for m in range(spec.dyadic_levels):
        lo, hi = a0 * 2.0 ** m, a0 * 2.0 ** (m + 1)
        t = (hi - lo) / 2.0 * (s + 1.0) + lo
        nodes.append(t)
        weights.append(v * (hi - lo) / 2.0 * t ** (2.0 * gamma))
    s, v = roots_legendre(spec.outer_points)
    edges = np.linspace(spec.inner_radius, spec.radius, spec.outer_panels + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = (hi - lo) / 2.0 * (s + 1.0) + lo
        nodes.append(t)
        weights.append(v * (hi - lo) / 2.0 * t ** (2.0 * gamma))
    t = np.concatenate(nodes)
    w = np.concatenate(weights) * 2.0 ** gamma
    order = np.argsort(t)
    return t[order], w[order]


def axis_rule(gamma: float, spec: GridSpec):
    """Full symmetric rule on [-R, R]; mirror-exact, no node at zero."""
    t, w = half_axis_rule(gamma, spec)
    return np.concatenate([-t[::-1], t]), np.concatenate([w[::-1], w])


class Grid:
    """Symmetric tensor grid bound to a setup, with m_k quadrature weights."""

    def __init__(self, setup: ReflectionSetup, spec: GridSpec | None = None):
        self.setup = setup
        self.spec = spec or GridSpec.default_for(setup.dimension)
        self.axes = []
        self.axis_weights = []
        for g in setup.multiplicities:
            t, w = axis_rule(g, self.spec)
            self.axes.append(t)
            self.axis_weights.append(w)
        self.shape = tuple(len(t) for t in self.axes)
        self.constants = compute_constants(setup)
        self._cache: dict = {}

    @property
    def ndim(self) -> int:
        return self.setup.dimension

    def _cached(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    @property
    def weights(self) -> np.ndarray:
        """Tensor m_k quadrature weights, shape == self.shape."""
        def build():
            w = self.axis_weights[0]
            for aw in self.axis_weights[1:]:
                w = np.multiply.outer(w, aw)
            return w
        return self._cached("weights", build)

    def meshes(self):
        return self._cached("meshes",
                            lambda: np.meshgrid(*self.axes, indexing="ij"))

    def flat_points(self) -> np.ndarray:
        def build():
            return np.stack([m.ravel() for m in self.meshes()], axis=1)
        return self._cached("flat_points", build)

    def radii(self) -> np.ndarray:
        def build():
            r2 = np.zeros(self.shape)
            for m in self.meshes():
                r2 = r2 + m ** 2
            return np.sqrt(r2)
        return self._cached("radii", build)

    def reflect_values(self, values: np.ndarray, axis: int) -> np.ndarray:
        """values o sigma_axis, exact by mirror symmetry."""
        return np.flip(values, axis=axis)

    def negate_values(self, values: np.ndarray) -> np.ndarray:
        """values o (x -> -x)."""
        return values[tuple(slice(None, None, -1) for _ in range(values.ndim))]

    def integrate(self, values) -> complex:
        return complex(np.sum(self.weights * values))

    def norm_p(self, values, p: float) -> float:
        mags = np.abs(values)
        mags = np.maximum(mags, 1e-300)  # avoid underflow spikes in p powers
        return float(np.sum(self.weights * mags ** p) ** (1.0 / p))

    def norm2(self, values) -> float:
        return float(np.sqrt(np.sum(self.weights * np.abs(values) ** 2)))


class GridFunction:
    """Complex samples on a Grid."""

    def __init__(self, grid: Grid, values):
        values = np.asarray(values)
        if values.shape != grid.shape:
            raise ValueError(f"value shape {values.shape} != grid shape {grid.shape}")
        self.grid = grid
        self.values = values

    @classmethod
    def sample(cls, grid: Grid, fn) -> "GridFunction":
        """Sample a callable taking an (..., N) point array."""
        pts = grid.flat_points()
        vals = np.asarray(fn(pts)).reshape(grid.shape)
        return cls(grid, vals)

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.values.copy())

    def norm2(self) -> float:
        return self.grid.norm2(self.values)

    def norm_p(self, p: float) -> float:
        return self.grid.norm_p(self.values, p)

    def __add__(self, other):
        return GridFunction(self.grid, self.values + other.values)

    def __sub__(self, other):
        return GridFunction(self.grid, self.values - other.values)

    def __mul__(self, scalar):
        return GridFunction(self.grid, self.values * scalar)

    __rmul__ = __mul__


def tail_mass_fraction(f: GridFunction, fraction_radius: float = 0.9) -> float:
    """L1 mass beyond fraction_radius * R relative to the total; decay guard."""
    grid = f.grid
    r = grid.radii()
    total = float(np.sum(grid.weights * np.abs(f.values)))
    if total == 0.0:
        return 0.0
    tail = float(np.sum((grid.weights * np.abs(f.values))[r > fraction_radius * grid.spec.radius]))
    return tail / total
