"""Panelized Gauss rules shared by the singular-integral machinery."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

TWO_PI = 2.0 * math.pi


def gauss_panels(edges, npts: int):
    """Gauss-Legendre nodes/weights on consecutive [edges[i], edges[i+1]]."""
    s, v = roots_legendre(npts)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo <= 0:
            continue
        nodes.append((hi - lo) / 2.0 * (s + 1.0) + lo)
        weights.append(v * (hi - lo) / 2.0)
    if not nodes:
        return np.empty(0), np.empty(0)
    return np.concatenate(nodes), np.concatenate(weights)


def graded_edges(lo: float, hi: float, h0: float, grow: float = 2.0):
    """Panel edges on [lo, hi] with width h0 at lo growing geometrically."""
    if hi <= lo:
        return [lo, hi]
    edges = [lo]
    h = max(h0, (hi - lo) * 1e-12)
    while edges[-1] + h < hi:
        edges.append(edges[-1] + h)
        h *= grow
    edges.append(hi)
    return edges


def graded_panels(lo: float, hi: float, h0: float, npts: int, grow: float = 2.0):
    """GL panels on [lo, hi] graded from the lo end."""
    return gauss_panels(graded_edges(lo, hi, h0, grow), npts)


def graded_panels_reverse(lo: float, hi: float, h0: float, npts: int, grow: float = 2.0):
    """GL panels on [lo, hi] graded from the hi end."""
    t, w = graded_panels(0.0, hi - lo, h0, npts, grow)
    return hi - t[::-1], w[::-1]


def dyadic_edges(r_min: float, r_max: float):
    """Edges r_max * 2^-m descending to the first edge <= r_min, ascending order."""
    edges = [r_max]
    while edges[-1] > r_min * (1 + 1e-12):
        edges.append(edges[-1] / 2.0)
    return edges[::-1]


def radial_power_panel(r_hi: float, exponent: float, npts: int):
    """Rule with sum w_i f(r_i) ~ int_0^{r_hi} f(r) r^exponent dr, exact in f.

    The power factor is folded into the weights (Gauss-Jacobi under the map
    r = r_hi (s+1)/2), so the caller evaluates the smooth part only.
    """
    s, v = roots_jacobi(npts, 0.0, exponent)
    r = r_hi * (s + 1.0) / 2.0
    w = v * (r_hi / 2.0) ** (exponent + 1.0)
    return r, w


def quadrant_angular_rule(g1: float, g2: float, npts: int):
    """Nodes/weights with sum w h(th) ~ int_0^{pi/2} h(th) cos^{2g1} sin^{2g2} dth.

    Gauss-Jacobi in u = sin^2(th); exact for the angular m_k weight.
    """
    a, b = g1 - 0.5, g2 - 0.5
    s, v = roots_jacobi(npts, a, b)
    u = (s + 1.0) / 2.0
    th = np.arcsin(np.sqrt(u))
    w = v * 2.0 ** (-(a + b + 1.0)) * 0.5
    return th, w


def circle_angular_rule(g1: float, g2: float, npts: int):
    """Full-circle rule for the weight |cos|^{2g1} |sin|^{2g2}."""
    th, w = quadrant_angular_rule(g1, g2, npts)
    full_th = np.concatenate([th, math.pi - th, math.pi + th, TWO_PI - th])
    full_w = np.concatenate([w, w, w, w])
    return full_th, full_w
