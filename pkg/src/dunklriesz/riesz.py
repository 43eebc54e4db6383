"""Riesz transforms by three routes, the explicit kernel, the Hormander
estimator and the Riesz potential.

Routes
------
multiplier : F_k(R_j f) = -i xi_j/|xi| F_k f, applied on the spectral grid.
truncated  : d_k/c_k * lim_{eps->0} int_{|y|>eps} tau_x f(-y) y_j |y|^-p_k dm_k(y),
             realized on a polar rule with dyadic shells and Richardson
             extrapolation in the cutoff.
kernel     : int K_j(x,y) f(y) dm_k(y) for x with its orbit separated from
             supp f, with K_j assembled from the intertwining quadrature.

All three use the effective normalization riesz_norm = d_k / c_k; the bare
d_k would make the singular-integral routes disagree with the multiplier
by a factor c_k (it normalizes the defining integral against the
Gaussian-normalized measure).  The k = 0 reduction then lands exactly on
the classical constant Gamma((N+1)/2)/pi^((N+1)/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .grids import Grid, GridFunction
from .kernel import intertwining_measure, rank1_imag, rank1_reference_rule
from .quadrules import (circle_angular_rule, dyadic_edges, gauss_panels,
                        graded_panels, graded_panels_reverse,
                        radial_power_panel)
from .rootsys import (ReflectionSetup, compute_constants, orbit_distance,
                      orbit_distance_many)
from .transform import (dunkl_transform, inverse_dunkl_transform,
                        spectral_synthesis_at)
from .translate import translation_spectrum

SINGULAR_PAIR_TOL = 1e-9
SEPARATION_MIN = 1e-3


def _axis_reference(setup: ReflectionSetup, nmu: int):
    ts, ws = [], []
    for g in setup.multiplicities:
        t, w = rank1_reference_rule(g, nmu)
        ts.append(t)
        ws.append(w)
    return ts, ws


# ---------------------------------------------------------------------------
# the A metric and the explicit kernel
# ---------------------------------------------------------------------------

def metric_A(setup: ReflectionSetup, x, y, eta) -> float:
    """A(x,y,eta) = sqrt(|x|^2 + |y|^2 - 2<y,eta>), radicand clamped at 0.

    eta must lie in the coordinate box co(G.x).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    eta = np.asarray(eta, dtype=float)
    if np.any(np.abs(eta) > np.abs(x) + 1e-12 * (1.0 + np.abs(x))):
        raise ValueError("eta lies outside the support box co(G.x)")
    rad = float(x @ x + y @ y - 2.0 * (y @ eta))
    return math.sqrt(max(rad, 0.0))


def kernel_K1(setup: ReflectionSetup, j: int, x, y, npts: int = 48) -> float:
    """Unnormalized first kernel component: int (eta_j - y_j)/A^p_k dmu_x."""
    _require_regular_pair(setup, x, y)
    mu = intertwining_measure(setup, x, npts)
    consts = compute_constants(setup)
    y = np.asarray(y, dtype=float)
    A2 = np.sum(np.asarray(x, float) ** 2) + y @ y - 2.0 * (mu.nodes @ y)
    A = np.sqrt(np.maximum(A2, 0.0))
    return float(np.sum(mu.weights * (mu.nodes[:, j] - y[j]) / A ** consts.p_k))


def kernel_Kalpha(setup: ReflectionSetup, alpha_index: int, x, y,
                  npts: int = 48, hyperplane_tol: float = 1e-6) -> float:
    """Unnormalized reflection component for the positive root along alpha_index.

    Near the hyperplane <y, alpha> = 0 the bracket vanishes with the
    denominator; below hyperplane_tol * |y| the quotient is replaced by its
    analytic limit 2 (p_k - 2) int eta_a / A^p_k dmu_x.
    """
    _require_regular_pair(setup, x, y)
    mu = intertwining_measure(setup, x, npts)
    consts = compute_constants(setup)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    a = alpha_index
    ny = float(np.linalg.norm(y))
    nx2 = float(x @ x)
    if abs(y[a]) < hyperplane_tol * max(ny, 1e-300):
        y0 = y.copy()
        y0[a] = 0.0
        A0 = np.sqrt(np.maximum(nx2 + y0 @ y0 - 2.0 * (mu.nodes @ y0), 0.0))
        return float(np.sum(mu.weights * 2.0 * (consts.p_k - 2.0)
                            * mu.nodes[:, a] / A0 ** consts.p_k))
    ys = y.copy()
    ys[a] = -ys[a]
    A = np.sqrt(np.maximum(nx2 + y @ y - 2.0 * (mu.nodes @ y), 0.0))
    As = np.sqrt(np.maximum(nx2 + y @ y - 2.0 * (mu.nodes @ ys), 0.0))
    expo = 2.0 - consts.p_k
    return float(np.sum(mu.weights * (A ** expo - As ** expo)) / y[a])


def kernel_full(setup: ReflectionSetup, j: int, x, y, npts: int = 48) -> float:
    """K_j(x,y): riesz_norm * (K1 + sum_alpha k(a) a_j/(p_k-2) K^(a)).

    For the sign-flip group only the root along axis j contributes to the
    sum (the others have vanishing j-component), and its sqrt(2) factors
    cancel between a_j and <y, a>.
    """
    consts = compute_constants(setup)
    val = kernel_K1(setup, j, x, y, npts)
    g = setup.multiplicities[j]
    if g > 0:
        # p_k - 2 = 2 gamma_k + N - 1 > 0 whenever any multiplicity is positive
        val += g / (consts.p_k - 2.0) * kernel_Kalpha(setup, j, x, y, npts)
    return consts.riesz_norm * val


def kernel_values(setup: ReflectionSetup, j: int, x, Y, nmu: int = 48,
                  check_sandwich: bool = True) -> np.ndarray:
    """K_j(x, y) over rows of Y through the selected backend."""
    consts = compute_constants(setup)
    ts, ws = _axis_reference(setup, nmu)
    return _backend.kernel_many_y(setup.multiplicities, consts.p_k,
                                  consts.riesz_norm, j, np.asarray(x, float),
                                  Y, ts, ws, check_sandwich=check_sandwich)


def kernel_values_x(setup: ReflectionSetup, j: int, X, y, nmu: int = 48,
                    check_sandwich: bool = True) -> np.ndarray:
    """K_j(x, y) over rows of X through the selected backend."""
    consts = compute_constants(setup)
    ts, ws = _axis_reference(setup, nmu)
    return _backend.kernel_many_x(setup.multiplicities, consts.p_k,
                                  consts.riesz_norm, j, X,
                                  np.asarray(y, float), ts, ws,
                                  check_sandwich=check_sandwich)


def _require_regular_pair(setup: ReflectionSetup, x, y):
    if orbit_distance(setup, np.asarray(x, float), np.asarray(y, float)) < SINGULAR_PAIR_TOL:
        raise ValueError("kernel is singular: y meets the orbit of x")


@dataclass
class KernelField:
    """Lazily evaluated two-point kernel (x, y) -> K_j(x, y)."""

    setup: ReflectionSetup
    j: int
    mu_points: int = 48
    singular_tol: float = SINGULAR_PAIR_TOL

    def __call__(self, x, y) -> float:
        return kernel_full(self.setup, self.j, x, y, self.mu_points)

    def component_K1(self, x, y) -> float:
        return kernel_K1(self.setup, self.j, x, y, self.mu_points)

    def component_Kalpha(self, alpha_index: int, x, y) -> float:
        return kernel_Kalpha(self.setup, alpha_index, x, y, self.mu_points)


@dataclass(frozen=True)
class SeparationGeometry:
    """Region {x : min_g |g.x - center| > 2 |y - y0|}."""

    setup: ReflectionSetup
    y: tuple
    y0: tuple
    center_on_y0: bool = True

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.y0 if self.center_on_y0 else self.y, dtype=float)

    @property
    def exclusion_radius(self) -> float:
        return 2.0 * float(np.linalg.norm(np.asarray(self.y) - np.asarray(self.y0)))

    def contains(self, x) -> bool:
        return orbit_distance(self.setup, np.asarray(x, float), self.center) \
            > self.exclusion_radius

    def contains_many(self, X) -> np.ndarray:
        return orbit_distance_many(self.setup, X, self.center) > self.exclusion_radius


# ---------------------------------------------------------------------------
# multiplier route
# ---------------------------------------------------------------------------

def riesz_multiplier_spectrum(F: GridFunction, j: int) -> GridFunction:
    """Multiply a spectrum by -i xi_j / |xi| (zero at a xi = 0 node)."""
    grid = F.grid
    xi_j = grid.meshes()[j]
    nrm = grid.radii()
    mult = np.where(nrm == 0.0, 0.0, -1j * xi_j / np.where(nrm == 0.0, 1.0, nrm))
    return GridFunction(grid, mult * F.values)


def riesz_multiplier(f: GridFunction, j: int, spectrum: GridFunction | None = None) -> GridFunction:
    """R_j f on the grid via the spectral multiplier."""
    F = spectrum if spectrum is not None else dunkl_transform(f)
    return inverse_dunkl_transform(riesz_multiplier_spectrum(F, j), tail_tol=None)


def riesz_multiplier_at(points, f: GridFunction, j: int,
                        spectrum: GridFunction | None = None) -> np.ndarray:
    """R_j f evaluated off-grid (pointwise spectral synthesis)."""
    F = spectrum if spectrum is not None else dunkl_transform(f)
    return spectral_synthesis_at(points, riesz_multiplier_spectrum(F, j))


# ---------------------------------------------------------------------------
# truncated singular-integral route
# ---------------------------------------------------------------------------

@dataclass
class TruncatedRiesz:
    """Cutoff sweep of the truncated singular integral plus its limit."""

    eps: np.ndarray
    values: np.ndarray
    limit: float

    def table(self):
        return list(zip(self.eps.tolist(), self.values.tolist()))


def _pv_polar_nodes(setup: ReflectionSetup, r_inner: float, r0: float, r_max: float,
                    nd: int, nper: int, n_ang_per_unit: float = 1.4):
    """Polar nodes (m, N) with m_k weights and radii for the pv integrals."""
    n = setup.dimension
    gk = sum(setup.multiplicities)
    edges_in = dyadic_edges(r_inner, r0)
    edges_out = np.linspace(r0, r_max, max(2, int(round((r_max - r0) / 0.75)) + 1))
    pts, wts, rads = [], [], []
    if n == 1:
        r1, w1 = gauss_panels(edges_in, nd)
        r2, w2 = gauss_panels(edges_out, nper)
        r = np.concatenate([r1, r2])
        wr = np.concatenate([w1, w2]) * 2.0 ** gk * r ** (2.0 * gk)
        pts = np.concatenate([-r, r])[:, None]
        wts = np.concatenate([wr, wr])
        rads = np.abs(pts[:, 0])
        return pts, wts, rads
    g1, g2 = setup.multiplicities
    for edges, npts in ((edges_in, nd), (np.asarray(edges_out), nper)):
        for lo, hi in zip(edges[:-1], edges[1:]):
            r, wr = gauss_panels([lo, hi], npts)
            nang = max(6, int(math.ceil(n_ang_per_unit * hi)) + 4)
            th, wth = circle_angular_rule(g1, g2, nang)
            R, TH = np.meshgrid(r, th, indexing="ij")
            pts.append(np.stack([(R * np.cos(TH)).ravel(),
                                 (R * np.sin(TH)).ravel()], axis=1))
            wmat = (wr[:, None] * wth[None, :]
                    * 2.0 ** gk * R ** (2.0 * gk + n - 1.0))
            wts.append(wmat.ravel())
            rads.append(R.ravel())
    return np.concatenate(pts), np.concatenate(wts), np.concatenate(rads)


def _richardson_limit(eps: np.ndarray, vals: np.ndarray, max_depth: int = 4) -> float:
    """Neville extrapolation to eps = 0 for a ratio-2 geometric sequence."""
    use = min(len(vals), max_depth + 1)
    T = [list(vals[-use:])]
    for k in range(1, use):
        prev = T[-1]
        T.append([(2.0 ** k * prev[i + 1] - prev[i]) / (2.0 ** k - 1.0)
                  for i in range(len(prev) - 1)])
    return float(T[-1][0])


def riesz_truncated(f: GridFunction, j: int, x, eps_sequence=None,
                    spectrum: GridFunction | None = None,
                    nd: int = 10, nper: int = 11) -> TruncatedRiesz:
    """Cutoff singular-integral route at the point x.

    The y-integral runs on a dedicated polar rule whose dyadic shells align
    with the cutoff sequence; tau_x f(-y) is synthesized spectrally at the
    polar nodes.  The rule extends to |x| + R because the translate of f
    concentrates around y = x.  The reported limit is the Richardson
    extrapolation of the partial sums (the integrand's odd pairing makes
    them linear in eps).
    """
    grid = f.grid
    setup = grid.setup
    consts = grid.constants
    x = np.asarray(x, dtype=float)
    r0 = grid.spec.inner_radius
    if eps_sequence is None:
        eps_sequence = r0 * 2.0 ** (-np.arange(15.0))
    else:
        eps_sequence = np.asarray(eps_sequence, dtype=float)
        if np.any(np.diff(eps_sequence) >= 0):
            raise ValueError("eps_sequence must be strictly decreasing")
    r_max = grid.spec.radius + float(np.linalg.norm(x))
    pts, wts, rads = _pv_polar_nodes(setup, float(eps_sequence[-1]), r0,
                                     r_max, nd, nper)
    F = spectrum if spectrum is not None else dunkl_transform(f)
    tau_spec = translation_spectrum(F, x)
    tau = spectral_synthesis_at(-pts, tau_spec).real
    integrand = (consts.riesz_norm * tau * pts[:, j]
                 / rads ** consts.p_k * wts)
    vals = np.array([np.sum(integrand[rads > e * (1.0 - 1e-12)])
                     for e in eps_sequence])
    return TruncatedRiesz(eps=np.asarray(eps_sequence), values=vals,
                          limit=_richardson_limit(eps_sequence, vals))


# ---------------------------------------------------------------------------
# kernel route
# ---------------------------------------------------------------------------

def riesz_kernel_route(f: GridFunction, j: int, x, nmu: int = 48,
                       separation: float = SEPARATION_MIN,
                       support_rtol: float = 1e-15) -> float:
    """R_j f(x) = int K_j(x, y) f(y) dm_k(y) on separated configurations.

    Raises when some group image of x comes closer than `separation` to the
    numerical support of f, where the integral representation does not
    apply.
    """
    grid = f.grid
    setup = grid.setup
    x = np.asarray(x, dtype=float)
    vals = np.asarray(f.values)
    flat = np.abs(vals).ravel()
    mask = flat > support_rtol * flat.max()
    pts = grid.flat_points()[mask]
    sep = float(np.min(orbit_distance_many(setup, pts, x)))
    if sep < separation:
        raise ValueError(
            "integral representation requires the orbit of x separated from "
            f"supp(f): measured separation {sep:.3e} < {separation:.1e}")
    kv = kernel_values(setup, j, x, pts, nmu=nmu)
    w = grid.weights.ravel()[mask]
    fv = vals.ravel()[mask]
    out = np.sum(w * kv * fv)
    return float(out.real) if not np.iscomplexobj(vals) else out


# ---------------------------------------------------------------------------
# Hormander-condition estimator
# ---------------------------------------------------------------------------

@dataclass
class HormanderEstimate:
    value: float
    tail_bound: float
    npoints: int
    truncation: float
    region: SeparationGeometry


def hormander_estimate(setup: ReflectionSetup, j: int, y, y0,
                       truncation: float | None = None,
                       center_on_y0: bool = True,
                       nmu: int = 24, scale: int = 1) -> HormanderEstimate:
    """m_k-integral of |K_j(x,y) - K_j(x,y0)| over the separated region.

    The region {min_g |g.x - center| > 2|y - y0|} is handled exactly:
    intervals in one dimension, radius-dependent admissible arcs in two.
    Quadrature panels grade dyadically into the boundary layer around the
    orbit tube.  Returns the truncated value plus a far-field bound
    extrapolated from the outermost shell (the integrand decays like the
    kernel gradient, one power beyond the measure growth).
    """
    y = np.asarray(y, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    delta = float(np.linalg.norm(y - y0))
    if delta == 0.0:
        raise ValueError("y and y0 must differ")
    region = SeparationGeometry(setup, tuple(y), tuple(y0), center_on_y0)
    if truncation is None:
        truncation = 40.0 * max(1.0, float(np.linalg.norm(region.center)))
    # the integral is exactly scale invariant (kernel homogeneity against
    # measure growth); normalize the pair so the panel structure is tuned
    # once, at unit center norm
    scale_norm = float(np.linalg.norm(region.center))
    if scale_norm > 0:
        return _hormander_core(setup, j, y / scale_norm, y0 / scale_norm,
                               truncation / scale_norm, center_on_y0,
                               nmu, scale, region, float(truncation))
    return _hormander_core(setup, j, y, y0, truncation, center_on_y0,
                           nmu, scale, region, float(truncation))


_MU_LADDER = (8, 12, 16, 24, 32, 48, 64, 96, 128, 192)


def _mu_requirement(setup, X, y, y0, center, delta):
    """Per-node intertwining-rule size for ~1e-4 kernel accuracy.

    The Gauss-Jacobi error decays like rho^(-2n) with
    rho ~ 1 + sqrt(2(t*-1)) and t*-1 ~ d^2 / (2|x||y|), d the orbit
    separation; invert for n.  Most nodes sit far from the orbit tube and
    need only a handful of nodes; the boundary layer gets the fine rules.
    """
    d_c = orbit_distance_many(setup, X, center)
    d_eff = np.maximum(d_c - delta, 1e-12)
    scale_y = max(float(np.linalg.norm(y)), float(np.linalg.norm(y0)), 1e-9)
    t1 = d_eff ** 2 / (2.0 * np.maximum(np.linalg.norm(X, axis=1), 1e-9)
                       * scale_y + 1e-300)
    req = np.ceil(4.6 / np.sqrt(2.0 * np.minimum(np.maximum(t1, 1e-12), 4.0)))
    return req.astype(int)


def _hormander_core(setup, j, y, y0, truncation, center_on_y0, nmu, scale,
                    region, reported_truncation):
    n = setup.dimension
    local = SeparationGeometry(setup, tuple(y), tuple(y0), center_on_y0)
    if n == 1:
        X, wm = _hormander_nodes_1d(setup, local, truncation, scale)
    elif n == 2:
        X, wm = _hormander_nodes_2d(setup, local, truncation, scale)
    else:
        raise NotImplementedError("Hormander sweep implemented for N <= 2")
    req = _mu_requirement(setup, X, y, y0, local.center,
                          float(np.linalg.norm(np.asarray(y) - np.asarray(y0))))
    req = np.clip(req, 8, 3 * nmu) * scale
    contrib = np.empty(len(X))
    for level in _MU_LADDER:
        sel = (req <= level) if level == _MU_LADDER[0] else \
            (req > prev) & (req <= level)
        prev = level
        if not sel.any():
            continue
        Ky = kernel_values_x(setup, j, X[sel], y, nmu=level)
        Ky0 = kernel_values_x(setup, j, X[sel], y0, nmu=level)
        contrib[sel] = np.abs(Ky - Ky0) * wm[sel]
    leftover = req > _MU_LADDER[-1]
    if leftover.any():
        Ky = kernel_values_x(setup, j, X[leftover], y, nmu=int(req.max()))
        Ky0 = kernel_values_x(setup, j, X[leftover], y0, nmu=int(req.max()))
        contrib[leftover] = np.abs(Ky - Ky0) * wm[leftover]
    value = float(np.sum(contrib))
    # outermost decade estimates the tail: integrand ~ c r^-2 => tail ~ band/0.1
    r = np.linalg.norm(X, axis=1)
    band = r > 0.9 * truncation
    tail = float(np.sum(contrib[band])) * 9.0 if band.any() else 0.0
    return HormanderEstimate(value=value, tail_bound=tail, npoints=len(X),
                             truncation=reported_truncation, region=region)


def _hormander_nodes_1d(setup, region: SeparationGeometry, R: float, scale: int):
    c = abs(float(region.center[0]))
    rex = region.exclusion_radius
    nd = 8 * scale
    h0 = max(rex / 8.0, 1e-7)
    # excluded set: [c-rex, c+rex] U [-c-rex, -c+rex]; complement in [-R, R]
    cuts = sorted([(c - rex, c + rex), (-c - rex, -c + rex)])
    merged = []
    for lo, hi in cuts:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    segs = []
    prev = -R
    for lo, hi in merged:
        if lo > prev:
            segs.append((prev, min(lo, R)))
        prev = max(prev, hi)
    if prev < R:
        segs.append((prev, R))
    gk = setup.multiplicities[0]
    # grade into both segment ends (exclusion boundary layers); split at 0
    # so the |x|^(2g) kink sits on a panel edge
    xs, ws = [], []
    for lo, hi in segs:
        if hi <= lo:
            continue
        pieces = [(lo, hi)]
        if lo < 0.0 < hi:
            pieces = [(lo, 0.0), (0.0, hi)]
        for a, b in pieces:
            mid = 0.5 * (a + b)
            t1, w1 = graded_panels(a, mid, h0, nd)
            t2, w2 = graded_panels_reverse(mid, b, h0, nd)
            xs.extend([t1, t2])
            ws.extend([w1, w2])
    x = np.concatenate(xs)
    w = np.concatenate(ws) * 2.0 ** gk * np.abs(x) ** (2.0 * gk)
    return x[:, None], w


def _hormander_nodes_2d(setup, region: SeparationGeometry, R: float, scale: int):
    g1, g2 = setup.multiplicities
    gk = g1 + g2
    c = region.center
    rex = region.exclusion_radius
    rho = float(np.linalg.norm(c))
    orbit_angles = [math.atan2(s2 * c[1], s1 * c[0]) % (2 * math.pi)
                    for s1 in (1, -1) for s2 in (1, -1)]
    ndr = 5 * scale
    nda = 3 * scale
    h0 = max(rex / 8.0, 1e-7)
    r_lo, r_hi = max(0.0, rho - rex), rho + rex
    rs, wrs = [], []
    if r_lo > 1e-12:
        a0 = min(0.25 * r_lo, 0.5)
        rj, wj = radial_power_panel(a0, 2.0 * gk + 1.0, ndr)
        rs.append(rj)
        wrs.append(wj / rj ** (2.0 * gk + 1.0))
        t, wt = graded_panels_reverse(a0, r_lo, h0, ndr)
        rs.append(t)
        wrs.append(wt)
    band_edges = np.linspace(r_lo, r_hi, 5)
    t, wt = gauss_panels(band_edges, ndr)
    rs.append(t)
    wrs.append(wt)
    t, wt = graded_panels(r_hi, R, h0, ndr)
    rs.append(t)
    wrs.append(wt)
    r_all = np.concatenate(rs)
    wr_all = np.concatenate(wrs)
    pts, wts = [], []
    for r, wr in zip(r_all, wr_all):
        arcs = _admissible_arcs(r, orbit_angles, rho, rex)
        if not arcs:
            continue
        th, wth = _arc_rule(arcs, h0_theta=max(rex / max(r, 1e-9) / 6.0, 1e-8),
                            nd=nda)
        m = (2.0 ** gk * r ** (2.0 * gk + 1.0)
             * np.abs(np.cos(th)) ** (2.0 * g1)
             * np.abs(np.sin(th)) ** (2.0 * g2) * wth * wr)
        pts.append(np.stack([r * np.cos(th), r * np.sin(th)], axis=1))
        wts.append(m)
    return np.concatenate(pts), np.concatenate(wts)


def _admissible_arcs(r, orbit_angles, rho, rex):
    """[0, 2pi) minus the angular shadows of the orbit disks at radius r."""
    two_pi = 2.0 * math.pi
    if rho == 0.0:
        return [] if r <= rex else [(0.0, two_pi)]
    cosa = (r * r + rho * rho - rex * rex) / (2.0 * r * rho)
    if cosa >= 1.0:
        return [(0.0, two_pi)]
    if cosa <= -1.0:
        return []
    half = math.acos(cosa)
    events = []
    for phi in orbit_angles:
        lo, hi = (phi - half) % two_pi, (phi + half) % two_pi
        if lo <= hi:
            events.append((lo, hi))
        else:
            events.append((lo, two_pi))
            events.append((0.0, hi))
    events.sort()
    merged = []
    for lo, hi in events:
        if merged and lo <= merged[-1][1] + 1e-15:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    arcs = []
    prev = 0.0
    for lo, hi in merged:
        if lo > prev + 1e-13:
            arcs.append((prev, lo))
        prev = max(prev, hi)
    if prev < two_pi - 1e-13:
        arcs.append((prev, two_pi))
    return arcs


def _arc_rule(arcs, h0_theta: float, nd: int):
    """GL panels over arcs: split at the axis kinks of the angular weight,
    grade into the arc endpoints (exclusion boundary layer).

    Fine grading applies only at true exclusion boundaries; axis splits and
    the seam of a full circle carry no layer, so panels there are floored
    at a fraction of the sub-arc length.
    """
    two_pi = 2.0 * math.pi
    axes = [0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi, two_pi]
    full_circle = (len(arcs) == 1 and arcs[0][0] <= 1e-13
                   and arcs[0][1] >= two_pi - 1e-13)
    ths, wts = [], []
    for lo, hi in arcs:
        pts = [lo] + [a for a in axes if lo < a < hi] + [hi]
        for a, b in zip(pts[:-1], pts[1:]):
            if b - a < 1e-13:
                continue
            mid = 0.5 * (a + b)
            coarse = (b - a) / 16.0
            h_lo = h0_theta if (a == lo and not full_circle) else max(h0_theta, coarse)
            h_hi = h0_theta if (b == hi and not full_circle) else max(h0_theta, coarse)
            t1, w1 = graded_panels(a, mid, h_lo, nd)
            t2, w2 = graded_panels_reverse(mid, b, h_hi, nd)
            ths.extend([t1, t2])
            wts.extend([w1, w2])
    return np.concatenate(ths), np.concatenate(wts)


# ---------------------------------------------------------------------------
# Riesz potential
# ---------------------------------------------------------------------------

EXTENSION_FACTOR = 5.0 / 3.0   # spectral synthesis stays accurate this far out


def riesz_potential(f: GridFunction, beta: float, x,
                    spectrum: GridFunction | None = None,
                    tail_amplitude: float | None = None) -> float:
    """I_k^beta f(x) by m_k quadrature of tau_x f against |y|^(beta-2g-N).

    Requires 0 < beta < 2 gamma_k + N.  In one dimension the innermost
    panel is swapped for a Gauss rule matched to the |y|^(beta-1)
    singularity of kernel*weight, and the integration is extended past the
    grid radius by pointwise synthesis (the spectrum resolves the
    oscillation well beyond R).  tail_amplitude, if given, is the fitted
    coefficient of the |y|^-p_k far field of f, correcting the remaining
    truncation of slowly-decaying integrands (~0 for rapidly decaying
    inputs).
    """
    grid = f.grid
    setup = grid.setup
    consts = grid.constants
    n = setup.dimension
    if not (0.0 < beta < 2.0 * consts.gamma_k + n):
        raise ValueError("beta outside (0, 2 gamma_k + N)")
    F = spectrum if spectrum is not None else dunkl_transform(f)
    tau_spec = translation_spectrum(F, np.asarray(x, dtype=float))
    tau = inverse_dunkl_transform(tau_spec, tail_tol=None).values
    sigma = 2.0 * consts.gamma_k + n - beta
    cpot = 1.0 / (_potential_constant(consts, n, beta) * consts.c_k)
    r = grid.radii()
    wk = grid.weights * r ** (-sigma)
    r_cut = grid.spec.radius
    if n == 1:
        a_in = grid.spec.inner_radius * 2.0 ** (-4)
        inner = np.abs(grid.axes[0]) <= a_in * (1.0 + 1e-12)
        wk = np.where(inner, 0.0, wk)
        val = float(np.sum(wk * tau.real))
        val += _inner_panel_1d(tau_spec, beta, a_in)
        val, r_cut = _extended_outer_1d(tau_spec, sigma, val, r_cut)
    else:
        val = float(np.sum(wk * tau.real))
    out = cpot * val
    if tail_amplitude is not None and tail_amplitude != 0.0:
        out += (cpot * tail_amplitude * consts.sphere_factor
                * r_cut ** (beta - consts.p_k) / (consts.p_k - beta))
    return out


def _extended_outer_1d(tau_spec: GridFunction, sigma: float, val: float,
                       R: float):
    """Add [R, EXTENSION_FACTOR R] via synthesis at off-grid nodes."""
    grid = tau_spec.grid
    gk = grid.constants.gamma_k
    r_ext = EXTENSION_FACTOR * R
    rr, wr = gauss_panels(np.linspace(R, r_ext, 9), 10)
    pts = np.concatenate([-rr[::-1], rr])[:, None]
    w = np.concatenate([wr[::-1], wr])
    w = w * 2.0 ** gk * np.abs(pts[:, 0]) ** (2.0 * gk - sigma)
    tau = spectral_synthesis_at(pts, tau_spec).real
    return val + float(np.sum(w * tau)), r_ext


def _potential_constant(consts, n: int, beta: float) -> float:
    """Normalizing constant of the potential (Gaussian-measure convention)."""
    return (2.0 ** (-consts.gamma_k - n / 2.0 + beta)
            * math.gamma(beta / 2.0)
            / math.gamma(consts.gamma_k + (n - beta) / 2.0))


def _inner_panel_1d(tau_spec: GridFunction, beta: float, a_in: float) -> float:
    """[-a_in, a_in] with a Gauss-Jacobi rule exact for |y|^(beta-1)."""
    grid = tau_spec.grid
    gk = grid.constants.gamma_k
    yj, wj = radial_power_panel(a_in, beta - 1.0, 12)
    wj = wj * 2.0 ** gk
    pts = np.concatenate([-yj[::-1], yj])[:, None]
    w = np.concatenate([wj[::-1], wj])
    tau = spectral_synthesis_at(pts, tau_spec).real
    return float(np.sum(w * tau))


def radial_tail_amplitude(f: GridFunction) -> float:
    """Fit A in f(y) ~ A |y|^-p_k from the outer shells of the grid."""
    grid = f.grid
    consts = grid.constants
    r = grid.radii()
    R = grid.spec.radius
    shell = (r > 0.55 * R) & (r < 0.9 * R)
    w = grid.weights[shell]
    vals = np.asarray(f.values).real[shell]
    return float(np.sum(w * vals * r[shell] ** consts.p_k) / np.sum(w))


def riesz_potential_many(f: GridFunction, beta: float, X,
                         tail_correct: bool = True,
                         spectrum: GridFunction | None = None) -> np.ndarray:
    """I_k^beta f at several points, sharing the spectrum and tail fit.

    Pass the spectrum when f was synthesized from one (e.g. a multiplier
    output): re-transforming the truncated slow tail would lose accuracy.
    """
    F = spectrum if spectrum is not None else dunkl_transform(f, tail_tol=None)
    amp = radial_tail_amplitude(f) if tail_correct else None
    return np.array([riesz_potential(f, beta, x, spectrum=F, tail_amplitude=amp)
                     for x in np.atleast_2d(np.asarray(X, dtype=float))])
