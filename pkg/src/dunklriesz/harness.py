"""Empirical L^p scans and the generalized Riesz / Sobolev inequality checks.

Sup ratios over a finite corpus are lower bounds on operator norms and are
reported as such; the verifiable structure is elsewhere: the p = 2 ratio
is capped by the unit-modulus multiplier, the second-derivative
factorization holds spectrally, and the Sobolev pairing is the unique
scale-invariant one (checked through a dilation sweep).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .grids import Grid, GridFunction
from .riesz import riesz_multiplier, riesz_potential_many
from .transform import dunkl_transform, grid_dunkl_op
from .translate import RadialProfile


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorpusFunction:
    label: str
    fn: object  # callable on point arrays (..., N)

    def sample(self, grid: Grid) -> GridFunction:
        return GridFunction.sample(grid, self.fn)


def _vec(dim, *vals):
    base = list(vals) + [0.3] * dim
    return np.array(base[:dim])


def deterministic_corpus(dim: int) -> list:
    """Twelve smooth decaying functions used across all defect sweeps."""
    b = _vec(dim, 2.0, -1.1, 0.7)
    a = _vec(dim, 0.5, -0.3, 0.2)
    rho, steep = 5.5, 12.0  # steep enough that the spectrum fits the xi-window

    def nrm2(p):
        return np.sum(p ** 2, axis=-1)

    def bump(p):
        r2 = nrm2(p) / rho ** 2
        out = np.zeros(r2.shape)
        inside = r2 < 1.0
        out[inside] = np.exp(-steep / (1.0 - r2[inside]))
        return out

    fns = [
        ("gauss_half", lambda p: np.exp(-0.5 * nrm2(p))),
        ("gauss_one", lambda p: np.exp(-nrm2(p))),
        # spectral width ~ sqrt(8 a log(1e7)) must fit the xi-window
        ("gauss_narrow", lambda p: np.exp(-1.25 * nrm2(p))),
        ("odd_gauss", lambda p: p[..., 0] * np.exp(-0.5 * nrm2(p))),
        ("radial_sq", lambda p: nrm2(p) * np.exp(-nrm2(p))),
        ("cos_mod", lambda p: np.cos(p @ b) * np.exp(-0.5 * nrm2(p))),
        ("sin_mod", lambda p: np.sin(p @ b) * np.exp(-0.5 * nrm2(p))),
        ("bump", bump),
        ("bump_odd", lambda p: p[..., 0] * bump(p)),
        ("shifted_gauss", lambda p: np.exp(-0.5 * nrm2(p - a))),
        ("hermite_like", lambda p: (p[..., 0] ** 4 - 3.0 * nrm2(p))
                         * np.exp(-0.6 * nrm2(p))),
        ("mixture", lambda p: 0.7 * np.exp(-nrm2(p))
                    - 0.3 * p[..., 0] ** 2 * np.exp(-nrm2(p))),
    ]
    return [CorpusFunction(lbl, fn) for lbl, fn in fns]


def random_corpus(dim: int, count: int, seed: int) -> list:
    """Seeded smooth superpositions: modulated, shifted Gaussians."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        terms = []
        for _ in range(3):
            c = rng.uniform(-1.0, 1.0)
            aa = rng.uniform(0.5, 1.5)
            bb = rng.uniform(-2.0, 2.0, size=dim)
            ss = rng.uniform(-0.8, 0.8, size=dim)
            ph = rng.uniform(0.0, 2.0 * math.pi)
            terms.append((c, aa, bb, ss, ph))

        def fn(p, terms=terms):
            p = np.asarray(p, dtype=float)
            val = np.zeros(p.shape[:-1])
            for c, aa, bb, ss, ph in terms:
                val = val + c * np.cos(p @ bb + ph) * np.exp(
                    -aa * np.sum((p - ss) ** 2, axis=-1))
            return val

        out.append(CorpusFunction(f"random_{seed}_{i}", fn))
    return out


def radial_corpus() -> list:
    """Radial profiles with recorded decay data for the translation checks.

    All Gaussian-type: the spectral route needs profiles whose transforms
    die inside the xi-window (algebraic-decay profiles do not qualify).
    """
    return [
        RadialProfile(lambda t: np.exp(-0.5 * t ** 2), bound=1.0, decay=8.0,
                      label="gauss_half"),
        RadialProfile(lambda t: np.exp(-t ** 2), bound=1.0, decay=8.0,
                      label="gauss_one"),
        RadialProfile(lambda t: t ** 2 * np.exp(-t ** 2), bound=1.0, decay=8.0,
                      label="sq_gauss"),
        RadialProfile(lambda t: np.exp(-0.45 * t ** 2), bound=1.0, decay=8.0,
                      label="gauss_wide"),
    ]


# ---------------------------------------------------------------------------
# L^p ratio scans
# ---------------------------------------------------------------------------

@dataclass
class LpScanReport:
    setup_label: str
    direction: int
    p_grid: list
    labels: list
    ratios: np.ndarray          # (n_functions, n_p)
    sup_ratio: dict = field(default_factory=dict)
    seed: int | None = None

    def finalize(self):
        self.sup_ratio = {p: float(np.max(self.ratios[:, i]))
                          for i, p in enumerate(self.p_grid)}
        return self

    def rows(self):
        for lbl, row in zip(self.labels, self.ratios):
            for p, v in zip(self.p_grid, row):
                yield lbl, p, float(v)


def lp_ratio_scan(grid: Grid, j: int, corpus, p_grid, seed=None,
                  setup_label: str = "") -> LpScanReport:
    """||R_j f||_p / ||f||_p over the corpus, multiplier route."""
    p_grid = list(p_grid)
    for p in p_grid:
        if not (p > 1.0 and math.isfinite(p)):
            raise ValueError("p must be finite and > 1")
    ratios = np.empty((len(corpus), len(p_grid)))
    labels = []
    for i, cf in enumerate(corpus):
        f = cf.sample(grid)
        rf = riesz_multiplier(f, j)
        for m, p in enumerate(p_grid):
            ratios[i, m] = rf.norm_p(p) / f.norm_p(p)
        labels.append(cf.label)
    return LpScanReport(setup_label=setup_label, direction=j, p_grid=p_grid,
                        labels=labels, ratios=ratios, seed=seed).finalize()


# ---------------------------------------------------------------------------
# generalized Riesz inequality
# ---------------------------------------------------------------------------

def dunkl_gradient_norm(f: GridFunction) -> np.ndarray:
    """|grad_k f| = (sum_r |T_r f|^2)^(1/2) on the grid."""
    acc = None
    for r in range(f.grid.ndim):
        t = np.abs(grid_dunkl_op(f, r).values) ** 2
        acc = t if acc is None else acc + t
    return np.sqrt(acc)


def second_order_factorization_defect(f: GridFunction, r: int, s: int) -> float:
    """Relative L2 defect of F_k(T_r T_s f) + xi_r xi_s F_k f.

    This is the spectral form of the second-derivative factorization
    through the Riesz transforms and the (negative) Laplacian.
    """
    grid = f.grid
    trs = grid_dunkl_op(grid_dunkl_op(f, s), r)
    lhs = dunkl_transform(trs, tail_tol=None).values
    F = dunkl_transform(f, tail_tol=None).values
    meshes = grid.meshes()
    rhs = -meshes[r] * meshes[s] * F
    return grid.norm2(lhs - rhs) / max(grid.norm2(rhs), 1e-300)


def riesz_inequality_check(grid: Grid, r: int, s: int, corpus, p: float,
                           degenerate_rtol: float = 1e-8):
    """Ratios ||T_r T_s f||_p / ||Delta_k f||_p with degenerate inputs skipped."""
    if not (1.0 < p < math.inf):
        raise ValueError("p must lie in (1, inf)")
    rows = []
    for cf in corpus:
        f = cf.sample(grid)
        lap = None
        for jj in range(grid.ndim):
            t = grid_dunkl_op(grid_dunkl_op(f, jj), jj)
            lap = t if lap is None else lap + t
        denom = lap.norm_p(p)
        if denom <= degenerate_rtol * max(f.norm_p(p), 1e-300):
            rows.append((cf.label, None))
            continue
        num = grid_dunkl_op(grid_dunkl_op(f, s), r).norm_p(p)
        rows.append((cf.label, num / denom))
    return rows


# ---------------------------------------------------------------------------
# Sobolev inequality
# ---------------------------------------------------------------------------

def sobolev_exponent(setup_dim: int, gamma_k: float, p: float) -> float:
    """q with 1/q = 1/p - 1/(2 gamma_k + N); the scale-invariant partner."""
    d_hom = 2.0 * gamma_k + setup_dim
    inv_q = 1.0 / p - 1.0 / d_hom
    if inv_q <= 0:
        raise ValueError("p too large for the Sobolev window")
    return 1.0 / inv_q


def sobolev_inequality_check(grid: Grid, corpus, p: float):
    """Ratios ||f||_q / ||grad_k f||_p at the conjugate exponent q."""
    gamma_k = grid.constants.gamma_k
    n = grid.ndim
    d_hom = 2.0 * gamma_k + n
    if d_hom <= 2.0 and p >= d_hom:
        raise ValueError("homogeneous dimension too small for a nontrivial window")
    q = sobolev_exponent(n, gamma_k, p)
    if not (1.0 < p <= q < d_hom):
        raise ValueError(f"(p, q) = ({p}, {q:.3f}) outside the admissible window")
    rows = []
    for cf in corpus:
        f = cf.sample(grid)
        gn = GridFunction(grid, dunkl_gradient_norm(f))
        rows.append((cf.label, f.norm_p(q) / gn.norm_p(p)))
    return rows, q


def sobolev_dilation_sweep(grid: Grid, base_fn, p: float, scales=(0.5, 1.0, 2.0)):
    """Ratio drift across dilations f_t(x) = f(t x); small iff (p, q) is the
    scale-invariant pairing."""
    ratios = []
    for t in scales:
        cf = CorpusFunction(f"dilate_{t}", lambda pts, t=t: base_fn(t * pts))
        rows, _ = sobolev_inequality_check(grid, [cf], p)
        ratios.append(rows[0][1])
    ratios = np.array(ratios)
    return float(ratios.max() / ratios.min() - 1.0), ratios


# ---------------------------------------------------------------------------
# potential identity
# ---------------------------------------------------------------------------

def potential_identity_defect(f: GridFunction, sample_stride: int = 6,
                              core_radius_factor: float = 0.5) -> float:
    """Relative weighted-l2 defect of f = I_k^1(sum_j R_j T_j f) on a core
    sample of grid nodes.

    The summand's spectrum is kept from the multiplier step (the synthesized
    g decays too slowly for an accurate re-transform at the truncation).
    """
    from .riesz import riesz_multiplier_spectrum
    from .transform import dunkl_transform, inverse_dunkl_transform
    grid = f.grid
    g_spec = None
    for j in range(grid.ndim):
        spec_j = riesz_multiplier_spectrum(
            dunkl_transform(grid_dunkl_op(f, j), tail_tol=None), j)
        g_spec = spec_j if g_spec is None else GridFunction(
            grid, g_spec.values + spec_j.values)
    g = inverse_dunkl_transform(g_spec, tail_tol=None)
    g = GridFunction(grid, g.values.real)
    pts = grid.flat_points()
    w = grid.weights.ravel()
    r = np.linalg.norm(pts, axis=1)
    sel = np.where(r < core_radius_factor * grid.spec.radius)[0][::sample_stride]
    vals = riesz_potential_many(g, 1.0, pts[sel], spectrum=g_spec)
    target = np.asarray(f.values).real.ravel()[sel]
    ww = w[sel]
    return float(np.sqrt(np.sum(ww * (vals - target) ** 2)
                         / np.sum(ww * target ** 2)))
