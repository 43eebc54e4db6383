"""Command-line front end: reproducible experiments and reports.

Machine outputs are JSON (sorted keys) and CSV with repr-formatted floats;
identical (config, seed) runs produce byte-identical files.  Wall-clock
stamps appear only in the human summary.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import czd, harness, riesz, transform, translate
from ._backend import BACKEND_NAME
from .config import load_setup
from .grids import GridFunction
from .polycalc import Poly, dunkl_apply_axis
from .rootsys import ReflectionSetup

TOL_ROUTES = 1e-4


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(path: Path, header, rows):
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def write_json(path: Path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _corpus_function(label: str, dim: int):
    for cf in harness.deterministic_corpus(dim):
        if cf.label == label:
            return cf
    raise SystemExit(f"unknown function {label!r}; choices: "
                     + ", ".join(c.label for c in harness.deterministic_corpus(dim)))


def _radial_profile(label: str):
    for rp in harness.radial_corpus():
        if rp.label == label:
            return rp
    raise SystemExit(f"unknown profile {label!r}; choices: "
                     + ", ".join(r.label for r in harness.radial_corpus()))


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _summary(out: Path, name: str, lines):
    text = [f"# {name}", f"backend: {BACKEND_NAME}",
            f"finished: {time.strftime('%Y-%m-%d %H:%M:%S')}"]
    text.extend(lines)
    (out / f"{name}.txt").write_text("\n".join(text) + "\n")
    for ln in lines:
        print(ln)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_transform(args) -> int:
    ls = load_setup(args.setup)
    grid = ls.grid()
    cf = _corpus_function(args.function, ls.setup.dimension)
    f = cf.sample(grid)
    F = transform.dunkl_transform(f)
    out = _outdir(args)
    pts = grid.flat_points()
    vals = np.asarray(F.values).ravel()
    header = [f"x{i+1}" for i in range(grid.ndim)] + ["re", "im"]
    rows = [list(p) + [float(v.real), float(v.imag)] for p, v in zip(pts, vals)]
    write_csv(out / f"transform_{ls.label}_{cf.label}.csv", header, rows)
    defect = transform.plancherel_defect(f)
    _summary(out, f"transform_{ls.label}", [
        f"function: {cf.label}",
        f"nodes: {len(pts)}",
        f"plancherel_defect: {defect:.3e}",
    ])
    return 0 if defect < args.tol else 1


def cmd_translate(args) -> int:
    ls = load_setup(args.setup)
    grid = ls.grid()
    prof = _radial_profile(args.profile)
    x = np.array([float(v) for v in args.x.split(",")])
    if len(x) != grid.ndim:
        raise SystemExit("--x arity does not match the setup dimension")
    spec_route = translate.translate_spectral(prof.sample(grid), x)
    rad_route = translate.translate_radial_grid(prof, x, grid)
    out = _outdir(args)
    pts = grid.flat_points()
    sv = np.asarray(spec_route.values).real.ravel()
    rv = np.asarray(rad_route.values).ravel()
    header = [f"y{i+1}" for i in range(grid.ndim)] + ["spectral", "radial", "difference"]
    rows = [list(p) + [float(a), float(b), float(a - b)]
            for p, a, b in zip(pts, sv, rv)]
    write_csv(out / f"translate_{ls.label}_{prof.label}.csv", header, rows)
    defect = (spec_route - rad_route).norm2() / rad_route.norm2()
    _summary(out, f"translate_{ls.label}", [
        f"profile: {prof.label}",
        f"x: {args.x}",
        f"route_disagreement_l2: {defect:.3e}",
    ])
    return 0 if defect < args.tol else 1


def _separated_points(ls, rng, count):
    """Evaluation points separated from the sample-bump supports."""
    dim = ls.setup.dimension
    R = ls.spec.radius
    pts = []
    while len(pts) < count:
        x = rng.uniform(0.62 * R, 0.8 * R, size=dim) * rng.choice([-1.0, 1.0], size=dim)
        pts.append(x)
    return pts


def cmd_riesz(args) -> int:
    ls = load_setup(args.setup)
    grid = ls.grid()
    rng = np.random.default_rng(args.seed)
    dim = ls.setup.dimension
    rows = []
    worst = 0.0
    for i in range(args.pairs):
        center = rng.uniform(-0.8, 0.8, size=dim)
        # width capped: the bump spectrum must vanish inside the xi-window
        width = rng.uniform(1.0, 1.6)
        f = GridFunction.sample(
            grid, lambda p, c=center, a=width: np.exp(-a * np.sum((p - c) ** 2, axis=-1)))
        j = int(rng.integers(dim))
        x = _separated_points(ls, rng, 1)[0]
        F = transform.dunkl_transform(f)
        vals = {}
        if args.route in ("all", "multiplier"):
            vals["multiplier"] = float(
                riesz.riesz_multiplier_at(x[None, :], f, j, spectrum=F)[0].real)
        if args.route in ("all", "kernel"):
            vals["kernel"] = riesz.riesz_kernel_route(f, j, x)
        if args.route in ("all", "truncated"):
            vals["truncated"] = riesz.riesz_truncated(f, j, x, spectrum=F).limit
        ref = vals.get("multiplier", next(iter(vals.values())))
        scale = max(abs(v) for v in vals.values())
        defect = max(abs(v - ref) for v in vals.values()) / max(scale, 1e-300)
        worst = max(worst, defect)
        rows.append([i, j] + list(x) + [vals.get("multiplier", float("nan")),
                                        vals.get("kernel", float("nan")),
                                        vals.get("truncated", float("nan")),
                                        defect])
    out = _outdir(args)
    header = (["pair", "direction"] + [f"x{i+1}" for i in range(dim)]
              + ["multiplier", "kernel", "truncated", "defect"])
    write_csv(out / f"riesz_{ls.label}.csv", header, rows)
    _summary(out, f"riesz_{ls.label}", [
        f"pairs: {args.pairs}  route: {args.route}",
        f"max_route_defect: {worst:.3e}  (tolerance {args.tol})",
    ])
    return 0 if worst <= args.tol else 1


def cmd_hormander(args) -> int:
    ls = load_setup(args.setup)
    rng = np.random.default_rng(args.seed)
    dim = ls.setup.dimension
    pairs, values, tails = [], [], []
    for _ in range(args.samples):
        y0 = rng.uniform(-2.0, 2.0, size=dim)
        while np.linalg.norm(y0) < 0.2:
            y0 = rng.uniform(-2.0, 2.0, size=dim)
        # offsets at a bounded fraction of |y0|: the scale-invariant dial
        u = 10.0 ** rng.uniform(np.log10(0.08), np.log10(0.4))
        direction = rng.normal(size=dim)
        direction /= np.linalg.norm(direction)
        y = y0 + u * np.linalg.norm(y0) * direction
        j = int(rng.integers(dim))
        est = riesz.hormander_estimate(ls.setup, j, y, y0, truncation=args.radius)
        pairs.append({"y": [float(v) for v in y], "y0": [float(v) for v in y0],
                      "direction": j})
        values.append(est.value)
        tails.append(est.tail_bound)
    out = _outdir(args)
    payload = {
        "setup": ls.label,
        "seed": args.seed,
        "truncation_radius": args.radius,
        "pairs": pairs,
        "values": values,
        "tail_bounds": tails,
        "sup": max(values),
    }
    write_json(out / f"hormander_{ls.label}.json", payload)
    _summary(out, f"hormander_{ls.label}", [
        f"samples: {args.samples}",
        f"sup_estimate: {max(values):.6f}",
        f"max_tail_bound: {max(tails):.3e}",
    ])
    return 0


def cmd_cz(args) -> int:
    ls = load_setup(args.setup)
    grid = ls.grid()
    cf = _corpus_function(args.function, ls.setup.dimension)
    f = cf.sample(grid)
    dec = czd.cz_decompose(f, args.level)
    props = dec.verify_properties()
    out = _outdir(args)
    payload = {"setup": ls.label, "function": cf.label, "level": args.level,
               "properties": props,
               "pieces": [{"lo": [float(v) for v in p.box_lo],
                           "hi": [float(v) for v in p.box_hi],
                           "ball_radius": float(p.ball_radius),
                           "ball_mass": float(p.ball_mass),
                           "l1_norm": float(p.l1_norm)} for p in dec.pieces]}
    write_json(out / f"cz_{ls.label}_{cf.label}.json", payload)
    ok = props["reconstruction_error"] < 1e-12 and props["max_mean_defect"] < 1e-12
    _summary(out, f"cz_{ls.label}", [
        f"function: {cf.label}  level: {args.level}",
        f"pieces: {props['n_pieces']}",
        f"reconstruction_error: {props['reconstruction_error']:.2e}",
        f"sup_good_over_level: {props['sup_good_over_level']:.3f}",
        f"l1_bound_constant: {props['l1_bound_constant']:.3f}",
        f"mass_sum_constant: {props['mass_sum_constant']:.3f}",
    ])
    return 0 if ok else 1


def cmd_lp_scan(args) -> int:
    ls = load_setup(args.setup)
    grid = ls.grid()
    p_grid = [float(v) for v in args.p_grid.split(",")]
    corpus = harness.deterministic_corpus(ls.setup.dimension)
    corpus += harness.random_corpus(ls.setup.dimension, args.random_count, args.seed)
    out = _outdir(args)
    summaries = {}
    rows = []
    for j in range(ls.setup.dimension):
        rep = harness.lp_ratio_scan(grid, j, corpus, p_grid, seed=args.seed,
                                    setup_label=ls.label)
        for lbl, p, v in rep.rows():
            rows.append([j, lbl, p, v])
        summaries[str(j)] = {str(p): v for p, v in rep.sup_ratio.items()}
    write_csv(out / f"lp_scan_{ls.label}.csv",
              ["direction", "function", "p", "ratio"], rows)
    write_json(out / f"lp_scan_{ls.label}.json",
               {"setup": ls.label, "seed": args.seed, "sup_ratio_per_p": summaries})
    lines = [f"p-grid: {p_grid}"]
    for j, sup in summaries.items():
        lines.append(f"direction {j}: " + "  ".join(
            f"p={p}: {v:.6f}" for p, v in sup.items()))
    _summary(out, f"lp_scan_{ls.label}", lines)
    p2 = [sup.get("2.0") for sup in summaries.values() if "2.0" in sup]
    ok = all(v <= 1.0 + 1e-6 for v in p2) if p2 else True
    return 0 if ok else 1


def cmd_inequalities(args) -> int:
    ls = load_setup(args.setup)
    grid = ls.grid()
    corpus = harness.deterministic_corpus(ls.setup.dimension)
    out = _outdir(args)
    rows = []
    worst_fact = 0.0
    for r in range(ls.setup.dimension):
        for s in range(ls.setup.dimension):
            for (lbl, ratio) in harness.riesz_inequality_check(grid, r, s, corpus, args.p):
                rows.append(["riesz", r, s, lbl, args.p,
                             ratio if ratio is not None else float("nan")])
            f = corpus[0].sample(grid)
            worst_fact = max(worst_fact,
                             harness.second_order_factorization_defect(f, r, s))
    sob_rows = []
    d_hom = 2.0 * grid.constants.gamma_k + grid.ndim
    q = None
    if d_hom > 2.0 and args.p < d_hom:
        ineq, q = harness.sobolev_inequality_check(grid, corpus, args.p)
        for lbl, ratio in ineq:
            sob_rows.append(["sobolev", -1, -1, lbl, q, ratio])
    write_csv(out / f"inequalities_{ls.label}.csv",
              ["family", "r", "s", "function", "exponent", "ratio"],
              rows + sob_rows)
    write_json(out / f"inequalities_{ls.label}.json", {
        "setup": ls.label, "p": args.p, "sobolev_q": q,
        "factorization_defect": worst_fact,
    })
    _summary(out, f"inequalities_{ls.label}", [
        f"p: {args.p}  sobolev q: {q}",
        f"second_order_factorization_defect: {worst_fact:.3e}  (tolerance {args.tol})",
    ])
    return 0 if worst_fact <= args.tol else 1


def cmd_poly_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    failures = 0
    for dim, mults in [(1, (0.5,)), (2, (0.5, 1.0)), (2, (0.25, 0.75))]:
        setup = ReflectionSetup(dim, mults)
        for trial in range(args.count):
            f = Poly(nvars=dim)
            for _ in range(5):
                mono = tuple(int(rng.integers(0, 5)) for _ in range(dim))
                f = f + Poly.monomial(mono, int(rng.integers(-9, 10)))
            for i in range(dim):
                for j in range(i + 1, dim):
                    a = dunkl_apply_axis(setup, i, dunkl_apply_axis(setup, j, f))
                    b = dunkl_apply_axis(setup, j, dunkl_apply_axis(setup, i, f))
                    if a != b:
                        failures += 1
    print(f"poly-check: commutativity failures = {failures}")
    return 0 if failures == 0 else 1


def cmd_selftest(args) -> int:
    ls = load_setup(args.setup)
    grid = ls.grid()
    checks = []

    def check(name, value, tol):
        ok = value <= tol
        checks.append((name, value, tol, ok))
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {value:.3e} (tol {tol:.1e})")

    f = harness.deterministic_corpus(ls.setup.dimension)[0].sample(grid)
    check("plancherel", transform.plancherel_defect(f), 1e-6)
    check("inversion", transform.inversion_defect(f), 1e-6)
    for j in range(ls.setup.dimension):
        check(f"multiplier_identity_j{j}",
              transform.multiplier_identity_defect(f, j), 1e-6)
    prof = harness.radial_corpus()[0]
    spec_route = translate.translate_spectral(prof.sample(grid),
                                              0.5 * np.ones(grid.ndim))
    rad_route = translate.translate_radial_grid(prof, 0.5 * np.ones(grid.ndim), grid)
    check("translation_routes",
          (spec_route - rad_route).norm2() / rad_route.norm2(), 1e-6)
    rng = np.random.default_rng(args.seed)
    mu_worst = 0.0
    from .kernel import dunkl_kernel, intertwining_measure
    for _ in range(10):
        x = rng.uniform(-2, 2, size=grid.ndim)
        lam = rng.uniform(-2, 2, size=grid.ndim)
        mu = intertwining_measure(ls.setup, x, 64)
        mu_worst = max(mu_worst, abs(mu.moment(lam)
                                     - float(np.real(dunkl_kernel(ls.setup, lam, x)))))
    check("intertwining_moments", mu_worst, 1e-10)
    out = _outdir(args)
    _summary(out, f"selftest_{ls.label}",
             [f"{name}: {'PASS' if ok else 'FAIL'} ({value:.3e} <= {tol:.1e})"
              for name, value, tol, ok in checks])
    return 0 if all(ok for *_, ok in checks) else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="dunklriesz",
        description="Dunkl transform / Riesz transform verification toolkit")
    sub = ap.add_subparsers(dest="command")

    def common(p, setup=True):
        if setup:
            p.add_argument("--setup", required=True, help="setup file path")
        p.add_argument("--seed", type=int, default=2024)
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--tol", type=float, default=TOL_ROUTES)

    p = sub.add_parser("transform", help="sample a Dunkl transform to CSV")
    common(p)
    p.add_argument("--function", default="gauss_half")
    p.set_defaults(fn=cmd_transform)

    p = sub.add_parser("translate", help="compare translation routes")
    common(p)
    p.add_argument("--profile", default="gauss_half")
    p.add_argument("--x", default="0.5", help="comma-separated translation point")
    p.set_defaults(fn=cmd_translate)

    p = sub.add_parser("riesz", help="route-agreement defect table")
    common(p)
    p.add_argument("--route", choices=["all", "multiplier", "kernel", "truncated"],
                   default="all")
    p.add_argument("--pairs", type=int, default=20)
    p.set_defaults(fn=cmd_riesz)

    p = sub.add_parser("hormander-check", help="kernel-difference integrals")
    common(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--radius", type=float, default=None)
    p.set_defaults(fn=cmd_hormander)

    p = sub.add_parser("cz-decompose", help="Calderon-Zygmund decomposition report")
    common(p)
    p.add_argument("--function", default="gauss_half")
    p.add_argument("--level", type=float, default=0.05)
    p.set_defaults(fn=cmd_cz)

    p = sub.add_parser("lp-scan", help="L^p ratio scans")
    common(p)
    p.add_argument("--p-grid", default="1.25,1.5,2.0,3.0,4.0")
    p.add_argument("--random-count", type=int, default=8)
    p.set_defaults(fn=cmd_lp_scan)

    p = sub.add_parser("inequalities", help="Riesz and Sobolev inequality ratios")
    common(p)
    p.add_argument("--p", type=float, default=2.0)
    p.set_defaults(fn=cmd_inequalities)

    p = sub.add_parser("poly-check", help="exact commutativity suite")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--count", type=int, default=25)
    p.set_defaults(fn=cmd_poly_check)

    p = sub.add_parser("selftest", help="condensed invariant suite")
    common(p)
    p.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not getattr(args, "command", None):
        ap.print_usage()
        return 2
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
