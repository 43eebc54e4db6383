import numpy as np
import pytest

from dunklriesz import _backend
from dunklriesz._backend import available_backends, get_impl
from dunklriesz.kernel import rank1_reference_rule
from dunklriesz.rootsys import ReflectionSetup, compute_constants

HAVE_COMPILED = "compiled" in available_backends()

needs_compiled = pytest.mark.skipif(not HAVE_COMPILED,
                                    reason="compiled extension not built")


def _reference(setup, nmu):
    ts, ws = [], []
    for g in setup.multiplicities:
        t, w = rank1_reference_rule(g, nmu)
        ts.append(t)
        ws.append(w)
    return ts, ws


@needs_compiled
@pytest.mark.parametrize("mults", [(0.5,), (2.5,), (0.5, 1.0), (0.0, 1.0)])
def test_backends_agree_many_x(mults, rng):
    setup = ReflectionSetup(len(mults), mults)
    c = compute_constants(setup)
    ts, ws = _reference(setup, 24)
    py = get_impl("python")
    cc = get_impl("compiled")
    n = setup.dimension
    y = rng.uniform(0.5, 2.0, size=n)
    X = rng.uniform(-5, 5, size=(200, n))
    keep = np.linalg.norm(np.abs(X) - np.abs(y)[None, :], axis=1) > 0.3
    X = X[keep]
    for j in range(n):
        a = py.kernel_many_x(mults, c.p_k, c.riesz_norm, j, X, y, ts, ws)
        b = cc.kernel_many_x(mults, c.p_k, c.riesz_norm, j, X, y, ts, ws)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)


@needs_compiled
@pytest.mark.parametrize("mults", [(0.5,), (0.5, 1.0)])
def test_backends_agree_many_y(mults, rng):
    setup = ReflectionSetup(len(mults), mults)
    c = compute_constants(setup)
    ts, ws = _reference(setup, 24)
    py = get_impl("python")
    cc = get_impl("compiled")
    n = setup.dimension
    x = rng.uniform(3.0, 5.0, size=n)
    Y = rng.uniform(-2, 2, size=(300, n))
    for j in range(n):
        a = py.kernel_many_y(mults, c.p_k, c.riesz_norm, j, x, Y, ts, ws)
        b = cc.kernel_many_y(mults, c.p_k, c.riesz_norm, j, x, Y, ts, ws)
        np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-300)


@needs_compiled
def test_backends_agree_hyperplane_branch(rng):
    # y on the reflection hyperplane triggers the limit branch in both
    mults = (0.5, 1.0)
    setup = ReflectionSetup(2, mults)
    c = compute_constants(setup)
    ts, ws = _reference(setup, 24)
    py = get_impl("python")
    cc = get_impl("compiled")
    x = np.array([4.0, 3.0])
    Y = np.array([[1e-9, 1.5], [0.5, 1e-9], [0.3, -1.2]])
    for j in range(2):
        a = py.kernel_many_y(mults, c.p_k, c.riesz_norm, j, x, Y, ts, ws)
        b = cc.kernel_many_y(mults, c.p_k, c.riesz_norm, j, x, Y, ts, ws)
        np.testing.assert_allclose(a, b, rtol=1e-12)


@needs_compiled
def test_compiled_sandwich_guard():
    from dunklriesz._kernels_py import SandwichViolation
    cc = get_impl("compiled")
    with pytest.raises(SandwichViolation):
        cc.kernel_many_y((0.5,), 3.0, 1.0, 0, np.array([1.0]),
                         np.array([[3.0]]), [np.array([1.5])],
                         [np.array([1.0])])


def test_backend_selection_reports_name():
    assert _backend.BACKEND_NAME in ("python", "compiled")
    assert "python" in available_backends()
