import numpy as np
import pytest

from mlfrac.errors import NumericsError
from mlfrac.fractional import (
    TimeGrid,
    TimeSeries,
    caputo_derivative,
    caputo_derivative_low,
    g_function,
    rl_integral,
)
from mlfrac.mittag_leffler import MLParams, ml_eval

from oracles import caputo_power, gamma_ref, trapezoid_cumulative


def series(fn, n=512, t_end=1.0, jet=(0.0, 0.0)):
    grid = TimeGrid.regular(t_end, n)
    return TimeSeries(grid, fn(grid.nodes), jet0=jet)


def test_g_function_values():
    assert g_function(1.0, 0.7) == pytest.approx(1.0)
    assert g_function(2.0, 3.5) == pytest.approx(3.5)
    # g_{1/2}(1) = 1/sqrt(pi), frozen from the gamma oracle
    assert g_function(0.5, 1.0) == pytest.approx(0.5641895835477563, rel=1e-12)
    assert g_function(1.5, -2.0) == 0.0
    with pytest.raises(NumericsError, match="dirac-not-pointwise"):
        g_function(0.0, 1.0)


def test_rl_integral_of_one_is_exact():
    f = series(lambda t: np.ones_like(t), n=64, jet=(1.0, 0.0))
    out = rl_integral(f, 1.0)
    assert np.allclose(out.values, f.grid.nodes, rtol=1e-13)


def test_rl_integral_half_order_power():
    # I^{1/2} t = t^{3/2} / Gamma(5/2)
    f = series(lambda t: t.astype(complex), n=512, jet=(0.0, 1.0))
    out = rl_integral(f, 0.5)
    ref = f.grid.nodes ** 1.5 / gamma_ref(2.5)
    rel = np.abs(out.values - ref) / np.abs(ref)
    assert rel.max() < 1e-3


def test_rl_integral_nonuniform_matches_uniform():
    grid_u = TimeGrid.regular(1.0, 128)
    grid_n = TimeGrid(grid_u.nodes.copy(), uniform=False)
    vals = np.sin(grid_u.nodes) + 0.3j * grid_u.nodes
    a = rl_integral(TimeSeries(grid_u, vals), 0.7)
    b = rl_integral(TimeSeries(grid_n, vals), 0.7)
    assert np.allclose(a.values, b.values, rtol=1e-10, atol=1e-14)


@pytest.mark.parametrize("a,b", [(0.3, 0.7), (0.5, 0.5), (0.3, 0.5)])
def test_rl_semigroup(a, b):
    f = series(lambda t: np.sin(t), n=512)
    left = rl_integral(rl_integral(f, b), a)
    right_direct = rl_integral(f, a + b)
    rel = np.abs(left.values - right_direct.values)
    scale = np.abs(right_direct.values).max()
    assert rel.max() / scale < 1e-3
    if a + b == 1.0:
        # independent order-one oracle: cumulative trapezoid
        ts = np.concatenate(([0.0], f.grid.nodes))
        vs = np.concatenate(([0.0], f.values))
        ref = trapezoid_cumulative(vs, ts)[1:]
        assert np.abs(left.values - ref).max() < 1e-3


def test_caputo_annihilates_affine():
    # dyadic coefficients: the jet subtraction cancels exactly in binary
    f = series(lambda t: (2.5 - 1.0j) + (0.75 + 0.25j) * t, n=128,
               jet=(2.5 - 1.0j, 0.75 + 0.25j))
    out = caputo_derivative(f, 1.5)
    assert np.abs(out.values).max() < 1e-12
    # generic coefficients: limited by stencil rounding amplification 1/h^2
    g = series(lambda t: (1.1 + 0.3j) + (0.7 + 0.2j) * t, n=128,
               jet=(1.1 + 0.3j, 0.7 + 0.2j))
    assert np.abs(caputo_derivative(g, 1.5).values).max() < 1e-10


def test_caputo_quadratic():
    # D^1.5 t^2 = 2 t^0.5 / Gamma(1.5)
    f = series(lambda t: t ** 2, n=1024, jet=(0.0, 0.0))
    out = caputo_derivative(f, 1.5)
    ref = caputo_power(2.0, 1.5, f.grid.nodes)
    rel = np.abs(out.values[8:] - ref[8:]) / np.abs(ref[8:])
    assert rel.max() < 1e-2


def test_caputo_eigenfunction():
    """The Mittag-Leffler profile t -> E_{a,1}(omega t^a) is an eigenfunction."""
    alpha = 1.5
    omega = np.exp(-1j * alpha * np.pi / 2)   # i^{-alpha}
    grid = TimeGrid.regular(1.0, 1024)
    p = MLParams(alpha, 1.0)
    vals = np.array([ml_eval(omega * t ** alpha, p).value
                     for t in grid.nodes])
    f = TimeSeries(grid, vals, jet0=(1.0 + 0.0j, 0.0 + 0.0j))
    out = caputo_derivative(f, alpha)
    ref = omega * vals
    sl = slice(8, -1)
    rel = np.abs(out.values[sl] - ref[sl]) / np.abs(ref[sl])
    assert rel.max() < 1e-2


def test_caputo_cubic_convergence_order():
    errs = []
    for n in (128, 256, 512, 1024):
        f = series(lambda t: t ** 3, n=n, jet=(0.0, 0.0))
        out = caputo_derivative(f, 1.5)
        ref = caputo_power(3.0, 1.5, f.grid.nodes)
        errs.append(np.abs(out.values[2:] - ref[2:]).max())
    errs = np.array(errs)
    if np.all(errs < 1e-10):
        return  # scheme is exact for cubics up to rounding
    orders = np.log2(errs[:-1] / errs[1:])
    assert orders.min() >= 1.5


def test_caputo_paths_consistent():
    # closed form for t^2.2 gives the scheme error scale
    f = series(lambda t: t ** 2.2, n=512, jet=(0.0, 0.0))
    inner = caputo_derivative(f, 1.4, path="inner")
    outer = caputo_derivative(f, 1.4, path="outer")
    ref = caputo_power(2.2, 1.4, f.grid.nodes)
    sl = slice(4, -1)
    err_inner = np.abs(inner.values[sl] - ref[sl]).max()
    err_outer = np.abs(outer.values[sl] - ref[sl]).max()
    gap = np.abs(inner.values[sl] - outer.values[sl]).max()
    assert gap < 10.0 * max(err_inner, err_outer, 1e-14)


def test_caputo_guards():
    f = series(lambda t: t, n=4, jet=(0.0, 1.0))
    with pytest.raises(NumericsError, match="grid-too-short"):
        caputo_derivative(f, 1.5)
    g = TimeSeries(TimeGrid(np.array([0.1, 0.2, 0.5, 0.7, 1.0])),
                   np.zeros(5))
    with pytest.raises(NumericsError, match="grid-not-uniform"):
        caputo_derivative(g, 1.5)


def test_caputo_low_order_power():
    # D^mu t = t^(1-mu)/Gamma(2-mu) for mu in (0,1)
    mu = 0.5
    f = series(lambda t: t.astype(complex), n=1024, jet=(0.0, 1.0))
    out = caputo_derivative_low(f, mu)
    ref = f.grid.nodes ** (1.0 - mu) / gamma_ref(2.0 - mu)
    rel = np.abs(out.values[4:] - ref[4:]) / np.abs(ref[4:])
    assert rel.max() < 1e-2
