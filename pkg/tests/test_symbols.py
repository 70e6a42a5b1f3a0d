import numpy as np
import pytest

from mlfrac.errors import NumericsError
from mlfrac.fractional import TimeGrid
from mlfrac.mittag_leffler import MLParams, ml_eval
from mlfrac.symbols import (
    SymbolKind,
    SymbolSpec,
    i_minus_alpha,
    symbol_derivative_bound_probe,
    symbol_eval,
    symbol_eval_radial,
    symbol_large_xi,
    symbol_time_identity_check,
)

from oracles import gamma_ref


def test_trace_values_at_time_zero():
    rng = np.random.default_rng(11)
    for _ in range(100):
        xi = rng.uniform(-30.0, 30.0, size=1)
        assert symbol_eval(SymbolSpec(SymbolKind.S, 1.5, 0.0), xi) == 1.0
        assert symbol_eval(SymbolSpec(SymbolKind.Q, 1.5, 0.0), xi) == 0.0
        assert symbol_eval(SymbolSpec(SymbolKind.P, 1.5, 0.0), xi) == 0.0


def test_zero_frequency_values():
    t, alpha = 0.7, 1.5
    q = symbol_eval(SymbolSpec(SymbolKind.Q, alpha, t), [0.0])
    assert q == pytest.approx(t)
    p = symbol_eval(SymbolSpec(SymbolKind.P, alpha, t), [0.0])
    ref = i_minus_alpha(alpha) * t ** (alpha - 1.0) / gamma_ref(alpha)
    assert p == pytest.approx(ref, rel=1e-12)


def test_order_one_chirp():
    v = symbol_eval(SymbolSpec(SymbolKind.S1, t=1.0), [np.sqrt(np.pi)])
    assert v == pytest.approx(-1.0, abs=1e-12)


def test_singular_time_kinds():
    for kind in (SymbolKind.N, SymbolKind.H):
        with pytest.raises(NumericsError, match="singular-time"):
            symbol_eval(SymbolSpec(kind, 1.5, 0.0), [1.0])


def test_large_xi_matches_eval():
    spec = SymbolSpec(SymbolKind.S, 1.5, 1.0)
    for rho in (50.0, 1e3):
        a = symbol_eval(spec, [rho])
        b = symbol_large_xi(spec, [rho], m=4)
        assert abs(a - b) < 1e-12


def test_large_xi_leading_moduli():
    alpha, t = 1.5, 1.0
    rho = 1e3
    q = abs(symbol_eval(SymbolSpec(SymbolKind.Q, alpha, t), [rho]))
    assert q == pytest.approx((1.0 / alpha) * rho ** (-2.0 / alpha), rel=0.01)
    p = abs(symbol_eval(SymbolSpec(SymbolKind.P, alpha, t), [rho]))
    assert p == pytest.approx(
        (1.0 / alpha) * rho ** (-2.0 * (alpha - 1.0) / alpha), rel=0.01)


def test_large_xi_regime_guard():
    with pytest.raises(NumericsError, match="asymptotic-regime"):
        symbol_large_xi(SymbolSpec(SymbolKind.S, 1.5, 1.0), [1.0])


@pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
def test_time_identity_first_order(alpha):
    grid = TimeGrid.regular(1.0, 1024)
    rep = symbol_time_identity_check(alpha, [2.0], grid)
    assert rep["first_order_sup_dev"] < 1e-4


def test_time_identity_zero_frequency():
    grid = TimeGrid.regular(1.0, 256)
    rep = symbol_time_identity_check(1.5, [0.0], grid)
    # D_t Q(t,0) = 1 = S(t,0) exactly up to stencil rounding
    assert rep["first_order_sup_dev"] < 1e-10


def test_time_identity_fractional():
    grid = TimeGrid.regular(1.0, 1024)
    rep = symbol_time_identity_check(1.5, [2.0], grid)
    assert rep["fractional_sup_dev"] < 5e-2 * rep["fractional_scale"]


def test_derivative_bound_probe_first_order():
    xs = np.geomspace(1.0, 1e3, 25)
    rep = symbol_derivative_bound_probe(SymbolKind.S, 1.5, 1, xs)
    assert np.isfinite(rep["ratio_sup"])
    assert -0.1 < rep["log_slope"] < 0.1


def test_derivative_bound_probe_q_weight():
    xs = np.geomspace(1.0, 1e3, 25)
    rep = symbol_derivative_bound_probe(SymbolKind.Q, 1.5, 1, xs)
    assert -0.1 < rep["log_slope"] < 0.1


def test_derivative_bound_probe_low_frequency_boundedness():
    xs = np.linspace(0.05, 1.0, 20)
    rep = symbol_derivative_bound_probe(SymbolKind.S, 1.5, 0, xs)
    assert rep["ratio_sup"] < 2.0


def test_scaling_identity():
    rng = np.random.default_rng(5)
    for _ in range(50):
        alpha = rng.uniform(1.05, 1.95)
        t = rng.uniform(0.2, 3.0)
        xi = rng.uniform(0.05, 3.0)
        a = symbol_eval(SymbolSpec(SymbolKind.S, alpha, t), [xi])
        b = symbol_eval(SymbolSpec(SymbolKind.S, alpha, 1.0),
                        [t ** (alpha / 2.0) * xi])
        assert abs(a - b) < 1e-10


def test_conjugate_symmetry_bit_identical():
    spec = SymbolSpec(SymbolKind.P, 1.5, 0.8)
    rng = np.random.default_rng(1)
    for _ in range(20):
        xi = rng.uniform(-10, 10, size=1)
        assert symbol_eval(spec, xi) == symbol_eval(spec, -xi)


def test_remainder_decay_weighted():
    """|eval - m-term expansion| * rho^(2(m+1)) stays bounded while the
    mathematical remainder dominates double-precision round-off."""
    from scipy.special import rgamma

    spec = SymbolSpec(SymbolKind.S, 1.5, 1.0)
    m = 2
    # first non-vanishing neglected coefficient (k = 3)
    coef = abs(rgamma(1.0 - 3 * 1.5))
    sup = 0.0
    for rho in np.geomspace(50.0, 160.0, 12):
        d = abs(symbol_eval(spec, [rho]) - symbol_large_xi(spec, [rho], m=m))
        sup = max(sup, d * rho ** (2 * (m + 1)))
    assert np.isfinite(sup)
    assert sup < 2.0 * coef
