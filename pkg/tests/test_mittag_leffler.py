import numpy as np
import pytest

from mlfrac.errors import NumericsError
from mlfrac.mittag_leffler import (
    MLParams,
    ml_asymptotic,
    ml_eval,
    ml_eval_array,
    ml_scaled_derivative,
    ml_series,
    switching_radius,
)

from oracles import ml_reference


def test_series_at_zero_is_reciprocal_gamma():
    assert ml_series(0.0, MLParams(1.5, 1.0)).value == pytest.approx(1.0)
    # 1/Gamma(0) = 0: pole of gamma maps to an exact zero
    assert ml_series(0.0, MLParams(1.5, 0.0)).value == 0.0


def test_series_exponential_case():
    # E_{1,1}(1) = e, frozen from the big-float series oracle
    rep = ml_series(1.0, MLParams(1.0, 1.0), tol=1e-14)
    assert rep.value == pytest.approx(2.718281828459045, rel=1e-13)


def test_series_cosine_case():
    # E_{2,1}(-4) = cos(2), frozen from the big-float series oracle
    rep = ml_series(-4.0, MLParams(2.0, 1.0), tol=1e-14)
    assert rep.value == pytest.approx(-0.4161468365471424, rel=1e-12)


def test_series_truncation_estimate_is_honest():
    p = MLParams(1.5, 1.0)
    loose = ml_series(2.0 + 1.0j, p, tol=1e-6)
    tight = ml_series(2.0 + 1.0j, p, tol=1e-14)
    assert abs(loose.value - tight.value) <= loose.est_abs_error


def test_series_divergence_error():
    with pytest.raises(NumericsError, match="series-divergent-at-precision"):
        ml_series(1e200, MLParams(1.5, 1.0))


def test_asymptotic_exponential_identity():
    # alpha=1: corrections are exact zeros, leading term is e^z
    rep = ml_asymptotic(30.0, MLParams(1.0, 1.0), m=3)
    assert rep.value == pytest.approx(np.exp(30.0), rel=1e-10)


def test_asymptotic_matches_series_oracle_on_imaginary_axis():
    p = MLParams(1.5, 1.0)
    z = 50j
    rep = ml_asymptotic(z, p, m=5)
    ref = ml_reference(z, 1.5, 1.0)
    assert abs(rep.value - ref) / abs(ref) < 1e-6


def test_asymptotic_leading_term_dominates():
    # remainder after removing the principal exponential term is O(1/|z|)
    a, b = 1.5, 1.5
    p = MLParams(a, b)
    for r in (50.0, 100.0, 200.0):
        z = r * np.exp(1j * a * np.pi / 4)
        lead = (1.0 / a) * z ** ((1 - b) / a) * np.exp(z ** (1.0 / a))
        rep = ml_asymptotic(z, p, m=8)
        assert abs(rep.value - lead) <= 5.0 / r


def test_asymptotic_range_guard():
    with pytest.raises(NumericsError, match="asymptotic-out-of-range"):
        ml_asymptotic(1.0, MLParams(1.5, 1.0), m=3)


def test_eval_at_zero():
    from scipy.special import rgamma
    for beta in (1.0, 2.0, 0.5, 1.5):
        rep = ml_eval(0.0, MLParams(1.5, beta))
        assert rep.value == pytest.approx(complex(rgamma(beta)))


def test_eval_negative_real_matches_oracle():
    p = MLParams(1.5, 1.0)
    rep = ml_eval(-2.0, p)
    ref = ml_reference(-2.0, 1.5, 1.0)
    assert abs(rep.value - ref) < 1e-10


@pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
def test_branch_overlap_agreement(alpha):
    """Series and asymptotic branches agree on the overlap annulus along the
    rays where the Fourier symbols live."""
    rho = switching_radius(alpha)
    betas = [1.0, 2.0, alpha, alpha - 1.0, 2.0 - alpha]
    for beta in betas:
        p = MLParams(alpha, beta)
        for sgn in (+1.0, -1.0):
            for frac in (0.5, 0.75, 1.0, 1.5, 2.0):
                z = frac * rho * np.exp(1j * sgn * alpha * np.pi / 2)
                s = ml_series(z, p, tol=1e-13).value
                a = ml_asymptotic(z, p,
                                  m=_best_m(abs(z), alpha, beta)).value
                assert abs(s - a) < 1e-6, (alpha, beta, sgn, frac)


def _best_m(zabs, alpha, beta):
    from mlfrac.mittag_leffler import asymptotic_order
    return asymptotic_order(zabs, alpha, beta)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
def test_eval_continuity_across_switch(alpha):
    """Dispatcher branches agree to 1e-8 absolute on the overlap annulus."""
    rho = switching_radius(alpha)
    for beta in (1.0, 2.0, alpha):
        p = MLParams(alpha, beta)
        for frac in (0.6, 0.9, 1.1, 1.6):
            z = frac * rho * np.exp(-1j * alpha * np.pi / 2)
            s = ml_series(z, p, tol=1e-13).value
            a = ml_asymptotic(z, p, m=_best_m(abs(z), alpha, beta)).value
            assert abs(s - a) < 1e-8


def test_series_recurrence():
    """E_{a,b}(z) = 1/Gamma(b) + z E_{a,a+b}(z) inside the switch radius."""
    from scipy.special import rgamma
    rng = np.random.default_rng(7)
    for alpha in (1.1, 1.5, 1.9):
        rho = switching_radius(alpha)
        for beta in (1.0, 2.0, alpha):
            for _ in range(5):
                r = rng.uniform(0.1, 1.0) * rho
                z = r * np.exp(1j * rng.uniform(-np.pi, np.pi))
                lhs = ml_series(z, MLParams(alpha, beta), tol=1e-13).value
                rhs = rgamma(beta) + z * ml_series(
                    z, MLParams(alpha, alpha + beta), tol=1e-13).value
                assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


def test_critical_ray_boundedness_recorded():
    """|z^(b-1) E_{a,b}(z^a)| stays bounded along arg z = pi/2."""
    alpha, beta = 1.5, 1.0
    p = MLParams(alpha, beta)
    sup = 0.0
    for r in np.geomspace(1.0, 1e4, 160):
        z = r * 1j
        za = r ** alpha * np.exp(1j * alpha * np.pi / 2)
        val = abs(z ** (beta - 1.0) * ml_eval(za, p).value)
        sup = max(sup, val)
    assert np.isfinite(sup)
    assert sup < 5.0  # observed ~1; generous cap so the guard is stable


def test_scaled_derivative_exponential():
    # alpha = beta = 1: the map is w -> e^w, any derivative is e^w
    v = ml_scaled_derivative(2.0, MLParams(1.0, 1.0), m=1)
    assert v == pytest.approx(np.exp(2.0), rel=1e-10)


def test_scaled_derivative_beta_shift_identity():
    # (a=1.5, b=2, m=1) at z=1 -> z^0 E_{1.5,1}(1)
    v = ml_scaled_derivative(1.0, MLParams(1.5, 2.0), m=1)
    ref = ml_eval(1.0, MLParams(1.5, 1.0)).value
    assert v == pytest.approx(ref, rel=1e-12)


def test_scaled_derivative_origin_guard():
    with pytest.raises(NumericsError, match="singular-at-origin"):
        ml_scaled_derivative(0.0, MLParams(1.5, 1.0), m=1)


def test_scaled_derivative_matches_finite_difference():
    rng = np.random.default_rng(3)
    p = MLParams(1.5, 1.5)
    h = 1e-5

    def f(w):
        return w ** (p.beta - 1.0) * ml_eval(
            w ** p.alpha, p).value

    pts = [3.0 + 0.0j]
    pts += [complex(rng.uniform(1.0, 4.0), rng.uniform(-0.5, 0.5))
            for _ in range(19)]
    for z in pts:
        fd = (f(z + h) - f(z - h)) / (2.0 * h)
        an = ml_scaled_derivative(z, p, m=1)
        assert abs(fd - an) / max(abs(an), 1e-12) < 1e-6


def test_eval_array_matches_scalar():
    alpha, beta = 1.5, 1.0
    rho = switching_radius(alpha)
    zs = np.array([0.0, 1.0 + 1.0j, -2.0,
                   0.9 * rho * np.exp(-1j * alpha * np.pi / 2),
                   3.0 * rho * np.exp(-1j * alpha * np.pi / 2)])
    arr = ml_eval_array(zs, alpha, beta)
    for i, z in enumerate(zs):
        assert arr[i] == ml_eval(z, MLParams(alpha, beta)).value


def test_params_validation():
    with pytest.raises(NumericsError):
        MLParams(0.0, 1.0)
    with pytest.raises(NumericsError):
        MLParams(2.5, 1.0)
    with pytest.raises(NumericsError):
        MLParams(1.5, np.inf)
