"""Independent reference computations used by the test suite.

Everything here is deliberately simple and slow: plain big-float series
summation, quadrature, finite differences.  None of it shares code with the
package's evaluation paths.
"""

import mpmath as mp
import numpy as np


def ml_reference(z, alpha, beta, dps=None):
    """Mittag-Leffler E_{alpha,beta}(z) by brute-force big-float series.

    Precision is chosen from the worst-case cancellation exp(|z|^(1/alpha)).
    Gamma arguments are formed in big-float arithmetic (forming alpha*k in
    doubles poisons the deep-cancellation regime).
    """
    zc = complex(z)
    if dps is None:
        zeta = abs(zc) ** (1.0 / alpha) if zc != 0 else 0.0
        dps = int(50 + 0.9 * zeta)
    with mp.workdps(dps):
        zz = mp.mpc(zc)
        am = mp.mpf(float(alpha))
        bm = mp.mpf(float(beta))
        s = mp.mpc(0)
        zk = mp.mpc(1)
        floor = mp.mpf(10) ** (-dps - 10)
        prev = mp.inf
        for k in range(200000):
            t = zk * mp.rgamma(am * k + bm)
            s += t
            mag = abs(t)
            if k > 3 and mag < floor and mag < prev:
                break
            prev = mag
            zk *= zz
        return complex(s)


def gamma_ref(x, dps=50):
    with mp.workdps(dps):
        return float(mp.gamma(x))


def free_propagator_1d(x, t, sigma):
    """Closed form for the order-one (Schrodinger) evolution of a Gaussian
    exp(-y^2 / (2 sigma^2)) under the e^{-i |xi|^2 t} multiplier.

    Gaussian-times-chirp integral: int exp(-p y^2 + q y) dy = sqrt(pi/p)
    exp(q^2/(4p)).
    """
    x = np.asarray(x, dtype=float)
    p = 1.0 / (2.0 * sigma ** 2) - 1j / (4.0 * t)
    q = -1j * x / (2.0 * t)
    pref = 1.0 / np.sqrt(4j * np.pi * t)
    return pref * np.sqrt(np.pi / p) * np.exp(q * q / (4.0 * p) + 1j * x ** 2 / (4.0 * t))


def caputo_power(p_exp, alpha, t):
    """Caputo derivative of t^p for p > 1: Gamma(p+1)/Gamma(p+1-alpha) t^(p-alpha)."""
    t = np.asarray(t, dtype=float)
    return gamma_ref(p_exp + 1.0) / gamma_ref(p_exp + 1.0 - alpha) * t ** (p_exp - alpha)


def trapezoid_cumulative(values, ts):
    """Plain cumulative trapezoid of samples (independent I^1 quadrature)."""
    values = np.asarray(values)
    ts = np.asarray(ts, dtype=float)
    dt = np.diff(ts)
    inc = 0.5 * (values[1:] + values[:-1]) * dt
    out = np.empty_like(values)
    out[0] = 0.0
    out[1:] = np.cumsum(inc)
    return out
