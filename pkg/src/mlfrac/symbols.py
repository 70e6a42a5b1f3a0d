"""Fourier symbols of the time-fractional dispersive evolution.

Every symbol is radial and has the shape

    pref(t) * |xi|^pow * E_{alpha,beta}(w),    w = i^{-alpha} t^alpha |xi|^2,

with (pref, beta, pow) read from a per-kind table; the order-one propagator
(kind ``S1``) is the plain quadratic chirp exp(-i |xi|^2 t).  The constant
i^{-alpha} is fixed to the principal branch exp(-i alpha pi / 2) everywhere.

``large_xi_parts`` exposes the pieces of the high-frequency expansion
(leading chirp amplitude and algebraic correction coefficients); the kernel
machinery integrates those pieces separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NumericsError
from .fractional import TimeGrid, TimeSeries, caputo_derivative_low
from .mittag_leffler import MLParams, ml_eval, ml_eval_array, recip_gamma


class SymbolKind(str, Enum):
    S = "S"          # position-data propagator
    Q = "Q"          # velocity-data propagator
    P = "P"          # forcing (Duhamel) kernel
    M = "M"          # time-regularity kernel for position data
    N = "N"          # time-regularity kernel for velocity data
    L = "L"          # time-regularity kernel for forcing
    H = "H"          # velocity-trace Duhamel kernel
    S1 = "S1"        # order-one (quadratic chirp) propagator


def i_minus_alpha(alpha: float) -> complex:
    """Principal-branch i^(-alpha) = exp(-i alpha pi / 2)."""
    return np.exp(-0.5j * np.pi * alpha)


@dataclass(frozen=True)
class SymbolSpec:
    kind: SymbolKind
    alpha: float = 1.5
    t: float = 1.0
    theta: float = 0.0
    dim: int = 1

    def __post_init__(self):
        kind = SymbolKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is SymbolKind.S1:
            if self.alpha != 1.0:
                object.__setattr__(self, "alpha", 1.0)
        elif not (1.0 < self.alpha < 2.0):
            raise NumericsError("alpha-out-of-range",
                                f"alpha={self.alpha} not in (1, 2)")
        if self.t < 0.0:
            raise NumericsError("negative-time", f"t={self.t}")
        if self.theta < 0.0:
            raise NumericsError("negative-smoothing", f"theta={self.theta}")
        if self.dim < 1:
            raise NumericsError("bad-dimension", f"dim={self.dim}")


def _kind_table(spec: SymbolSpec):
    """(prefactor, ml beta, |xi| power) for the generic shape."""
    a = spec.alpha
    t = spec.t
    ia = i_minus_alpha(a)
    kind = spec.kind
    if kind is SymbolKind.S:
        return 1.0 + 0.0j, 1.0, 0
    if kind is SymbolKind.Q:
        return complex(t), 2.0, 0
    if kind is SymbolKind.P:
        return ia * t ** (a - 1.0), a, 0
    if kind is SymbolKind.M:
        return ia, 1.0, 2
    if kind is SymbolKind.N:
        if t == 0.0:
            raise NumericsError("singular-time", "kernel N needs t > 0")
        return t ** (1.0 - a) + 0.0j, 2.0 - a, 0
    if kind is SymbolKind.L:
        return ia * t ** (a - 1.0), a, 2
    if kind is SymbolKind.H:
        if t == 0.0:
            raise NumericsError("singular-time", "kernel H needs t > 0")
        return ia * t ** (a - 2.0), a - 1.0, 0
    raise NumericsError("unknown-kind", str(kind))


def bessel_weight(rho, theta: float):
    """(1 + |xi|^2)^(-theta/2); identity when theta = 0."""
    if theta == 0.0:
        return np.ones_like(np.asarray(rho, dtype=float))
    rho = np.asarray(rho, dtype=float)
    return (1.0 + rho * rho) ** (-theta / 2.0)


def symbol_eval_radial(spec: SymbolSpec, rho) -> np.ndarray:
    """Symbol values at radial frequencies |xi| = rho (vectorized)."""
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    w = bessel_weight(rho, spec.theta)
    if spec.kind is SymbolKind.S1:
        return w * np.exp(-1j * rho ** 2 * spec.t)
    pref, beta, pw = _kind_table(spec)
    a = spec.alpha
    z = i_minus_alpha(a) * spec.t ** a * rho.astype(complex) ** 2
    vals = ml_eval_array(z, a, beta)
    return w * pref * rho ** pw * vals


def symbol_eval(spec: SymbolSpec, xi) -> complex:
    """Symbol value at a frequency vector xi (length = spec.dim)."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.size != spec.dim:
        raise NumericsError("bad-frequency",
                            f"xi has length {xi.size}, expected {spec.dim}")
    rho = float(np.sqrt(np.sum(xi * xi)))
    return complex(symbol_eval_radial(spec, rho)[0])


# ---------------------------------------------------------------------------
# high-frequency expansion
# ---------------------------------------------------------------------------

@dataclass
class LargeXiParts:
    """Pieces of the high-frequency expansion of a symbol.

    symbol(rho) ~ [lead_coef * rho^lead_pow * exp(-i t rho^(2/alpha))
                   + sum_k alg_coef[k] * rho^alg_pow[k]] * bessel_weight
    """

    lead_coef: complex
    lead_pow: float
    phase_scale: float          # t in the chirp exp(-i t rho^(2/alpha))
    phase_exponent: float       # 2/alpha (2 for the order-one propagator)
    alg_coef: np.ndarray
    alg_pow: np.ndarray
    theta: float


def large_xi_parts(spec: SymbolSpec, m: int = 8) -> LargeXiParts:
    """Expansion data with ``m`` algebraic correction terms."""
    if spec.kind is SymbolKind.S1:
        return LargeXiParts(1.0 + 0.0j, 0.0, spec.t, 2.0,
                            np.zeros(0, dtype=complex), np.zeros(0),
                            spec.theta)
    pref, beta, pw = _kind_table(spec)
    a = spec.alpha
    t = spec.t
    if t <= 0.0:
        raise NumericsError("singular-time", "expansion needs t > 0")
    # w = i^{-a} t^a rho^2 has arg = -a pi/2 exactly; principal fractional
    # powers reduce analytically:
    #   w^{1/a}      = -i t rho^{2/a}
    #   w^{(1-b)/a}  = (t^a rho^2)^{(1-b)/a} e^{-i pi (1-b)/2}
    lead_coef = (pref / a) * t ** (a * (1.0 - beta) / a) \
        * np.exp(-0.5j * np.pi * (1.0 - beta))
    lead_pow = 2.0 * (1.0 - beta) / a + pw
    ks = np.arange(1, m + 1)
    winv_coef = (np.exp(0.5j * np.pi * a) / t ** a) ** ks
    alg_coef = -pref * winv_coef * recip_gamma(beta - ks * a)
    alg_pow = -2.0 * ks + float(pw)
    return LargeXiParts(lead_coef, lead_pow, t, 2.0 / a,
                        alg_coef.astype(complex), alg_pow.astype(float),
                        spec.theta)


def symbol_large_xi(spec: SymbolSpec, xi, m: int = 6) -> complex:
    """m-term high-frequency value of the symbol at frequency vector xi."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rho = float(np.sqrt(np.sum(xi * xi)))
    parts = large_xi_parts(spec, m=m)
    if spec.t * rho ** parts.phase_exponent < 10.0:
        raise NumericsError("asymptotic-regime",
                            f"t |xi|^(2/alpha) = "
                            f"{spec.t * rho ** parts.phase_exponent:.3g} < 10")
    chirp = np.exp(-1j * parts.phase_scale * rho ** parts.phase_exponent)
    val = parts.lead_coef * rho ** parts.lead_pow * chirp
    val += np.sum(parts.alg_coef * rho ** parts.alg_pow)
    return complex(val * bessel_weight(rho, spec.theta))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def symbol_time_identity_check(alpha: float, xi, t_grid: TimeGrid) -> dict:
    """Check the Q-symbol's time derivatives against the S and P symbols.

    D_t^1 Q = S exactly; the fractional derivative of order 2 - alpha equals
    i^alpha P (the Laplace-side identity carries the i^alpha factor).
    """
    if not t_grid.uniform:
        raise NumericsError("grid-not-uniform", "identity check needs "
                            "a uniform time grid")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rho = float(np.sqrt(np.sum(xi * xi)))
    n = len(t_grid)
    q = np.empty(n, dtype=complex)
    s = np.empty(n, dtype=complex)
    p = np.empty(n, dtype=complex)
    for j, t in enumerate(t_grid.nodes):
        q[j] = symbol_eval_radial(SymbolSpec(SymbolKind.Q, alpha, t), rho)[0]
        s[j] = symbol_eval_radial(SymbolSpec(SymbolKind.S, alpha, t), rho)[0]
        p[j] = symbol_eval_radial(SymbolSpec(SymbolKind.P, alpha, t), rho)[0]
    h = t_grid.step
    dq = np.empty(n, dtype=complex)
    qx = np.concatenate(([0.0], q))           # Q(0, xi) = 0
    dq[:-1] = (qx[2:] - qx[:-2]) / (2.0 * h)
    dq[-1] = (3.0 * qx[-1] - 4.0 * qx[-2] + qx[-3]) / (2.0 * h)
    first_dev = np.abs(dq[:-1] - s[:-1]).max()

    series = TimeSeries(t_grid, q, jet0=(0.0 + 0.0j, 1.0 + 0.0j))
    frac = caputo_derivative_low(series, 2.0 - alpha).values
    ia = np.exp(0.5j * np.pi * alpha)          # i^alpha
    sl = slice(4, -1)
    frac_dev = np.abs(frac[sl] - ia * p[sl]).max()
    frac_scale = np.abs(p[sl]).max()
    return {
        "first_order_sup_dev": float(first_dev),
        "fractional_sup_dev": float(frac_dev),
        "fractional_scale": float(frac_scale),
        "nodes": n,
    }


_DERIV_WEIGHT = {
    SymbolKind.S: 0.0,
    SymbolKind.Q: None,    # -2/alpha, filled below
    SymbolKind.P: None,    # -2(alpha-1)/alpha
}


def symbol_derivative_bound_probe(kind: SymbolKind, alpha: float,
                                  order: int, xi_samples) -> dict:
    """Finite-difference directional derivatives versus the predicted
    |xi|-power; reports the ratio sup and its log-log growth slope."""
    if order not in (0, 1, 2):
        raise NumericsError("order-unsupported", f"order={order}")
    kind = SymbolKind(kind)
    xs = np.sort(np.asarray(xi_samples, dtype=float))
    spec_of = lambda: SymbolSpec(kind, alpha, 1.0)
    spec = spec_of()

    def m_of(x):
        return symbol_eval_radial(spec, abs(x))[0]

    gain = (2.0 / alpha - 1.0) * order
    if kind is SymbolKind.Q:
        gain += -2.0 / alpha
    elif kind is SymbolKind.P:
        gain += -2.0 * (alpha - 1.0) / alpha
    ratios = np.empty(xs.size)
    for i, x in enumerate(xs):
        freq = (2.0 / alpha) * x ** (2.0 / alpha - 1.0)
        hstep = 0.02 * min(1.0 / freq, x if x > 0 else 1.0)
        if order == 0:
            d = m_of(x)
        elif order == 1:
            d = (m_of(x + hstep) - m_of(x - hstep)) / (2.0 * hstep)
        else:
            d = (m_of(x + hstep) - 2.0 * m_of(x) + m_of(x - hstep)) \
                / hstep ** 2
        pred = max(x, 1.0) ** gain
        ratios[i] = abs(d) / pred
    big = xs >= 1.0
    slope = 0.0
    if big.sum() >= 3:
        slope = float(np.polyfit(np.log(xs[big]),
                                 np.log(np.maximum(ratios[big], 1e-300)),
                                 1)[0])
    return {
        "ratio_sup": float(ratios.max()),
        "log_slope": slope,
        "ratios": ratios,
        "samples": xs,
    }
