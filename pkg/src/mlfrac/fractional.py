"""Discrete fractional calculus on time grids.

Riemann-Liouville integrals are computed by product integration against the
piecewise-linear interpolant of the data, with the weakly singular weight
integrated in closed form (exact moments).  The Caputo derivative of order
1 < alpha < 2 composes that integral (order 2 - alpha) with a discrete second
derivative of the jet-subtracted data.

A starting correction handles the t^alpha leading behaviour that solutions of
fractional evolution problems carry at t = 0: a few singular powers are
fitted on the first nodes, removed, differentiated in closed form, and added
back.  The split is exact for any fit coefficients, so a poor fit degrades
accuracy only near the origin, never correctness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma as _gamma

from .errors import NumericsError


@dataclass
class TimeGrid:
    """Nodes 0 < t_1 < ... < t_N; the origin itself is implicit (t0 = 0)."""

    nodes: np.ndarray
    uniform: bool = field(default=False)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=float)
        if self.nodes.ndim != 1 or self.nodes.size == 0:
            raise NumericsError("bad-grid", "nodes must be a 1-D sequence")
        if self.nodes[0] <= 0.0 or np.any(np.diff(self.nodes) <= 0.0):
            raise NumericsError("bad-grid",
                                "nodes must be strictly increasing and > 0")
        if self.uniform:
            h = self.nodes[0]
            if not np.allclose(np.diff(self.nodes), h, rtol=1e-12, atol=0.0):
                raise NumericsError("bad-grid", "uniform flag on ragged grid")

    @classmethod
    def regular(cls, t_end: float, n: int) -> "TimeGrid":
        return cls(t_end * np.arange(1, n + 1) / n, uniform=True)

    @property
    def step(self) -> float:
        return float(self.nodes[0])

    def __len__(self):
        return self.nodes.size


@dataclass
class TimeSeries:
    """Samples on a TimeGrid plus the initial jet (f(0), f'(0))."""

    grid: TimeGrid
    values: np.ndarray
    jet0: tuple = (0.0 + 0.0j, 0.0 + 0.0j)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape[0] != len(self.grid):
            raise NumericsError("bad-series",
                                "values length differs from node count")


def g_function(alpha: float, t):
    """Power kernel t^(alpha-1)/Gamma(alpha) for t > 0, zero for t <= 0."""
    if alpha == 0.0:
        raise NumericsError("dirac-not-pointwise",
                            "order zero is the Dirac case")
    if alpha < 0.0:
        raise NumericsError("order-negative", f"alpha={alpha}")
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    pos = t > 0.0
    out[pos] = t[pos] ** (alpha - 1.0) / _gamma(alpha)
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# Riemann-Liouville integral
# ---------------------------------------------------------------------------

def _rl_uniform(values: np.ndarray, f0: np.ndarray, h: float,
                alpha: float) -> np.ndarray:
    """Product integration on a uniform grid (time along axis 0).

    I(t_m) = h^a/Gamma(a+2) [ sum_{j=1}^{m-1} d_{m-j} f_j + e_m f_0 + f_m ].
    """
    n = values.shape[0]
    q = np.arange(0, n + 1, dtype=float)
    pw = q ** (alpha + 1.0)
    d = pw[2:] - 2.0 * pw[1:-1] + pw[:-2]          # d_q, q = 1..n-1
    m = np.arange(1, n + 1, dtype=float)
    e = (m - 1.0) ** (alpha + 1.0) - m ** (alpha + 1.0) \
        + (alpha + 1.0) * m ** alpha
    scale = h ** alpha / _gamma(alpha + 2.0)

    flat = values.reshape(n, -1)
    out = np.empty_like(flat)
    for c in range(flat.shape[1]):
        conv = np.convolve(d, flat[:-1, c], mode="full")[:n - 1] if n > 1 \
            else np.zeros(0, dtype=complex)
        out[0, c] = 0.0
        out[1:, c] = conv
    out += np.asarray(f0).reshape(1, -1) * e[:, None]
    out += flat
    return (scale * out).reshape(values.shape)


def _rl_nonuniform(values: np.ndarray, f0: np.ndarray, nodes: np.ndarray,
                   alpha: float) -> np.ndarray:
    """Direct per-target product integration (time along axis 0)."""
    n = nodes.size
    ts = np.concatenate(([0.0], nodes))
    flat = values.reshape(n, -1)
    vals0 = np.vstack([np.asarray(f0, dtype=complex).reshape(1, -1), flat])
    out = np.empty_like(flat)
    ga = _gamma(alpha)
    for m in range(1, n + 1):
        t = ts[m]
        ua = t - ts[:m]          # left endpoints distances
        ub = t - ts[1:m + 1]     # right endpoints distances
        m0 = (ua ** alpha - ub ** alpha) / alpha
        m1 = (ua ** (alpha + 1.0) - ub ** (alpha + 1.0)) / (alpha + 1.0)
        width = ua - ub
        a_w = (-ub * m0 + m1) / width
        b_w = (ua * m0 - m1) / width
        out[m - 1] = (a_w @ vals0[:m] + b_w @ vals0[1:m + 1]) / ga
    return out.reshape(values.shape)


def rl_integral(f: TimeSeries, alpha: float) -> TimeSeries:
    """Riemann-Liouville integral of order alpha > 0 at every node."""
    if alpha <= 0.0:
        raise NumericsError("order-not-positive", f"alpha={alpha}")
    f0 = np.asarray(f.jet0[0], dtype=complex)
    if f.grid.uniform:
        vals = _rl_uniform(f.values, f0, f.grid.step, alpha)
    else:
        vals = _rl_nonuniform(f.values, f0, f.grid.nodes, alpha)
    return TimeSeries(f.grid, vals, jet0=(0.0 + 0.0j, 0.0 + 0.0j))


# ---------------------------------------------------------------------------
# discrete differentiation helpers (uniform grids, origin value known)
# ---------------------------------------------------------------------------

def _second_diff_with_origin(w: np.ndarray, h: float) -> np.ndarray:
    """Second derivative samples at nodes 0..N given values w_0..w_N.

    Central stencils inside, one-sided 4-point stencils (second order) at the
    two ends.
    """
    n = w.shape[0] - 1
    if n < 3:
        raise NumericsError("grid-too-short", "need at least 4 points")
    d = np.empty_like(w)
    d[1:-1] = (w[2:] - 2.0 * w[1:-1] + w[:-2]) / h ** 2
    d[0] = (2.0 * w[0] - 5.0 * w[1] + 4.0 * w[2] - w[3]) / h ** 2
    d[-1] = (2.0 * w[-1] - 5.0 * w[-2] + 4.0 * w[-3] - w[-4]) / h ** 2
    return d


def _first_diff_with_origin(g: np.ndarray, h: float) -> np.ndarray:
    """First derivative at nodes 1..N given values g_0..g_N (central inside,
    one-sided second order at the right end)."""
    n = g.shape[0] - 1
    if n < 2:
        raise NumericsError("grid-too-short", "need at least 3 points")
    d = np.empty_like(g[1:])
    d[:-1] = (g[2:] - g[:-2]) / (2.0 * h)
    d[-1] = (3.0 * g[-1] - 4.0 * g[-2] + g[-3]) / (2.0 * h)
    return d


# ---------------------------------------------------------------------------
# Caputo derivative, order in (1, 2)
# ---------------------------------------------------------------------------

def _starting_powers(alpha: float) -> tuple[float, ...]:
    # spans the singular leading behaviour t^alpha and t^(alpha+1) as well as
    # the smooth powers t^2, t^3, so polynomial data is reproduced exactly
    return (alpha, 2.0, alpha + 1.0, 3.0)


def _fit_starting_coeffs(w: np.ndarray, nodes: np.ndarray, alpha: float,
                         n_fit: int) -> np.ndarray:
    """Least-squares coefficients of the singular starting basis on the
    first ``n_fit`` nodes.  Columns are scaled; small singular values are
    dropped, so near-collinear bases (alpha close to 2) stay harmless."""
    powers = _starting_powers(alpha)
    tt = nodes[:n_fit]
    cols = np.stack([tt ** p for p in powers], axis=1)
    norms = np.linalg.norm(cols, axis=0)
    a, *_ = np.linalg.lstsq(cols / norms, w[:n_fit].reshape(n_fit, -1),
                            rcond=1e-10)
    return (a / norms[:, None])


def caputo_derivative(f: TimeSeries, alpha: float,
                      starting_fit: bool = True,
                      path: str = "inner") -> TimeSeries:
    """Caputo derivative of order alpha in (1, 2) on a uniform grid.

    ``path="inner"`` (primary) applies the order-(2-alpha) integral to the
    discrete second derivative of the jet-subtracted data; ``path="outer"``
    integrates first and differences the result.  Values at the first and
    last nodes come from one-sided stencils and are lower order.
    """
    if not (1.0 < alpha < 2.0):
        raise NumericsError("order-out-of-range",
                            f"alpha={alpha} not in (1, 2)")
    if not f.grid.uniform:
        raise NumericsError("grid-not-uniform",
                            "Caputo stencils require a uniform grid")
    n = len(f.grid)
    if n < 5:
        raise NumericsError("grid-too-short", f"{n} nodes < 5")
    h = f.grid.step
    nodes = f.grid.nodes
    flat = f.values.reshape(n, -1)
    f0 = np.asarray(f.jet0[0], dtype=complex).reshape(1, -1)
    f1 = np.asarray(f.jet0[1], dtype=complex).reshape(1, -1)
    w = flat - f0 - f1 * nodes[:, None]

    if starting_fit:
        n_fit = min(max(8, 4), n, 12)
        coeffs = _fit_starting_coeffs(w, nodes, alpha, n_fit)
        powers = _starting_powers(alpha)
        basis = np.stack([nodes ** p for p in powers], axis=1)
        w = w - basis @ coeffs
        exact = np.zeros_like(w)
        for i, p in enumerate(powers):
            exact += (_gamma(p + 1.0) / _gamma(p + 1.0 - alpha)
                      * nodes[:, None] ** (p - alpha)) * coeffs[i][None, :]
    else:
        exact = np.zeros_like(w)

    w_full = np.vstack([np.zeros((1, w.shape[1]), dtype=complex), w])
    if path == "inner":
        d2 = _second_diff_with_origin(w_full, h)
        integ = _rl_uniform(d2[1:], d2[0], h, 2.0 - alpha)
        vals = integ + exact
    elif path == "outer":
        integ = _rl_uniform(w, w_full[0], h, 2.0 - alpha)
        g_full = np.vstack([np.zeros((1, w.shape[1]), dtype=complex), integ])
        vals = _second_diff_with_origin(g_full, h)[1:] + exact
    else:
        raise NumericsError("unknown-path", path)
    return TimeSeries(f.grid, vals.reshape(f.values.shape),
                      jet0=(0.0 + 0.0j, 0.0 + 0.0j))


def caputo_derivative_low(f: TimeSeries, mu: float) -> TimeSeries:
    """Caputo derivative of order mu in (0, 1) on a uniform grid:
    first derivative of I^(1-mu)[f - f(0)]."""
    if not (0.0 < mu < 1.0):
        raise NumericsError("order-out-of-range", f"mu={mu} not in (0, 1)")
    if not f.grid.uniform:
        raise NumericsError("grid-not-uniform",
                            "Caputo stencils require a uniform grid")
    n = len(f.grid)
    if n < 3:
        raise NumericsError("grid-too-short", f"{n} nodes < 3")
    flat = f.values.reshape(n, -1)
    f0 = np.asarray(f.jet0[0], dtype=complex).reshape(1, -1)
    w = flat - f0
    integ = _rl_uniform(w, np.zeros_like(f0), f.grid.step, 1.0 - mu)
    g_full = np.vstack([np.zeros((1, w.shape[1]), dtype=complex), integ])
    vals = _first_diff_with_origin(g_full, f.grid.step)
    return TimeSeries(f.grid, vals.reshape(f.values.shape),
                      jet0=(0.0 + 0.0j, 0.0 + 0.0j))
