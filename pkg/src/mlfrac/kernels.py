"""Physical-space kernels by oscillatory radial Fourier inversion.

A kernel value K(r) is assembled from four exactly-split pieces, mirroring
the analytic decomposition of the symbol:

* cap   -- smooth low-frequency part (|xi| <= 1, bump cutoff),
* chirp -- the non-decaying leading oscillation, amplitude known in closed
           form, integrated to infinity by Levin shells / stationary window /
           boundary expansion,
* mid   -- symbol minus leading chirp on [1/2, P]: algebraic corrections,
           subdominant exponentials, and expansion remainder (decaying,
           tabulated once per case),
* tail  -- the algebraic corrections beyond P, closed out analytically.

Radial transforms per dimension (inverse-transform normalization
(2 pi)^(-n/2) int e^{i x.xi} m d xi):

    n=1: sqrt(2/pi)       int_0^inf cos(r rho) m(rho) d rho
    n=2:                  int_0^inf J0(r rho)  m(rho) rho d rho
    n=3: sqrt(2/pi) (1/r) int_0^inf sin(r rho) m(rho) rho d rho
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import binom, gammaln, j0

from .errors import NumericsError
from .oscquad import (
    ChirpFamilyIntegrator,
    ChirpPhase,
    OctaveChebInterp,
    PanelTable,
    chirp_integral,
    ibp_tail,
    power_tail_linear_phase,
    smooth_cutoff,
)
from .symbols import (
    LargeXiParts,
    SymbolKind,
    SymbolSpec,
    bessel_weight,
    large_xi_parts,
    symbol_eval_radial,
)


@dataclass
class KernelSample:
    spec: SymbolSpec | None
    radii: np.ndarray
    values: np.ndarray
    quad_error: np.ndarray
    windows: list | None = None       # index slices used by the fitter

    def __post_init__(self):
        self.radii = np.asarray(self.radii, dtype=float)
        if np.any(self.radii <= 0) or np.any(np.diff(self.radii) <= 0):
            raise NumericsError("bad-radii",
                                "radii must be positive and increasing")


@dataclass
class AsymptoticLaw:
    decay_exponent: float
    phase_exponent: float
    amp: float
    freq: float
    fit_window: tuple
    residual: float
    extras: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# theory helpers (exponents and thresholds per kind)
# ---------------------------------------------------------------------------

def envelope_exponent_theory(kind: SymbolKind, alpha: float, theta: float,
                             n: int) -> float:
    """Envelope power of |K(r)| at large r."""
    kind = SymbolKind(kind)
    if kind is SymbolKind.S1:
        return (1.0 - theta) * 0.0   # flat modulus for the quadratic chirp
    parts = large_xi_parts(SymbolSpec(kind, alpha, 1.0))
    lead_pow = parts.lead_pow
    return (n * alpha - n - (theta - lead_pow) * alpha) / (2.0 - alpha)


def phase_exponent_theory(alpha: float) -> float:
    return 2.0 / (2.0 - alpha)


def l1_threshold_theory(kind: SymbolKind, alpha: float, n: int) -> float:
    kind = SymbolKind(kind)
    table = {
        SymbolKind.S: n / alpha,
        SymbolKind.Q: (n - 2.0) / alpha,
        SymbolKind.P: n / alpha + 2.0 / alpha - 2.0,
        SymbolKind.M: n / alpha + 2.0,
        SymbolKind.N: n / alpha + 2.0 - 2.0 / alpha,
        SymbolKind.L: n / alpha + 2.0 / alpha,
        SymbolKind.S1: float(n),
    }
    return table[kind]


def small_x_regime_theory(kind: SymbolKind, theta: float, n: int) -> tuple:
    """Predicted small-r class: ("bounded"|"log"|"power", exponent)."""
    kind = SymbolKind(kind)
    if kind is SymbolKind.P:
        pivot, power = n - 4.0, 4.0 + theta - n
    elif kind is SymbolKind.M:
        pivot, power = float(n), theta - n
    else:   # S, Q, N, L share the n-2 pivot
        pivot, power = n - 2.0, 2.0 + theta - n
    if theta > pivot:
        return ("bounded", 0.0)
    if theta == pivot:
        return ("log", 0.0)
    return ("power", power)


# ---------------------------------------------------------------------------
# kernel machine
# ---------------------------------------------------------------------------

class _Machine:
    """Per-(spec, r-range, resolution) tabulations and assembly."""

    def __init__(self, spec: SymbolSpec, r_max: float, r_min: float,
                 resolution: float = 1.0):
        self.spec = spec
        self.n = spec.dim
        if self.n not in (1, 2, 3):
            raise NumericsError("unsupported-dimension", f"n={self.n}")
        self.res = resolution
        self.parts = large_xi_parts(spec, m=14)
        self.g = self.parts.phase_exponent
        self.tph = self.parts.phase_scale
        self.r_max = float(r_max)
        self.r_min = float(r_min)
        self.extra_pow = 1 if self.n in (2, 3) else 0
        self._jacobian = (lambda rho: rho) if self.extra_pow else \
            (lambda rho: np.ones_like(rho))
        self.p_mid = self._choose_mid_cut()
        self._family = None
        width = min(0.35, 6.0 / max(self.r_max, 1.0)) / resolution
        trig = {1: "cos", 2: "j0", 3: "sin"}[self.n]
        self.trig = trig

        def cap_amp(rho):
            return symbol_eval_radial(spec, rho) * smooth_cutoff(rho) \
                * self._jacobian(rho)

        def mid_amp(rho):
            full = symbol_eval_radial(spec, rho)
            lead = bessel_weight(rho, spec.theta) * self.parts.lead_coef \
                * rho ** self.parts.lead_pow \
                * np.exp(-1j * self.tph * rho ** self.g)
            return (full - lead) * (1.0 - smooth_cutoff(rho)) \
                * self._jacobian(rho)

        self.cap = PanelTable(cap_amp, 0.0, 1.0, min(width, 0.125))
        self.cap_coarse = PanelTable(cap_amp, 0.0, 1.0, min(width, 0.125) * 1.6)
        if spec.kind is SymbolKind.S1:
            self.mid = None
            self.mid_coarse = None
        else:
            # sample the (expensive) amplitude once per octave, transform the
            # cheap interpolant on the fine oscillation-resolving grid
            interp = OctaveChebInterp(mid_amp, 0.45, self.p_mid)
            self.mid = PanelTable(interp, 0.45, self.p_mid, width)
            self.mid_coarse = PanelTable(interp, 0.45, self.p_mid,
                                         width * 1.6)
            self.mid_interp_err = interp.interp_err

    # -- mid-piece truncation point ---------------------------------------
    def _choose_mid_cut(self) -> float:
        if self.spec.kind is SymbolKind.S1:
            return 1.0
        alpha = self.spec.alpha
        t = self.spec.t
        parts = self.parts
        scale = max(abs(parts.lead_coef), 1e-3)
        tol = 1e-12 * scale
        pivot = 2.0 * np.pi - 0.5 * alpha * np.pi <= alpha * np.pi + 1e-9
        sin2 = abs(np.sin(2.0 * np.pi / alpha))
        for rho in np.geomspace(6.0, 6000.0, 240):
            env = np.abs(parts.alg_coef) * rho ** parts.alg_pow
            # best achievable remainder ~ smallest retained envelope term
            alg_floor = env.min() if env.size else 0.0
            sad = 0.0
            if pivot:
                sad = abs(parts.lead_coef) * rho ** parts.lead_pow \
                    * np.exp(-t * sin2 * rho ** self.g)
            if alg_floor + sad <= tol:
                return float(max(rho, 8.0))
        return 6000.0

    # -- assembly ----------------------------------------------------------
    def kernel(self, radii) -> tuple[np.ndarray, np.ndarray]:
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        if radii.max() > self.r_max * 1.0001 or radii.min() < self.r_min * 0.999:
            raise NumericsError("radius-out-of-build",
                                f"machine built for [{self.r_min}, "
                                f"{self.r_max}]")
        n = self.n
        vals = np.zeros(radii.shape, dtype=complex)
        errs = np.zeros(radii.shape, dtype=float)

        cap = self.cap.transform(radii, self.trig)
        cap_err = np.abs(cap - self.cap_coarse.transform(radii, self.trig))
        vals += cap
        errs += cap_err

        if self.mid is not None:
            mid = self.mid.transform(radii, self.trig)
            mid_err = np.abs(mid - self.mid_coarse.transform(radii, self.trig))
            vals += mid
            errs += mid_err
            tail, tail_err = self._alg_tail(radii)
            vals += tail
            errs += tail_err

        osc, osc_err = self._chirp_piece(radii)
        vals += osc
        errs += osc_err

        if n == 1:
            pref = np.sqrt(2.0 / np.pi)
            vals *= pref
            errs *= pref
        elif n == 3:
            pref = np.sqrt(2.0 / np.pi) / radii
            vals *= pref
            errs *= pref
        return vals, errs

    # -- leading chirp to infinity -----------------------------------------
    def _chirp_piece(self, radii):
        parts = self.parts
        theta = self.spec.theta
        out = np.zeros(radii.shape, dtype=complex)
        err = np.zeros(radii.shape, dtype=float)
        tol = 1e-12 * max(abs(parts.lead_coef), 1e-6) / self.res

        def base_amp(rho):
            return parts.lead_coef * rho ** (parts.lead_pow + self.extra_pow) \
                * bessel_weight(rho, theta) * (1.0 - smooth_cutoff(rho))

        if self.n in (1, 3):
            if self._family is None:
                self._family = ChirpFamilyIntegrator(
                    base_amp, self.tph, self.g, a=0.45,
                    levin_n=20 + (8 if self.res > 1 else 0),
                    window_phase=60.0 * self.res)
            vp, ep = self._family.integrate(radii, +1.0, tol)
            vm, em = self._family.integrate(radii, -1.0, tol)
            if self.n == 1:
                out = 0.5 * (vp + vm)
            else:
                out = (vp - vm) / 2j
            err = 0.5 * (ep + em)
        else:
            for i, r in enumerate(radii):
                out[i], err[i] = self._chirp_piece_2d(r, base_amp, tol)
        stars = np.array([(self._rho_star(r) or 8.0) for r in radii])
        phase_peak = radii * 4.0 * stars + self.tph * (4.0 * stars) ** self.g
        err = err + np.abs(out) * phase_peak * 2.3e-16
        return out, err

    def _rho_star(self, r):
        return ChirpPhase(+1.0, r, self.tph, self.g).stationary()

    def _chirp_piece_2d(self, r, base_amp, tol):
        from scipy.special import hankel1
        x_split = 20.0 / r if r > 0 else np.inf
        total = 0.0 + 0.0j
        err = 0.0
        if x_split > 0.45:
            hi = min(x_split, self.p_mid * 50.0)

            def amp_direct(rho):
                return base_amp(rho) * j0(r * rho)

            # no stationary point: the Bessel factor is slow here
            phase = ChirpPhase(+1.0, 0.0, self.tph, self.g)
            edge = 0.45
            while edge < hi:
                nxt = min(2.0 * edge, hi)
                from .oscquad import levin_adaptive
                v, e = levin_adaptive(amp_direct, phase, edge, nxt, tol)
                total += v
                err += e
                edge = nxt
            lo_hankel = hi
        else:
            lo_hankel = 0.45
        if np.isfinite(lo_hankel):
            for s in (+1.0, -1.0):
                def amp_h(rho, s=s):
                    x = r * rho
                    h = hankel1(0, x) * np.sqrt(np.pi * x / 2.0) \
                        * np.exp(-1j * (x - np.pi / 4.0))
                    hs = h if s > 0 else np.conj(h)
                    return base_amp(rho) * hs \
                        * np.sqrt(2.0 / (np.pi * r * rho)) \
                        * np.exp(1j * s * -np.pi / 4.0) * 0.5

                v, e = chirp_integral(
                    amp_h, ChirpPhase(s, r, self.tph, self.g), lo_hankel,
                    tol, window_phase=60.0 * self.res)
                total += v
                err += e
        return total, err

    # -- algebraic corrections beyond the mid cut ---------------------------
    def _alg_tail(self, radii):
        parts = self.parts
        theta = self.spec.theta
        p_cut = self.p_mid
        out = np.zeros(radii.shape, dtype=complex)
        err = np.zeros(radii.shape, dtype=float)
        if parts.alg_coef.size == 0:
            return out, err
        keep = np.abs(parts.alg_coef) * p_cut ** parts.alg_pow > 1e-16
        coefs = parts.alg_coef[keep]
        pows = parts.alg_pow[keep] + self.extra_pow
        if coefs.size == 0:
            return out, err

        for i, r in enumerate(radii):
            if self.n != 2 and r * p_cut < 10.0:
                v, e = self._alg_tail_gamma(r, coefs, pows, p_cut, theta)
            else:
                v, e = self._alg_tail_direct(r, coefs, pows, p_cut)
            out[i] = v
            err[i] = e
        return out, err

    def _alg_tail_direct(self, r, coefs, pows, p_cut):
        """Boundary expansion (n=1,3) or Hankel-split expansion (n=2)."""
        theta = self.spec.theta

        def amp(rho):
            acc = np.zeros_like(np.asarray(rho, dtype=float), dtype=complex)
            for c, q in zip(coefs, pows):
                acc += c * rho ** q
            return acc * bessel_weight(rho, theta)

        if self.n in (1, 3):
            vp, ep = ibp_tail(amp, ChirpPhase(+1.0, r, 0.0, 2.0), p_cut,
                              levels=6)
            vm, em = ibp_tail(amp, ChirpPhase(-1.0, r, 0.0, 2.0), p_cut,
                              levels=6)
            if self.n == 1:
                return 0.5 * (vp + vm), 0.5 * (ep + em)
            return (vp - vm) / 2j, 0.5 * (ep + em)
        from scipy.special import hankel1
        total, err = 0.0 + 0.0j, 0.0
        for s in (+1.0, -1.0):
            def amp_h(rho, s=s):
                x = r * rho
                h = hankel1(0, x) * np.sqrt(np.pi * x / 2.0) \
                    * np.exp(-1j * (x - np.pi / 4.0))
                hs = h if s > 0 else np.conj(h)
                return amp(rho) * hs * np.sqrt(2.0 / (np.pi * r * rho)) \
                    * np.exp(-1j * s * np.pi / 4.0) * 0.5

            v, e = ibp_tail(amp_h, ChirpPhase(s, r, 0.0, 2.0), p_cut,
                            levels=4)
            total += v
            err += e
        return total, err

    def _alg_tail_gamma(self, r, coefs, pows, p_cut, theta):
        """Incomplete-gamma closure: expand the Bessel weight in powers."""
        total = 0.0 + 0.0j
        js = np.arange(0, 7)
        bw = binom(-theta / 2.0, js) if theta > 0 else np.array([1.0])
        for s in (+1.0, -1.0):
            acc = 0.0 + 0.0j
            for c, q in zip(coefs, pows):
                for jj, bj in enumerate(bw):
                    if bj == 0.0:
                        continue
                    qq = q - theta - 2.0 * jj
                    acc += c * bj * power_tail_linear_phase(qq, s * r, p_cut)
            if self.n == 1:
                total += 0.5 * acc
            else:
                total += acc / 2j * (1.0 if s > 0 else -1.0)
        trunc = np.abs(coefs).max() * p_cut ** (pows.max() - theta - 14.0)
        return total, trunc + 1e-16 * abs(total)


_MACHINES: dict = {}


def _machine_for(spec: SymbolSpec, radii, resolution: float) -> _Machine:
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    r_lo, r_hi = float(radii.min()), float(radii.max())
    # bucket the range so repeated calls reuse tabulations
    lo_b = 2.0 ** np.floor(np.log2(max(r_lo, 1e-6)))
    hi_b = 2.0 ** np.ceil(np.log2(r_hi))
    key = (spec.kind, spec.alpha, spec.t, spec.theta, spec.dim,
           lo_b, hi_b, resolution)
    mach = _MACHINES.get(key)
    if mach is None:
        mach = _Machine(spec, hi_b, lo_b, resolution)
        if len(_MACHINES) > 64:
            _MACHINES.clear()
        _MACHINES[key] = mach
    return mach


def kernel_invert(spec: SymbolSpec, radii,
                  resolution: float = 1.0) -> KernelSample:
    """Kernel values at the given radii with per-radius error estimates."""
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    mach = _machine_for(spec, radii, resolution)
    vals, errs = mach.kernel(radii)
    return KernelSample(spec, radii, vals, errs)


# ---------------------------------------------------------------------------
# sampling for asymptotic-law fits
# ---------------------------------------------------------------------------

def choose_fit_range(spec: SymbolSpec) -> tuple[float, float]:
    """Radius range where the large-r law is active and resolvable.

    Lower end: the stationary frequency and the stationary phase must both be
    large.  Upper end: the local oscillation must stay representable in
    double precision (stationary frequency below ~3e9).
    """
    g = 2.0 / spec.alpha if spec.kind is not SymbolKind.S1 else 2.0
    t = spec.t

    def rho_star(r):
        return (r / (t * g)) ** (1.0 / (g - 1.0))

    def phase_star(r):
        return r * rho_star(r) * (g - 1.0) / g

    grid = np.geomspace(0.3, 200.0, 4000)
    ok = np.array([rho_star(r) >= 10.0 and phase_star(r) >= 40.0
                   and rho_star(r) <= 3e9 for r in grid])
    if not ok.any():
        raise NumericsError("no-fit-range", "law window empty")
    r_lo = grid[ok][0]
    r_hi = grid[ok][-1]
    # prefer the conventional [5, 50] decade when it is admissible
    lo = max(r_lo * 1.05, min(5.0, r_hi / 8.0))
    hi = min(r_hi * 0.95, max(50.0, lo * 8.0), lo * 12.0)
    if hi > r_hi:
        hi = r_hi * 0.95
    return float(lo), float(hi)


def sample_for_fit(spec: SymbolSpec, r_lo: float | None = None,
                   r_hi: float | None = None, n_windows: int = 10,
                   per_window: int = 40, oversample: float = 8.0,
                   resolution: float = 1.0) -> KernelSample:
    """Windowed radial sampling: bursts at the local oscillation scale."""
    if r_lo is None or r_hi is None:
        lo, hi = choose_fit_range(spec)
        r_lo = lo if r_lo is None else r_lo
        r_hi = hi if r_hi is None else r_hi
    g = 2.0 / spec.alpha if spec.kind is not SymbolKind.S1 else 2.0
    t = spec.t
    centers = np.geomspace(r_lo, r_hi, n_windows)
    radii = []
    windows = []
    pos = 0
    for rc in centers:
        rho_star = (rc / (t * g)) ** (1.0 / (g - 1.0))
        lam = 2.0 * np.pi / rho_star
        delta = lam / oversample
        delta = max(delta, rc * 1e-12)
        half = 0.5 * (per_window - 1) * delta
        rs = rc - half + delta * np.arange(per_window)
        radii.append(rs)
        windows.append(slice(pos, pos + per_window))
        pos += per_window
    radii = np.concatenate(radii)
    if np.any(np.diff(radii) <= 0):
        raise NumericsError("windows-overlap",
                            "fit windows overlap; reduce n_windows or "
                            "per_window")
    sample = kernel_invert(spec, radii, resolution=resolution)
    sample.windows = windows
    return sample


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _parabolic_peak(x, y):
    i = int(np.argmax(y))
    if 0 < i < y.size - 1:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        den = y0 - 2.0 * y1 + y2
        if den != 0:
            off = 0.5 * (y0 - y2) / den
            off = np.clip(off, -1.0, 1.0)
            dx = 0.5 * (x[min(i + 1, x.size - 1)] - x[max(i - 1, 0)])
            return x[i] + off * dx, y1 - 0.25 * (y0 - y2) * off
    return x[i], y[i]


def fit_asymptotic_law(sample: KernelSample) -> AsymptoticLaw:
    """Extract envelope power-law and oscillation law from kernel samples."""
    r = sample.radii
    k = sample.values
    if sample.windows:
        cents, envs, freqs, jitters = [], [], [], []
        cycles = 0.0
        for sl in sample.windows:
            rs, ks = r[sl], k[sl]
            if rs.size < 4:
                continue
            delta = rs[1] - rs[0]
            dphi = np.angle(ks[1:] * np.conj(ks[:-1]))
            cycles += float(np.abs(dphi).sum()) / (2.0 * np.pi)
            omega = abs(float(np.mean(dphi))) / delta
            _, env = _parabolic_peak(rs, np.abs(ks))
            cents.append(float(np.median(rs)))
            envs.append(env)
            freqs.append(omega)
            jitters.append(float(np.std(dphi)))
        if cycles < 5.0:
            raise NumericsError("insufficient-oscillations",
                                f"{cycles:.2f} phase cycles sampled")
        cents = np.asarray(cents)
        envs = np.asarray(envs)
        freqs = np.asarray(freqs)
        pe, le = np.polyfit(np.log(cents), np.log(envs), 1)
        res = float(np.sqrt(np.mean(
            (np.log(envs) - (pe * np.log(cents) + le)) ** 2)))
        pf, lf = np.polyfit(np.log(cents), np.log(freqs), 1)
        q = pf + 1.0
        b = float(np.exp(lf) / max(q, 1e-12))
        return AsymptoticLaw(float(pe), float(q), float(np.exp(le)), b,
                             (float(r.min()), float(r.max())), res,
                             extras={"phase_jitter": jitters,
                                     "cycles": cycles})
    # global fallback: continuous sampling, unwrap across everything
    phase = np.unwrap(np.angle(k))
    cycles = abs(phase[-1] - phase[0]) / (2.0 * np.pi)
    if cycles < 5.0:
        raise NumericsError("insufficient-oscillations",
                            f"{cycles:.2f} phase cycles sampled")
    lr = np.log(r)
    omega = np.abs(np.gradient(phase, r))
    good = omega > 0
    pf, lf = np.polyfit(lr[good], np.log(omega[good]), 1)
    q = pf + 1.0
    b = float(np.exp(lf) / max(q, 1e-12))
    pe, le = np.polyfit(lr, np.log(np.abs(k)), 1)
    res = float(np.sqrt(np.mean((np.log(np.abs(k)) - (pe * lr + le)) ** 2)))
    return AsymptoticLaw(float(pe), float(q), float(np.exp(le)), b,
                         (float(r.min()), float(r.max())), res,
                         extras={"cycles": float(cycles)})


# ---------------------------------------------------------------------------
# small-radius behaviour
# ---------------------------------------------------------------------------

def small_x_behavior(spec: SymbolSpec, radii=None) -> dict:
    """Classify the r -> 0 behaviour into bounded / log / power."""
    if radii is None:
        radii = 2.0 ** -np.arange(2.0, 11.0)
    radii = np.sort(np.asarray(radii, dtype=float))
    sample = kernel_invert(spec, radii)
    mags = np.abs(sample.values)
    lr = np.log(radii)
    slopes = np.diff(np.log(mags)) / np.diff(lr)
    end_slope = float(np.mean(slopes[:3]))      # smallest radii first
    # growth increments per halving, measured toward r -> 0
    incs = mags[:-1] - mags[1:]
    if abs(end_slope) > 0.15:
        observed = ("power", end_slope)
    else:
        # distinguish saturation from logarithmic growth
        g_last = incs[0]
        g_prev = incs[1] if incs.size > 1 else g_last
        ratio = abs(g_last) / max(abs(g_prev), 1e-300)
        if ratio < 0.6 or abs(g_last) < 1e-3 * mags[0]:
            observed = ("bounded", 0.0)
        else:
            observed = ("log", 0.0)
    predicted = small_x_regime_theory(spec.kind, spec.theta, spec.dim)
    return {
        "observed": observed,
        "predicted": predicted,
        "match": observed[0] == predicted[0],
        "radii": radii,
        "magnitudes": mags,
        "end_slope": end_slope,
    }


# ---------------------------------------------------------------------------
# Bessel-potential kernel
# ---------------------------------------------------------------------------

def bessel_kernel_G(theta: float, n: int, radii) -> KernelSample:
    """Kernel of the smoothing multiplier (1+|xi|^2)^(-theta/2), normalized
    so its total integral equals (2 pi)^(n/2)."""
    if theta <= 0:
        raise NumericsError("order-not-positive", f"theta={theta}")
    from scipy.integrate import quad
    from scipy.special import gamma as _gam

    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    const = 2.0 ** (n / 2.0 - theta) / _gam(theta / 2.0)
    vals = np.empty(radii.shape, dtype=complex)
    errs = np.empty(radii.shape, dtype=float)
    for i, r in enumerate(radii):
        def f(u):
            s = r * np.exp(u)
            return np.exp(-r * np.exp(-u) - s / 4.0) * s ** ((theta - n) / 2.0)
        v, e = quad(f, -40.0, 40.0, limit=400)
        vals[i] = const * v
        errs[i] = const * e
    return KernelSample(None, radii, vals, errs)


# ---------------------------------------------------------------------------
# integrability threshold scan
# ---------------------------------------------------------------------------

def l1_threshold_scan(kind: SymbolKind, alpha: float, n: int,
                      theta_list, t: float = 1.0,
                      r_lo: float = 2.0, r_hi: float = 40.0,
                      n_r: int = 48) -> dict:
    """Envelope slope of r^(n-1)|K| per theta; the integrability threshold is
    where the fitted slope crosses -1 (tail integral marginally divergent)."""
    kind = SymbolKind(kind)
    thetas = np.asarray(sorted(theta_list), dtype=float)
    radii = np.geomspace(r_lo, r_hi, n_r)
    slopes = np.empty(thetas.shape)
    for i, th in enumerate(thetas):
        spec = SymbolSpec(kind, alpha, t, th, n)
        sample = kernel_invert(spec, radii)
        mag = np.abs(sample.values) * radii ** (n - 1)
        s, _ = np.polyfit(np.log(radii), np.log(np.maximum(mag, 1e-300)), 1)
        slopes[i] = s
    # fitted slope is linear in theta: slope(theta) = a + b theta
    b, a = np.polyfit(thetas, slopes, 1)
    threshold = (-1.0 - a) / b
    classes = ["convergent" if s < -1.05 else
               ("divergent" if s > -0.95 else "marginal") for s in slopes]
    return {
        "thetas": thetas,
        "slopes": slopes,
        "classification": classes,
        "empirical_threshold": float(threshold),
        "theory_threshold": l1_threshold_theory(kind, alpha, n),
    }


# ---------------------------------------------------------------------------
# piecewise upper bounds
# ---------------------------------------------------------------------------

def _sigma_exponent(kind: SymbolKind, alpha: float, theta: float,
                    n: int) -> float:
    kind = SymbolKind(kind)
    if kind is SymbolKind.S:
        return (theta * alpha - n) / (2.0 - alpha)
    if kind is SymbolKind.Q:
        return (theta * alpha + 2.0 - n) / (2.0 - alpha)
    if kind is SymbolKind.P:
        return (theta * alpha + 2.0 * alpha - 2.0 - n) / (2.0 - alpha)
    raise NumericsError("unsupported-kind", f"bounds for {kind}")


def _inner_power(kind: SymbolKind, alpha: float, theta: float,
                 n: int) -> float:
    kind = SymbolKind(kind)
    if kind is SymbolKind.S:
        return theta - n
    if kind is SymbolKind.Q:
        return theta - n + 2.0 / alpha
    if kind is SymbolKind.P:
        return theta - n + 2.0 - 2.0 / alpha
    raise NumericsError("unsupported-kind", f"bounds for {kind}")


def piecewise_bound(kind: SymbolKind, alpha: float, theta: float, n: int,
                    t: float, r) -> np.ndarray:
    """The piecewise upper-bound profile (constant set to 1)."""
    r = np.asarray(r, dtype=float)
    sig = _sigma_exponent(kind, alpha, theta, n)
    if sig <= 0:
        raise NumericsError("theta-below-threshold",
                            "bounds need theta above the kind threshold")
    ip = _inner_power(kind, alpha, theta, n)
    ts = t ** (alpha / 2.0)
    out = np.empty_like(r)
    if t < 1.0:
        inner = r <= ts
        mid = (r > ts) & (r <= 1.0)
        outer = r > 1.0
        out[inner] = np.maximum(1.0, r[inner] ** ip)
        out[mid] = max(1.0, ts ** ip)
        out[outer] = r[outer] ** (-n - sig)
    else:
        inner = r <= ts
        outer = r > ts
        out[inner] = np.maximum(1.0, r[inner] ** ip)
        out[outer] = t ** (alpha / 2.0 * (theta + sig)) * r[outer] ** (-n - sig)
    return out


def piecewise_bound_check(kind: SymbolKind, alpha: float, theta: float,
                          n: int, t_list, r_lo: float = 0.05,
                          r_hi: float = 50.0, n_r: int = 36) -> dict:
    """Max ratio |K(t, x)| / bound over a (t, r) grid."""
    kind = SymbolKind(kind)
    radii = np.geomspace(r_lo, r_hi, n_r)
    ratios = {}
    worst = 0.0
    worst_at = None
    for t in t_list:
        spec = SymbolSpec(kind, alpha, t, theta, n)
        sample = kernel_invert(spec, radii)
        bound = piecewise_bound(kind, alpha, theta, n, t, radii)
        rr = np.abs(sample.values) / bound
        ratios[t] = rr
        i = int(np.argmax(rr))
        if rr[i] > worst:
            worst, worst_at = float(rr[i]), (float(t), float(radii[i]))
    return {
        "radii": radii,
        "ratios": ratios,
        "max_ratio": worst,
        "argmax": worst_at,
        "finite": bool(np.isfinite(worst)),
    }


def uniform_l1_window(kind: SymbolKind, alpha: float, theta: float, n: int,
                      t0: float = 1.0, n_t: int = 5,
                      r_hi: float = 60.0) -> dict:
    """sup over t in [t0/2, 3 t0/2] of the radial L1 mass of the kernel."""
    kind = SymbolKind(kind)
    angular = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}[n]
    radii = np.geomspace(1e-2, r_hi, 160)
    masses = []
    for t in np.linspace(0.5 * t0, 1.5 * t0, n_t):
        spec = SymbolSpec(kind, alpha, t, theta, n)
        sample = kernel_invert(spec, radii)
        dens = np.abs(sample.values) * radii ** (n - 1) * angular
        mass = np.trapezoid(dens, radii)
        # extrapolated tail from the fitted envelope decay
        s, c = np.polyfit(np.log(radii[-24:]),
                          np.log(dens[-24:] + 1e-300), 1)
        if s < -1.05:
            mass += dens[-1] * radii[-1] / (-(s + 1.0))
        masses.append(float(mass))
    return {"masses": masses, "sup": max(masses), "finite":
            bool(np.isfinite(max(masses)))}


# ---------------------------------------------------------------------------
# mismatch radius
# ---------------------------------------------------------------------------

def tail_mass(kind: SymbolKind, alpha: float, theta: float, n: int,
              t: float, r_from: float, r_direct: float = 60.0) -> float:
    """int_{|x| >= r_from} |K(t, x)| dx: direct quadrature out to
    ``r_direct`` plus a fitted power-law continuation (the dominating-bound
    shape |x|^(-n-sigma))."""
    angular = {1: 2.0, 2: 2.0 * np.pi, 3: 4.0 * np.pi}[n]
    spec = SymbolSpec(kind, alpha, t, theta, n)
    radii = np.geomspace(0.5, r_direct, 160)
    sample = kernel_invert(spec, radii)
    dens = np.abs(sample.values) * radii ** (n - 1) * angular
    s, c = np.polyfit(np.log(radii[-32:]), np.log(dens[-32:] + 1e-300), 1)
    if s >= -1.05:
        raise NumericsError("tail-not-integrable",
                            f"fitted tail slope {s:.2f} >= -1")
    amp = np.exp(c)

    def ext(r0):
        return amp * r0 ** (s + 1.0) / (-(s + 1.0))

    if r_from >= r_direct:
        return float(ext(r_from))
    lo = max(r_from, radii[0])
    msk = radii >= lo
    rr = np.concatenate([[lo], radii[msk]])
    dd = np.concatenate([[np.interp(lo, radii, dens)], dens[msk]])
    return float(np.trapezoid(dd, rr) + ext(r_direct))


def mismatch_radius(kind: SymbolKind, alpha: float, theta: float, n: int,
                    delta: float, t_samples=None, r_direct: float = 60.0,
                    r_cap: float = 1e5) -> dict:
    """Smallest sampled R with sup_t tail mass int_{|x| >= R-1} |K| <= delta."""
    if delta <= 0:
        raise NumericsError("delta-not-positive", f"delta={delta}")
    kind = SymbolKind(kind)
    if t_samples is None:
        t_samples = (0.1, 0.3, 0.5, 0.7, 0.9)
    candidates = np.unique(np.concatenate([
        np.geomspace(1.5, r_direct, 48), np.geomspace(r_direct, r_cap, 64)]))
    sup_tail = np.zeros(candidates.shape)
    for t in t_samples:
        tails = np.array([tail_mass(kind, alpha, theta, n, t, rc - 1.0,
                                    r_direct) for rc in candidates])
        sup_tail = np.maximum(sup_tail, tails)
    ok = sup_tail <= delta
    if not ok.any():
        raise NumericsError(
            "delta-unreachable",
            f"min tail over sampled radii is {sup_tail.min():.3e} > {delta}")
    idx = int(np.argmax(ok))
    return {
        "radius": float(candidates[idx]),
        "tail_at_radius": float(sup_tail[idx]),
        "tail_curve": (candidates, sup_tail),
        "delta": float(delta),
    }
