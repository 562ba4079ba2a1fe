"""Logarithmic-integral machinery on the line: Bernstein weights, Cauchy
transforms and moment identities, annihilating densities, spectral-gap test
functions, Beurling statistics, and Muntz-Szasz distances.

Poisson-measure quadrature uses the substitution x = tan(theta) on a uniform
theta grid, which handles the 1/(1+x^2) tails exactly; the harmonic conjugate
on the line is evaluated with the compensated kernel
(1/(x-t) + t/(1+t^2))/pi, the convention under which the conjugate of
log(1+x^2) is 2*atan2(1,x) and the conjugate of -sqrt(|x|) is
sgn(x)*sqrt(|x|).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import mpmath

TWO_PI = 2.0 * math.pi

from .errors import BadParameter, IllConditioned, NotLogIntegrable, Undefined
from .fields import LineField
from .circle_core import CoeffWindow


# ---------------------------------------------------------------------------
# Poisson-measure quadrature and the compensated conjugate kernel


def poisson_quadrature_nodes(n: int = 4096):
    """Nodes x = tan(theta) and weights for int g(x) dx = int g(tan th) sec^2 th dth."""
    theta = (np.arange(n) + 0.5) * math.pi / n - math.pi / 2.0
    x = np.tan(theta)
    w = (math.pi / n) / np.cos(theta) ** 2
    return x, w


def poisson_log_integral(fn, n: int = 4096) -> float:
    """int log(fn(x)) dP with dP = dx / (pi (1+x^2)), floored at 1e-300."""
    x, w = poisson_quadrature_nodes(n)
    vals = np.maximum(np.abs(np.asarray(fn(x), dtype=float)), 1e-300)
    return float(np.sum(w * np.log(vals) / (math.pi * (1.0 + x**2))))


def cayley_theta_grid(m: int) -> np.ndarray:
    """Uniform theta grid on (-pi, pi) avoiding the point at infinity."""
    return -math.pi + (np.arange(m) + 0.5) * (2.0 * math.pi / m)


def cayley_conjugate(g_theta: np.ndarray) -> np.ndarray:
    """Circle conjugate (multiplier -i sgn n) of samples on the theta grid.

    The harmonic conjugate is conformally natural, so for v on the line the
    conjugate function satisfies  conj_R(v)(tan(theta/2)) =
    conj_T(v o tan(./2))(theta)  up to an additive constant; this routine
    supplies the circle side at FFT cost and spectral accuracy.
    """
    m = g_theta.size
    spec = np.fft.fft(np.asarray(g_theta, dtype=float))
    k = np.fft.fftfreq(m, d=1.0 / m)
    mult = -1j * np.sign(k)
    mult[m // 2] = 0.0
    return np.real(np.fft.ifft(spec * mult))


def conjugate_cayley(v_fn, x_eval: np.ndarray, m: int = 1 << 19) -> np.ndarray:
    """Conjugate function on the line through the Cayley transform.

    v_fn is evaluated globally at tan(theta/2); the result interpolates the
    circle conjugate back at theta = 2 atan(x).  Accurate to the smoothness
    of v o tan(./2) on the circle (spectral away from singularities).
    """
    theta = cayley_theta_grid(m)
    g = np.asarray(v_fn(np.tan(theta / 2.0)), dtype=float)
    gt = cayley_conjugate(g)
    th_eval = 2.0 * np.arctan(np.asarray(x_eval, dtype=float))
    return np.interp(th_eval, theta, gt)


def conjugate_poisson(u_fn, xs: np.ndarray, nodes: int = 8192) -> np.ndarray:
    """Compensated-kernel conjugate function
    u~(x) = (1/pi) PV int u(t) (1/(x-t) + t/(1+t^2)) dt.

    The two kernel pieces are combined into (1+xt)/((x-t)(1+t^2)) and the
    principal value is removed by subtracting u(x), whose PV integral against
    the combined kernel vanishes; the resulting integrand is bounded in the
    tan-substituted variable for bounded profiles.
    """
    t, w = poisson_quadrature_nodes(nodes)
    ut = np.asarray(u_fn(t), dtype=float)
    out = np.empty(xs.size)
    for i, x in enumerate(xs):
        ux = float(np.asarray(u_fn(np.array([x])), dtype=float)[0])
        denom = (x - t) * (1.0 + t**2)
        small = np.abs(x - t) < 1e-13
        denom[small] = 1.0
        integrand = (ut - ux) * (1.0 + x * t) / denom
        integrand[small] = 0.0
        out[i] = float(np.sum(w * integrand) / math.pi)
    return out


# ---------------------------------------------------------------------------
# Bernstein weights


@dataclass(frozen=True)
class BernsteinWeight:
    """W(x) = exp(-int_c^{|x|} w(t)/t dt) for a nondecreasing positive profile.

    The profile is stored on a geometric t-grid so the cumulative integral is
    a trapezoid rule in s = log t (exact for w constant or logarithmic).
    """

    cutoff: float
    t_grid: np.ndarray
    w_profile: np.ndarray
    cumulative: np.ndarray
    fitted_a: float = 0.0

    @staticmethod
    def from_profile(w_fn, cutoff: float, t_max: float, n: int = 20001) -> "BernsteinWeight":
        if cutoff <= 0 or t_max <= cutoff:
            raise BadParameter("need 0 < cutoff < T_max")
        t = np.geomspace(cutoff, t_max, n)
        w = np.asarray(w_fn(t), dtype=float)
        if np.any(w <= 0):
            raise BadParameter("weight profile must be positive")
        if np.any(np.diff(w) < -1e-12 * np.max(w)):
            raise BadParameter("weight profile must be nondecreasing")
        s = np.log(t)
        integrand = w  # w(t)/t dt = w(e^s) ds
        cum = np.concatenate([[0.0], np.cumsum((integrand[1:] + integrand[:-1]) / 2.0 * np.diff(s))])
        return BernsteinWeight(cutoff, t, w, cum)

    @property
    def t_max(self) -> float:
        return float(self.t_grid[-1])

    def log_w_at(self, x) -> np.ndarray:
        """Interpolated profile value w(|x|) (clamped to the grid)."""
        ax = np.clip(np.abs(np.asarray(x, dtype=float)), self.cutoff, self.t_max)
        return np.interp(np.log(ax), np.log(self.t_grid), self.w_profile)

    def log_weight(self, x) -> np.ndarray:
        """log W(x); W = 1 on |x| <= cutoff."""
        ax = np.abs(np.asarray(x, dtype=float))
        if np.any(ax > self.t_max * (1 + 1e-12)):
            raise BadParameter("evaluation beyond the stored profile range")
        ax = np.clip(ax, self.cutoff, self.t_max)
        return -np.interp(np.log(ax), np.log(self.t_grid), self.cumulative)

    def __call__(self, x) -> np.ndarray:
        return np.exp(self.log_weight(x))

    def smallest_exponent(self, xi: float) -> int:
        """N(xi): the smallest integer >= w(xi)."""
        return int(math.ceil(float(self.log_w_at(xi)) - 1e-12))


def bernstein_weight_eval(bw: BernsteinWeight, x: float) -> float:
    """W(x) by the cumulative quadrature; monotone in |x| by construction."""
    return float(bw(np.array([x]))[0])


@dataclass(frozen=True)
class MajorizedMeasure:
    """A line measure (atoms + optional density) summable against W^{-1}."""

    atoms: tuple
    density: LineField | None
    weight: BernsteinWeight
    norm: float = 0.0

    @staticmethod
    def build(atoms, density, weight: BernsteinWeight) -> "MajorizedMeasure":
        norm = 0.0
        for x, mass in atoms:
            norm += abs(mass) / bernstein_weight_eval(weight, float(x))
        if density is not None:
            w_vals = weight(density.xs)
            norm += float(density.step
                          * np.sum(np.abs(density.values) / w_vals))
        if not math.isfinite(norm):
            raise BadParameter("W^{-1}-norm must be finite")
        return MajorizedMeasure(tuple(atoms), density, weight, float(norm))


def _max_moment(bw: BernsteinWeight, power: int) -> float:
    """Grid maximum of x^N W(x) over [0, T_max], computed in log space."""
    logs = power * np.log(bw.t_grid) - bw.cumulative
    interior = float(np.max(logs))
    # the region [0, cutoff] has W = 1, maximum c^N there
    return math.exp(max(interior, power * math.log(bw.cutoff)))


def fit_moment_constant(bw: BernsteinWeight, xi_probes=None) -> float:
    """Fit A once per weight: A = max over probe xi of
    max_x x^{N(xi)} W(x) / (xi^{N(xi)} W(xi))."""
    if xi_probes is None:
        lo = max(bw.cutoff, 1.0)
        xi_probes = np.geomspace(lo * 1.01, bw.t_max / 2.0, 9)
    best = 1.0
    for xi in xi_probes:
        n = bw.smallest_exponent(float(xi))
        lhs = _max_moment(bw, n)
        rhs = math.exp(n * math.log(xi) + float(bw.log_weight(xi)))
        best = max(best, lhs / rhs)
    return best


def weight_moment_bound(bw: BernsteinWeight, xi: float, fitted_a: float | None = None):
    """Return (max_x x^{N(xi)} W(x), A * xi^{N(xi)} W(xi)); contract lhs <= rhs."""
    if xi < max(bw.cutoff, 1.0):
        raise BadParameter("xi must be >= max(cutoff, 1)")
    a = fitted_a if fitted_a is not None else fit_moment_constant(bw)
    n = bw.smallest_exponent(xi)
    lhs = _max_moment(bw, n)
    rhs = a * math.exp(n * math.log(xi) + float(bw.log_weight(xi)))
    return lhs, rhs


def log_divergence_probe(bw: BernsteinWeight):
    """Compare -int log W dP with int w(t)/t^2 dt on nested ranges; the two
    diverge together (Fubini).  Returns ((I_half, I_full), (J_half, J_full))."""
    t = bw.t_grid
    s = np.log(t)

    def lhs(upto):
        mask = t <= upto
        tt, cc = t[mask], bw.cumulative[mask]
        integrand = cc / (math.pi * (1.0 + tt**2)) * tt  # d s = dt/t
        return float(np.trapezoid(integrand, np.log(tt)))

    def rhs2(upto):
        mask = t <= upto
        tt, ww = t[mask], bw.w_profile[mask]
        return float(np.trapezoid(ww / tt**2, tt))

    half, full = math.sqrt(bw.cutoff * bw.t_max), bw.t_max
    return (lhs(half), lhs(full)), (rhs2(half), rhs2(full))


# ---------------------------------------------------------------------------
# Cauchy transforms and moments


def cauchy_transform(atoms, density: LineField | None, z: complex) -> complex:
    """K(mu)(z) = int d mu(x) / (x - z) for atoms + an optional density."""
    zc = complex(z)
    if abs(zc.imag) < 1e-14:
        raise BadParameter("evaluation on the real line is not defined")
    acc = 0.0 + 0.0j
    for x, mass in atoms:
        acc += complex(mass) / (x - zc)
    if density is not None:
        xs = density.xs
        acc += density.step * complex(np.sum(density.values / (xs - zc)))
    return acc


def line_moments(atoms, density: LineField | None, count: int) -> np.ndarray:
    out = np.zeros(count, dtype=complex)
    for k in range(count):
        acc = 0.0 + 0.0j
        for x, mass in atoms:
            acc += complex(mass) * x**k
        if density is not None:
            acc += density.step * complex(np.sum(density.values * density.xs**k))
        out[k] = acc
    return out


def moment_shift_check(atoms, density: LineField | None, z: complex, n: int,
                       tol: float = 1e-8):
    """EQ-style identity: with vanishing moments m_0..m_{n-1},
    K(mu)(z) = z^{-n} K(x^n mu)(z).  Returns (lhs, rhs)."""
    moments = line_moments(atoms, density, n)
    if np.any(np.abs(moments) > tol):
        raise BadParameter(f"moments m_0..m_{n-1} must vanish within {tol}")
    lhs = cauchy_transform(atoms, density, z)
    shifted_atoms = [(x, complex(m) * x**n) for x, m in atoms]
    shifted_density = None
    if density is not None:
        shifted_density = LineField(density.half_width,
                                    density.values * density.xs**n)
    rhs = complex(z) ** (-n) * cauchy_transform(shifted_atoms, shifted_density, z)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Annihilating densities (vanishing moment sequences)


@dataclass
class AnnihilatingDensity:
    field: LineField          # boundary values of the outer function g
    moments: np.ndarray       # m_0..m_K quadrature values
    weight_norm: float        # int W^{-1} |g| dx  (= int e^{-sqrt|x|} dx slice)
    log_integral: float
    poly_split_power: float   # conjugate split exponent p


def _conjugate_log_weight(weight_fn, xs: np.ndarray, probe: float,
                          nodes: int) -> tuple:
    """Conjugate of log W with the polynomial part split off:
    log W = -p log(1+x^2) + r, conj = -2 p atan2(1, x) + conj(r).
    The residue r is bounded for polynomially decaying weights, where the
    compensated quadrature is second-order accurate."""
    def logw(t):
        return np.log(np.maximum(np.asarray(weight_fn(t), float), 1e-300))

    p = -float(logw(np.array([probe]))[0]) / math.log(1.0 + probe**2)

    def residue(t):
        tt = np.asarray(t, dtype=float)
        return logw(tt) + p * np.log(1.0 + tt**2)

    conj_r = conjugate_poisson(residue, xs, nodes=nodes)
    return -2.0 * p * np.arctan2(1.0, xs) + conj_r, p


def annihilating_density(weight_fn, half_width: float = 2048.0,
                         size: int = 2**15, n_moments: int = 7,
                         conj_nodes: int = 8192,
                         moment_nodes: int = 16001) -> AnnihilatingDensity:
    """Build the outer density g with |g| = W(x) e^{-|x|^{1/2}}; its moments
    m_0..m_K vanish (to quadrature accuracy) and int W^{-1}|g| dx =
    int e^{-sqrt|x|} dx < infinity.

    The boundary phase is conjugate(log W) + sgn(x) sqrt(|x|): the second term
    is the closed-form conjugate of -sqrt(|x|), the first is evaluated by the
    split compensated quadrature.  Moments are integrated after the
    substitution x = +-u^2, which removes the e^{-sqrt|x|} cusp (the factor
    becomes the entire function e^{-u} e^{+-iu}).  Refuses weights with
    divergent Poisson log-integral.
    """
    log_int = poisson_log_integral(lambda x: np.maximum(np.asarray(weight_fn(x), float), 0.0))
    if log_int < -1e5:
        raise NotLogIntegrable(f"Poisson log-integral estimate {log_int:.3e}")
    xs = -half_width + (2.0 * half_width / size) * np.arange(size)
    w_vals = np.asarray(weight_fn(xs), dtype=float)
    if np.any(w_vals <= 0) or np.mean(w_vals < 1e-300) > 0.01:
        raise NotLogIntegrable("weight vanishes on a non-trivial set")
    phase_w, p_split = _conjugate_log_weight(weight_fn, xs, half_width / 4.0, conj_nodes)
    phase = phase_w + np.sign(xs) * np.sqrt(np.abs(xs))
    mod = w_vals * np.exp(-np.sqrt(np.abs(xs)))
    g_vals = mod * np.exp(1j * phase)
    field = LineField(half_width, g_vals, {"construction": "outer W e^{-sqrt|x|}"})

    # moments on the cusp-free half-line grids
    u_max = math.sqrt(half_width)
    us = np.linspace(0.0, u_max, moment_nodes)
    x_pos = us**2
    phase_pos, _ = _conjugate_log_weight(weight_fn, x_pos, half_width / 4.0, conj_nodes)
    phase_neg, _ = _conjugate_log_weight(weight_fn, -x_pos, half_width / 4.0, conj_nodes)
    w_pos = np.asarray(weight_fn(x_pos), dtype=float)
    w_neg = np.asarray(weight_fn(-x_pos), dtype=float)
    base_pos = w_pos * np.exp(-us) * np.exp(1j * (phase_pos + us)) * 2.0 * us
    base_neg = w_neg * np.exp(-us) * np.exp(1j * (phase_neg - us)) * 2.0 * us
    from scipy.integrate import simpson

    moments = np.empty(n_moments, dtype=complex)
    for k in range(n_moments):
        pos = simpson(base_pos * x_pos**k, x=us)
        neg = simpson(base_neg * (-x_pos) ** k, x=us)
        moments[k] = pos + neg
    weight_norm = float(field.step * np.sum(np.exp(-np.sqrt(np.abs(xs)))))
    return AnnihilatingDensity(field, moments, weight_norm, log_int, p_split)


# ---------------------------------------------------------------------------
# Spectral-gap test functions


class SpectralGapTestFn:
    """psi(z) = cos(a sqrt((z-c)^2 - r^2)).

    Entire in z (cos is even, so the square-root branch is immaterial);
    psi(c) = cosh(a r); |psi| <= 1 outside [c-r, c+r]; on the middle half
    |x - c| <= r/2, |psi| >= e^{a r / sqrt 2} / 2.
    """

    def __init__(self, center: float, width: float, type_a: float):
        if width <= 0 or type_a <= 0:
            raise BadParameter("width and type must be positive")
        self.center = float(center)
        self.width = float(width)
        self.type_a = float(type_a)

    def __call__(self, z) -> np.ndarray:
        zz = np.asarray(z, dtype=complex)
        return np.cos(self.type_a * np.sqrt((zz - self.center) ** 2 - self.width**2))

    def center_value(self) -> float:
        return math.cosh(self.type_a * self.width)

    def middle_lower_bound(self) -> float:
        return math.exp(self.type_a * self.width / math.sqrt(2.0)) / 2.0


def spectral_gap_test_fn(center: float, width: float, type_a: float) -> SpectralGapTestFn:
    return SpectralGapTestFn(center, width, type_a)


# ---------------------------------------------------------------------------
# Beurling statistics


@dataclass
class DivergenceReport:
    value: float
    half_value: float
    classification: str
    flagged_divergent: bool


def beurling_vmu_stat(atoms, density: LineField | None, t_max: float = 512.0,
                      n_steps: int = 4096) -> DivergenceReport:
    """int_0^T log V_mu(t) / (1+t^2) dt with V_mu(t) = |mu|([t, inf)),
    floored logs, and a divergence classification from range doubling."""
    ts = np.linspace(0.0, t_max, n_steps)

    def v_at(t):
        acc = sum(abs(m) for x, m in atoms if x >= t)
        if density is not None:
            xs = density.xs
            acc += density.step * float(np.sum(np.abs(density.values)[xs >= t]))
        return acc

    vs = np.array([v_at(t) for t in ts])
    hit_zero = bool(np.any(vs <= 0.0))
    logv = np.log(np.maximum(vs, 1e-300))
    integrand = logv / (1.0 + ts**2)
    full = float(np.trapezoid(integrand, ts))
    half_mask = ts <= t_max / 2.0
    half = float(np.trapezoid(integrand[half_mask], ts[half_mask]))
    tail = full - half
    if hit_zero:
        cls = "divergent (V hits zero: statistic is -infinity)"
        flag = True
    elif tail < -abs(full) * 0.05 - 1e-9:
        cls = "divergent (tail still accumulating at T)"
        flag = True
    else:
        cls = "finite (tail settled)"
        flag = False
    return DivergenceReport(full, half, cls, flag)


def beurling_circle_stat(f_coeffs: CoeffWindow, n_max: int | None = None) -> DivergenceReport:
    """sum_{n>=1} log(rho_n)/n^2 with rho_n = sum_{k>=n} |f^(k)|.

    Classification compares per-octave increments: bounded increments (as for
    geometrically decaying coefficients, a harmonic-rate sum) report as not
    strongly divergent; growing increments (superexponential decay) raise the
    divergent flag.
    """
    hi = f_coeffs.hi
    n_top = min(n_max or hi, hi)
    if n_top < 4:
        raise BadParameter("need a coefficient window reaching n >= 4")
    mags = np.array([abs(f_coeffs[k]) for k in range(0, hi + 1)])
    tails = np.cumsum(mags[::-1])[::-1]  # tails[n] = sum_{k>=n} |c_k|
    if tails[1] <= 0:
        raise Undefined("zero analytic tail: statistic is degenerate")
    ns = np.arange(1, n_top + 1)
    rho = np.maximum(tails[1 : n_top + 1], 1e-300)
    terms = np.log(rho) / ns.astype(float) ** 2
    total = float(np.sum(terms))
    half = float(np.sum(terms[: n_top // 2]))
    # per-octave increments over [n_top/4, n_top/2] and [n_top/2, n_top]
    q1 = float(np.sum(terms[n_top // 4 : n_top // 2]))
    q2 = float(np.sum(terms[n_top // 2 :]))
    growing = abs(q2) > 4.0 * abs(q1) + 1e-12
    if np.any(tails[1:] <= 0):
        cls, flag = "divergent (zero tail)", True
    elif growing:
        cls, flag = "divergent (per-octave increments grow)", True
    else:
        cls, flag = "slow or finite (bounded per-octave increments)", False
    return DivergenceReport(total, half, cls, flag)


def cartwright_harness(arc: tuple, decay_fn, grid: int = 1024,
                       d_plus: int | None = None, eta: float = 1e-10,
                       tol: float = 1e-6):
    """Falsification harness for rapid unilateral decay of measures vanishing
    on an arc, in its honest finite-dimensional form.

    A forced one-sided decay cap(n) leaves only K_eff = #{n : cap(n) >= eta}
    numerically representable anti-analytic modes, so a smoothed measure
    obeying it is effectively a trigonometric object with spectrum in
    [-K_eff, d_plus].  When K_eff + d_plus + 1 is at most the number of arc
    sample points, vanishing on the arc together with unit mass is rigidly
    infeasible: the report carries sigma = min ||mu on arc||_2 over unit-mass
    candidates, and sigma > tol is the contradiction certificate (a norm
    collapse: no candidate reaches the constraint set).  Slow decay keeps
    K_eff large, the budget exceeds the constraints, and sigma = 0 -- no
    contradiction, matching the existence of such measures.

    Returns (sigma, K_eff, dimension, n_constraints, collapsed flag).
    """
    a, b = arc
    m = grid
    t = TWO_PI * np.arange(m) / m
    arc_idx = np.nonzero((t >= a) & (t <= b))[0]
    n_pts = arc_idx.size
    if n_pts < 16:
        raise BadParameter("arc too short for the rigidity probe")
    if d_plus is None:
        d_plus = n_pts - 100
    caps = np.asarray(decay_fn(np.arange(1, m // 2).astype(float)), dtype=float)
    k_eff = int(np.sum(caps >= eta))
    ks = np.arange(-k_eff, d_plus + 1)
    basis = np.exp(1j * np.outer(t[arc_idx], ks))
    # minimize ||basis @ c||_2 subject to c_0 = 1: project out the c_0 column
    col0 = basis[:, k_eff]
    rest = np.delete(basis, k_eff, axis=1)
    resid, *_ = np.linalg.lstsq(rest, -col0, rcond=None)
    sigma = float(np.linalg.norm(col0 + rest @ resid) / math.sqrt(n_pts))
    collapsed = sigma > tol
    return sigma, k_eff, ks.size, n_pts, collapsed


# ---------------------------------------------------------------------------
# Muntz-Szasz distances


def muntz_distance(lambdas, kappa: float, dps: int = 50) -> float:
    """L^2[0,1] distance from t^kappa to span{t^lambda} via the Gram system
    <t^a, t^b> = 1/(a+b+1), solved in 50-digit arithmetic (the Gram matrix is
    Hilbert-like and catastrophically conditioned in double precision)."""
    lams = [float(x) for x in lambdas]
    if kappa <= -0.5:
        raise BadParameter("kappa must exceed -1/2")
    if any(x <= -0.5 for x in lams):
        raise BadParameter("exponents must exceed -1/2")
    if len(set(lams)) != len(lams):
        raise BadParameter("exponents must be distinct")
    if len(lams) > 20:
        raise IllConditioned("Gram solve limited to 20 exponents", condition=None)
    norm_sq = mpmath.mpf(1) / (2 * mpmath.mpf(kappa) + 1)
    if not lams:
        return float(mpmath.sqrt(norm_sq))
    if any(abs(x - kappa) < 1e-15 for x in lams):
        return 0.0
    with mpmath.workdps(dps):
        n = len(lams)
        g = mpmath.matrix(n, n)
        bvec = mpmath.matrix(n, 1)
        for i in range(n):
            bvec[i] = 1 / (mpmath.mpf(lams[i]) + kappa + 1)
            for j in range(n):
                g[i, j] = 1 / (mpmath.mpf(lams[i]) + mpmath.mpf(lams[j]) + 1)
        try:
            x = mpmath.lu_solve(g, bvec)
        except ZeroDivisionError as exc:
            raise IllConditioned("Gram matrix numerically singular") from exc
        dist_sq = norm_sq - sum(bvec[i] * x[i] for i in range(n))
        if dist_sq < 0:
            dist_sq = mpmath.mpf(0)
        return float(mpmath.sqrt(dist_sq))


def muntz_distance_oracle(lambdas, kappa: float, dps: int = 60) -> float:
    """Gram-determinant ratio oracle:
    dist^2 = det Gram(L u {kappa}) / det Gram(L)."""
    lams = [float(x) for x in lambdas]
    with mpmath.workdps(dps):
        def gram_det(exps):
            n = len(exps)
            g = mpmath.matrix(n, n)
            for i in range(n):
                for j in range(n):
                    g[i, j] = 1 / (mpmath.mpf(exps[i]) + mpmath.mpf(exps[j]) + 1)
            return mpmath.det(g)

        top = gram_det(lams + [kappa])
        bot = gram_det(lams) if lams else mpmath.mpf(1)
        return float(mpmath.sqrt(top / bot))
