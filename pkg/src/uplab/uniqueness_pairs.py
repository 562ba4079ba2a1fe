"""Localization operators, Amrein-Berthier / Logvinenko-Sereda machinery,
prescription solving, harmonic measure on the half-plane, and line-side
uncertainty checks.

The localization operator is T = P_E F^{-1}(1_F F .), realized with the
transform normalization of :mod:`uplab.fields` (forward e^{-i x xi} without
prefactor, inverse with 1/(2*pi)).  Norm bounds carry the induced 1/(2*pi)
factor: the Hilbert-Schmidt identity reads  sum_k lambda_k(T*T) =
|E| |F| / (2*pi),  so ||T|| <= sqrt(|E| |F| / (2*pi)).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BadInput, BadParameter, IterationBudgetExceeded, TruncationWarning
from .fields import LineField, line_inverse, line_transform
from .measures_sets import IntervalSet

TWO_PI = 2.0 * math.pi


def cell_mask(intervals: IntervalSet, centers: np.ndarray, h: float) -> np.ndarray:
    """Covered fraction of each grid cell [x-h/2, x+h/2); sharp interior cells,
    fractional boundary cells (second-order accurate measures)."""
    mask = np.zeros(centers.size)
    for a, b in intervals.intervals:
        lo = centers - h / 2.0
        hi = centers + h / 2.0
        mask += np.clip((np.minimum(hi, b) - np.maximum(lo, a)) / h, 0.0, 1.0)
    return np.clip(mask, 0.0, 1.0)


@dataclass(frozen=True)
class LocalizationSpec:
    """Spatial set E, frequency set F, and the grid geometry carrying them."""

    e_set: IntervalSet
    f_set: IntervalSet
    half_width: float
    size: int

    def __post_init__(self):
        if self.e_set.domain != "line" or self.f_set.domain != "line":
            raise BadParameter("E and F must be line interval sets")
        if self.size < 64 or (self.size & (self.size - 1)) != 0:
            raise BadParameter("grid size must be a power of two >= 64")
        xs_max = self.half_width
        for a, b in self.e_set.intervals:
            if a < -xs_max or b > xs_max:
                raise BadParameter("E must lie inside [-L, L]")
        xi_max = math.pi * self.size / (2.0 * self.half_width)
        for a, b in self.f_set.intervals:
            if a < -xi_max or b > xi_max:
                raise BadParameter("F must lie inside the grid frequency range")

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.size

    def masks(self):
        xs = -self.half_width + self.step * np.arange(self.size)
        xi_half = math.pi / self.step
        xis = (math.pi / self.half_width) * np.arange(-self.size // 2, self.size // 2)
        me = cell_mask(self.e_set, xs, self.step)
        dxi = xis[1] - xis[0]
        mf = cell_mask(self.f_set, xis, dxi)
        return me, mf

    def measures(self):
        me, mf = self.masks()
        dxi = math.pi / self.half_width
        return float(self.step * np.sum(me)), float(dxi * np.sum(mf))


def _apply_t(spec: LocalizationSpec, values: np.ndarray, me, mf) -> np.ndarray:
    f = LineField(spec.half_width, values)
    fhat = line_transform(f)
    clipped = LineField(fhat.half_width, fhat.values * mf, fhat.metadata)
    back = line_inverse(clipped, spec.half_width)
    return me * back.values


def _apply_t_star(spec: LocalizationSpec, values: np.ndarray, me, mf) -> np.ndarray:
    f = LineField(spec.half_width, values * me)
    fhat = line_transform(f)
    clipped = LineField(fhat.half_width, fhat.values * mf, fhat.metadata)
    return line_inverse(clipped, spec.half_width).values


@dataclass
class NormEstimate:
    """Certified power-iteration output: value with a Rayleigh interval."""

    value: float
    lo: float
    hi: float
    residual: float
    iterations: int
    converged: bool
    hs_bound: float


def loc_operator_norm(spec: LocalizationSpec, iters: int = 400,
                      tol: float = 1e-6) -> NormEstimate:
    """Power iteration on T*T for ||T||.

    Stops at Rayleigh residual ||T*T v - rho v|| <= tol * rho; always reports
    the interval [sqrt(rho), sqrt(min(1, rho + residual))] so a non-converged
    run never returns a point lie.  ||T|| <= 1 holds a priori.
    """
    me, mf = spec.masks()
    if not np.any(me > 0) or not np.any(mf > 0):
        measure_e, measure_f = spec.measures()
        return NormEstimate(0.0, 0.0, 0.0, 0.0, 0, True,
                            math.sqrt(measure_e * measure_f / TWO_PI))
    rng = np.random.default_rng(20250809)
    v = rng.standard_normal(spec.size) + 1j * rng.standard_normal(spec.size)
    v *= me
    if not np.any(np.abs(v) > 0):
        v = me.astype(complex)
    v /= np.linalg.norm(v)
    rho = 0.0
    residual = math.inf
    converged = False
    it = 0
    for it in range(1, iters + 1):
        w = _apply_t_star(spec, _apply_t(spec, v, me, mf), me, mf)
        rho = float(np.real(np.vdot(v, w)))
        residual = float(np.linalg.norm(w - rho * v))
        norm_w = np.linalg.norm(w)
        if norm_w == 0:
            rho, residual, converged = 0.0, 0.0, True
            break
        v = w / norm_w
        if residual <= tol * max(rho, 1e-30):
            converged = True
            break
    measure_e, measure_f = spec.measures()
    hs = math.sqrt(measure_e * measure_f / TWO_PI)
    lo = math.sqrt(max(rho, 0.0))
    hi = math.sqrt(min(1.0, max(rho, 0.0) + residual))
    return NormEstimate(lo, lo, hi, residual, it, converged, hs)


def dense_t_star_t(spec: LocalizationSpec) -> np.ndarray:
    """Explicit matrix of T*T (spectral oracle for small grids)."""
    me, mf = spec.masks()
    m = spec.size
    cols = np.empty((m, m), dtype=complex)
    for j in range(m):
        e = np.zeros(m, dtype=complex)
        e[j] = 1.0
        cols[:, j] = _apply_t_star(spec, _apply_t(spec, e, me, mf), me, mf)
    return cols


@dataclass
class ABReport:
    norm: float
    constant: float
    worst_ratio: float
    trials: int


def ab_inequality_check(spec: LocalizationSpec, trials: int = 100,
                        seed: int = 7) -> ABReport:
    """For random fields f, verify
    ||f||^2 <= C ( ||1_{E^c} f||^2 + (1/2pi) ||1_{F^c} fhat||^2 )
    with C = (1 - ||T||)^{-1}; reports the worst observed ratio."""
    est = loc_operator_norm(spec)
    if est.hi >= 1.0 and est.value >= 1.0:
        raise BadParameter("||T|| < 1 must be certified before the check")
    me, mf = spec.masks()
    c_const = 1.0 / (1.0 - est.value)
    rng = np.random.default_rng(seed)
    h = spec.step
    dxi = math.pi / spec.half_width
    worst = 0.0
    for _ in range(trials):
        vals = rng.standard_normal(spec.size) + 1j * rng.standard_normal(spec.size)
        f = LineField(spec.half_width, vals)
        fhat = line_transform(f)
        total = h * float(np.sum(np.abs(vals) ** 2))
        out_e = h * float(np.sum((1.0 - me) * np.abs(vals) ** 2))
        out_f = dxi / TWO_PI * float(np.sum((1.0 - mf) * np.abs(fhat.values) ** 2))
        ratio = total / max(out_e + out_f, 1e-300)
        worst = max(worst, ratio)
    return ABReport(est.value, c_const, worst, trials)


def prescribe(g: LineField, h: LineField, spec: LocalizationSpec,
              tol: float = 1e-8, max_terms: int = 2000) -> LineField:
    """Solve f = g on E and fhat = h on F through the truncated Neumann series
    f = (I - P_F^)(I-T)^{-1} g + (I - P_E)(I-T*)^{-1} h.

    g carries space samples; h carries the prescribed transform values on the
    frequency grid (the axis of line_transform output).
    """
    est = loc_operator_norm(spec)
    alpha = est.value
    if alpha > 0.95:
        raise BadParameter(f"||T|| = {alpha:.4f} exceeds the 0.95 gate")
    me, mf = spec.masks()
    h_space = line_inverse(
        LineField(math.pi / spec.step, h.values, {"space_half_width": spec.half_width}),
        spec.half_width,
    )
    scale = math.sqrt(g.norm2_sq()) + math.sqrt(h_space.norm2_sq()) + 1.0
    n_terms = 1
    if alpha > 0:
        n_terms = int(math.ceil(math.log(tol / (scale / (1 - alpha))) / math.log(max(alpha, 1e-12))))
        n_terms = max(n_terms, 1)
    if n_terms > max_terms:
        raise IterationBudgetExceeded(
            f"need {n_terms} Neumann terms for tol {tol:.1e} at ||T||={alpha:.3f}")

    def neumann(vec: np.ndarray, adjoint: bool) -> np.ndarray:
        acc = vec.copy()
        term = vec.copy()
        for _ in range(n_terms):
            term = (_apply_t_star if adjoint else _apply_t)(spec, term, me, mf)
            acc += term
        return acc

    u = neumann(g.values.astype(complex), adjoint=False)
    v = neumann(h_space.values.astype(complex), adjoint=True)

    # (I - P_F^) u
    uhat = line_transform(LineField(spec.half_width, u))
    u_out = line_inverse(LineField(uhat.half_width, uhat.values * (1.0 - mf),
                                   uhat.metadata), spec.half_width).values
    # (I - P_E) v
    v_out = (1.0 - me) * v
    return LineField(spec.half_width, u_out + v_out,
                     {"neumann_terms": n_terms, "operator_norm": alpha})


def prescription_residuals(f: LineField, g: LineField, h: LineField,
                           spec: LocalizationSpec):
    """sup_E |f - g| and sup_F |fhat - h| over fully covered grid cells."""
    me, mf = spec.masks()
    full_e = me >= 1.0 - 1e-12
    fhat = line_transform(f)
    full_f = mf >= 1.0 - 1e-12
    res_e = float(np.max(np.abs(f.values - g.values)[full_e])) if np.any(full_e) else 0.0
    res_f = float(np.max(np.abs(fhat.values - h.values)[full_f])) if np.any(full_f) else 0.0
    return res_e, res_f


def ls_density(e_set: IntervalSet, r: float) -> float:
    """inf over length-r windows of |I \\ E| / |I|, evaluated exactly at the
    breakpoints of the piecewise-linear window functional (the sweep includes
    every interval endpoint, so no grid step is involved for finite input)."""
    if r <= 0:
        raise BadParameter("window length r must be positive")
    if not e_set.intervals:
        return 1.0
    ends = []
    for a, b in e_set.intervals:
        ends.extend([a, b, a - r, b - r])
    lo_hull = min(a for a, _ in e_set.intervals)
    hi_hull = max(b for _, b in e_set.intervals)
    candidates = [x for x in ends if lo_hull - r <= x <= hi_hull + r]
    candidates.extend([lo_hull - r, hi_hull])
    best = 1.0
    for x in candidates:
        covered = e_set.measure(x, x + r)
        best = min(best, (r - covered) / r)
    return max(best, 0.0)


def harmonic_measure_line(s_set: IntervalSet, x: float) -> float:
    """omega_{x+i}(S) = sum over intervals of (arctan(b-x)-arctan(a-x))/pi."""
    acc = 0.0
    for a, b in s_set.intervals:
        acc += (math.atan(b - x) - math.atan(a - x)) / math.pi
    return acc


@dataclass
class LSReport:
    gamma: float
    proof_bound: float
    empirical_constant: float
    trials: int
    worst_witness: tuple = ()   # (x, |f(x)|) samples of the worst-ratio field


def ls_inequality_check(e_set: IntervalSet, bandwidth: float,
                        half_width: float = 64.0, size: int = 8192,
                        trials: int = 100, seed: int = 11,
                        gamma_sweep: int = 257) -> LSReport:
    """For random fields with spectrum in [-a, a], verify
    int |f|^2 <= (4 e^{2a})^{1/gamma} int_{E^c} |f|^2
    with gamma = inf_x omega_{x+i}(E^c) over the stored window."""
    comp = _line_complement(e_set, -half_width, half_width)
    xs_gamma = np.linspace(-half_width / 2, half_width / 2, gamma_sweep)
    gamma = min(harmonic_measure_line(comp, float(x)) for x in xs_gamma)
    if gamma <= 0:
        raise BadParameter("gamma = 0: complement has no harmonic mass")
    bound = (4.0 * math.exp(2.0 * bandwidth)) ** (1.0 / gamma)
    h = 2.0 * half_width / size
    xs = -half_width + h * np.arange(size)
    mask_comp = cell_mask(comp, xs, h)
    rng = np.random.default_rng(seed)
    xis = (math.pi / half_width) * np.arange(-size // 2, size // 2)
    band = np.abs(xis) <= bandwidth
    worst = 0.0
    witness = ()
    for _ in range(trials):
        spec_vals = np.zeros(size, dtype=complex)
        k = int(np.sum(band))
        spec_vals[band] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
        fhat = LineField(math.pi / h, spec_vals, {"space_half_width": half_width})
        f = line_inverse(fhat, half_width)
        total = float(np.sum(np.abs(f.values) ** 2))
        if total == 0.0:
            continue
        outside = float(np.sum(mask_comp * np.abs(f.values) ** 2))
        ratio = total / max(outside, 1e-300)
        if ratio > worst:
            worst = ratio
            stride = max(1, size // 64)
            witness = tuple(
                (float(x), float(abs(v)))
                for x, v in zip(xs[::stride], f.values[::stride])
            )
    return LSReport(gamma, bound, worst, trials, witness)


def _line_complement(e_set: IntervalSet, lo: float, hi: float) -> IntervalSet:
    comps = []
    cursor = lo
    for a, b in e_set.intervals:
        if a > cursor:
            comps.append((cursor, min(a, hi)))
        cursor = max(cursor, b)
        if cursor >= hi:
            break
    if cursor < hi:
        comps.append((cursor, hi))
    return IntervalSet("line", tuple(c for c in comps if c[1] > c[0]))


@dataclass
class UncertaintyReport:
    norm_sq: float
    sigma_x: float
    sigma_xi: float
    heisenberg_product: float
    entropy_x: float
    entropy_xi: float
    entropy_sum: float
    entropy_bound: float


def uncertainty_checks(f: LineField, tol: float = 1e-8) -> UncertaintyReport:
    """Heisenberg and entropic diagnostics, normalization-consistent.

    After scaling to int |f|^2 dx = 1: sigma_x, sigma_xi are centered second
    moments (frequency side carrying 1/2pi); the contracts are
    1 <= 2 sigma_x sigma_xi + tol  and  H_x + H_xi >= log(e/2) - tol, where
    H_xi is computed against |fhat|^2 dxi/(2 pi) with the unnormalized log
    argument -- the unique scaling that makes the Gaussian extremal in this
    transform convention.
    """
    g, ok = (f, True)
    if f.edge_sup() > 1e-6:
        warnings.warn("uncertainty_checks: field does not decay at the edge",
                      TruncationWarning, stacklevel=2)
    norm_sq = f.norm2_sq()
    if norm_sq <= 0:
        raise BadInput("zero field")
    vals = f.values / math.sqrt(norm_sq)
    xs = f.xs
    h = f.step
    dens_x = np.abs(vals) ** 2
    x0 = h * float(np.sum(xs * dens_x))
    sigma_x = math.sqrt(h * float(np.sum((xs - x0) ** 2 * dens_x)))
    fhat = line_transform(LineField(f.half_width, vals))
    xis = fhat.xs
    dxi = xis[1] - xis[0]
    dens_xi = np.abs(fhat.values) ** 2 / TWO_PI
    xi0 = dxi * float(np.sum(xis * dens_xi))
    sigma_xi = math.sqrt(dxi * float(np.sum((xis - xi0) ** 2 * dens_xi)))

    def entropy(weight, log_arg, step):
        d = np.maximum(log_arg, 1e-300)
        return -step * float(np.sum(weight * np.log(d)))

    # Frequency entropy uses the 2pi-rescaled pair (equivalently the density
    # |fhat(2 pi .)|^2), the unique scaling in this transform convention for
    # which the Gaussian attains log(e/2).
    h_x = entropy(dens_x, dens_x, h)
    h_xi = entropy(dens_xi, np.abs(fhat.values) ** 2, dxi)
    return UncertaintyReport(
        norm_sq=1.0,
        sigma_x=sigma_x,
        sigma_xi=sigma_xi,
        heisenberg_product=2.0 * sigma_x * sigma_xi,
        entropy_x=h_x,
        entropy_xi=h_xi,
        entropy_sum=h_x + h_xi,
        entropy_bound=math.log(math.e / 2.0),
    )


def pw_extend(fhat: LineField, bandwidth: float, z: complex,
              support_tol: float = 1e-9):
    """f(z) = (1/2pi) int fhat(xi) e^{i z xi} d xi for spectrum in [-a, a].

    Returns (value, bound) with the type bound
    (1/2pi) ||fhat||_{L^1} e^{a |Im z|}; raises BadInput when the mass outside
    [-a, a] exceeds support_tol relatively.
    """
    xis = fhat.xs
    dxi = xis[1] - xis[0]
    inside = np.abs(xis) <= bandwidth + dxi / 2.0
    mass_out = float(np.sum(np.abs(fhat.values[~inside]))) * dxi
    mass_all = float(np.sum(np.abs(fhat.values))) * dxi
    if mass_all > 0 and mass_out > support_tol * mass_all:
        raise BadInput(f"spectral mass outside [-a,a]: {mass_out:.3e}")
    zc = complex(z)
    value = dxi / TWO_PI * complex(np.sum(fhat.values[inside] * np.exp(1j * zc * xis[inside])))
    bound = mass_all / TWO_PI * math.exp(bandwidth * abs(zc.imag))
    return value, bound


def shannon_reconstruct(samples: dict, bandwidth: float, xi: float,
                        tail_l2: float = 0.0):
    """Sampling series  sum_n s_n sin(a xi - pi n)/(a xi - pi n)  over the
    provided lattice values s_n = fhat(pi n / a).

    Returns (value, tail_bound); the reported bound covers the dropped tail
    through Cauchy-Schwarz given the caller's l2 budget beyond the range.
    """
    if bandwidth <= 0:
        raise BadParameter("bandwidth must be positive")
    acc = 0.0 + 0.0j
    for n, s in samples.items():
        u = bandwidth * xi - math.pi * n
        acc += s * (math.sin(u) / u if abs(u) > 1e-12 else 1.0)
    if samples:
        n_max = max(abs(int(n)) for n in samples)
    else:
        n_max = 0
    dist = max(1.0, math.pi * (n_max - abs(bandwidth * xi / math.pi)))
    tail_bound = tail_l2 / math.sqrt(dist) if tail_l2 > 0 else 0.0
    return acc, tail_bound


def poisson_summation_check(f: LineField, f_callable=None, n_terms: int | None = None):
    """Return (2 pi sum_n f(2 pi n), sum_n fhat(n)) over the truncation range
    with crude tail indicators.

    Off-grid samples f(2 pi n) come from `f_callable` when provided, else from
    band-limited (sinc) interpolation of the grid data; fhat(n) is evaluated
    by the periodic trapezoid rule directly at integer frequencies, which is
    spectrally accurate for decaying smooth fields.
    """
    lw = f.half_width
    n_side = int(lw / TWO_PI) if n_terms is None else n_terms
    ns = np.arange(-n_side, n_side + 1)
    pts = TWO_PI * ns
    if f_callable is not None:
        f_vals = np.asarray([f_callable(p) for p in pts], dtype=complex)
    else:
        xs = f.xs
        h = f.step
        f_vals = np.empty(ns.size, dtype=complex)
        for i, p in enumerate(pts):
            u = (p - xs) * math.pi / h
            kern = np.sinc(u / math.pi)
            f_vals[i] = np.sum(f.values * kern)
    left = TWO_PI * complex(np.sum(f_vals))

    xs = f.xs
    h = f.step
    k_max = int(math.pi / h) - 1
    ks = np.arange(-k_max, k_max + 1)
    fhat_vals = h * np.exp(1j * 0) * np.array(
        [np.sum(f.values * np.exp(-1j * xs * k)) for k in ks]
    )
    right = complex(np.sum(fhat_vals))
    tail_left = float(np.abs(f_vals[0]) + np.abs(f_vals[-1]))
    tail_right = float(np.abs(fhat_vals[0]) + np.abs(fhat_vals[-1]))
    return left, right, {"tail_left": tail_left, "tail_right": tail_right}
