"""Discrete Fourier analysis on the circle: grids, kernels, summation methods,
Wiener inversion and atom/Rajchman diagnostics.

Conventions.  A grid function lives on the uniform grid t_j = 2*pi*j/M and the
normalized measure dm = dt/(2*pi) is realized as the plain arithmetic mean over
the grid, so that

    c_n = (1/M) * sum_j f(t_j) e^{-i n t_j}

is exactly the integral int f(zeta) zeta^{-n} dm for trigonometric polynomials
of degree < M/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadInput,
    BadParameter,
    GridTooCoarse,
    NoConvergence,
    NotInvertible,
)

TWO_PI = 2.0 * math.pi

_REAL_TOL = 1e-12


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class GridFunctionT:
    """Uniformly sampled complex function on the circle.

    values[j] is the sample at t_j = 2*pi*j/M with M = len(values) a power of
    two, M >= 8.  ``is_real`` is a hint; when set, imaginary parts must vanish
    to 1e-12.
    """

    values: np.ndarray
    is_real: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        m = vals.size
        if m < 8 or not _is_power_of_two(m):
            raise BadParameter(f"grid size must be a power of two >= 8, got {m}")
        if self.is_real and np.max(np.abs(vals.imag)) > _REAL_TOL:
            raise BadInput("is_real set but imaginary parts exceed 1e-12")

    @property
    def sample_count(self) -> int:
        return self.values.size

    @property
    def angles(self) -> np.ndarray:
        m = self.values.size
        return TWO_PI * np.arange(m) / m

    def mean(self) -> complex:
        """Grid realization of int f dm."""
        return complex(np.mean(self.values))

    @staticmethod
    def from_real(values) -> "GridFunctionT":
        return GridFunctionT(np.asarray(values, dtype=float).astype(complex), is_real=True)


@dataclass(frozen=True)
class CoeffWindow:
    """Finitely supported coefficient sequence c_n on lo <= n <= hi."""

    lo: int
    hi: int
    coeffs: np.ndarray

    def __post_init__(self):
        if self.lo > self.hi:
            raise BadParameter("window requires lo <= hi")
        c = np.asarray(self.coeffs, dtype=complex)
        if c.size != self.hi - self.lo + 1:
            raise BadInput("coefficient count does not match window span")
        object.__setattr__(self, "coeffs", c)

    def __getitem__(self, n: int) -> complex:
        if n < self.lo or n > self.hi:
            return 0.0 + 0.0j
        return complex(self.coeffs[n - self.lo])

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    def l1(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def energy(self) -> float:
        return float(np.sum(np.abs(self.coeffs) ** 2))

    def is_hermitian(self, tol: float = 1e-10) -> bool:
        """c_{-n} == conj(c_n) within tol, the mark of a real source."""
        n_max = max(abs(self.lo), abs(self.hi))
        for n in range(n_max + 1):
            if abs(self[-n] - np.conj(self[n])) > tol:
                return False
        return True

    def fits_grid(self, m: int) -> bool:
        return -m // 2 < self.lo and self.hi < m // 2


@dataclass(frozen=True)
class SummationMethod:
    """Partial sum S_N, Cesaro mean sigma_N, or Abel-Poisson mean A_r."""

    kind: str
    order: float

    def __post_init__(self):
        if self.kind not in ("partial", "cesaro", "abel"):
            raise BadParameter(f"unknown summation kind {self.kind!r}")
        if self.kind == "abel":
            if not (0.0 < self.order < 1.0):
                raise BadParameter("abel mean requires radius r in (0,1)")
        else:
            if self.order < 0 or self.order != int(self.order):
                raise BadParameter("partial/cesaro order must be an integer N >= 0")


def dft_coeffs(f: GridFunctionT, n_max: int) -> CoeffWindow:
    """Fourier coefficients c_n = int f zeta^{-n} dm for |n| <= n_max.

    Exact (up to rounding) for trigonometric polynomials of degree < M/2.
    """
    m = f.sample_count
    if 2 * n_max + 1 > m:
        raise GridTooCoarse(f"window |n|<={n_max} needs more than {m} samples")
    spec = np.fft.fft(f.values) / m
    idx = np.arange(-n_max, n_max + 1)
    return CoeffWindow(-n_max, n_max, spec[idx % m])


def synthesize(w: CoeffWindow, m: int, is_real: bool | None = None) -> GridFunctionT:
    """Evaluate sum_n c_n zeta^n on the size-m grid."""
    if not w.fits_grid(m):
        raise GridTooCoarse(f"window [{w.lo},{w.hi}] does not fit grid of size {m}")
    spec = np.zeros(m, dtype=complex)
    for n, c in zip(w.indices, w.coeffs):
        spec[n % m] += c
    vals = np.fft.ifft(spec) * m
    if is_real is None:
        is_real = w.is_hermitian()
    if is_real:
        vals = vals.real.astype(complex)
    return GridFunctionT(vals, is_real=is_real)


def _fejer_coeff(order: int, n: np.ndarray) -> np.ndarray:
    # Fejer kernel of order N: multipliers (1 - |n|/N)_+ , support |n| < N.
    return np.clip(1.0 - np.abs(n) / order, 0.0, None)


def kernel(kind: str, order, m: int) -> GridFunctionT:
    """Sample a classical summability kernel on the size-m grid.

    kind: 'dirichlet' (D_N), 'fejer' (F_N, multipliers 1-|n|/N), 'dlvp'
    (de la Vallee Poussin V_N: multiplier 1 on |n| <= N, 0 for |n| > 2N+1),
    or 'poisson' (radius r).  Removable singularities are evaluated from the
    series form at grid points where |sin(t/2)| < 1e-8.
    """
    if not _is_power_of_two(m) or m < 8:
        raise BadParameter("grid size must be a power of two >= 8")
    t = TWO_PI * np.arange(m) / m

    if kind == "poisson":
        r = float(order)
        if not (0.0 < r < 1.0):
            raise BadParameter("poisson kernel requires 0 < r < 1")
        vals = (1 - r * r) / (1 - 2 * r * np.cos(t) + r * r)
        return GridFunctionT(vals.astype(complex), is_real=True)

    n_ord = int(order)
    if n_ord < 1:
        raise BadParameter(f"{kind} kernel requires order N >= 1")

    half = np.sin(t / 2.0)
    tiny = np.abs(half) < 1e-8

    if kind == "dirichlet":
        if 2 * n_ord + 1 > m:
            raise GridTooCoarse("Dirichlet window exceeds grid")
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.sin((n_ord + 0.5) * t) / half
        ns = np.arange(-n_ord, n_ord + 1)
        for j in np.nonzero(tiny)[0]:
            vals[j] = np.sum(np.cos(ns * t[j]))
    elif kind == "fejer":
        if 2 * n_ord - 1 > m:
            raise GridTooCoarse("Fejer window exceeds grid")
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = (np.sin(n_ord * t / 2.0) / half) ** 2 / n_ord
        ns = np.arange(-(n_ord - 1), n_ord)
        mult = _fejer_coeff(n_ord, ns)
        for j in np.nonzero(tiny)[0]:
            vals[j] = np.sum(mult * np.cos(ns * t[j]))
    elif kind == "dlvp":
        # V_N = 2 F_{2N+2} - F_{N+1} in the order convention above; this is the
        # combination whose multipliers are exactly 1 on |n| <= N+1, linearly
        # decaying to 0 at |n| = 2N+2, so convolution reproduces zeta^k for
        # |k| <= N and annihilates |k| > 2N+1.
        if 2 * (2 * n_ord + 1) > m:
            raise GridTooCoarse("de la Vallee Poussin window exceeds grid")
        f_big = kernel("fejer", 2 * n_ord + 2, m).values.real
        f_small = kernel("fejer", n_ord + 1, m).values.real
        vals = 2.0 * f_big - f_small
    else:
        raise BadParameter(f"unknown kernel kind {kind!r}")

    return GridFunctionT(vals.astype(complex), is_real=True)


def kernel_window(kind: str, order, n_max: int | None = None) -> CoeffWindow:
    """Exact coefficient window of a kernel (dirichlet/fejer/dlvp)."""
    n_ord = int(order)
    if kind == "dirichlet":
        n = np.arange(-n_ord, n_ord + 1)
        return CoeffWindow(-n_ord, n_ord, np.ones(n.size))
    if kind == "fejer":
        n = np.arange(-(n_ord - 1), n_ord)
        return CoeffWindow(int(n[0]), int(n[-1]), _fejer_coeff(n_ord, n))
    if kind == "dlvp":
        hi = 2 * n_ord + 1
        n = np.arange(-hi, hi + 1)
        c = 2.0 * _fejer_coeff(2 * n_ord + 2, n) - _fejer_coeff(n_ord + 1, n)
        return CoeffWindow(-hi, hi, c)
    raise BadParameter(f"no coefficient window for kernel kind {kind!r}")


def summation_mean(f: GridFunctionT, method: SummationMethod) -> GridFunctionT:
    """Apply S_N, sigma_N (multipliers 1-|k|/N) or A_r (multipliers r^{2|k|})."""
    m = f.sample_count
    spec = np.fft.fft(f.values) / m
    k = np.fft.fftfreq(m, d=1.0 / m)  # signed frequencies, Nyquist at -M/2
    if method.kind == "partial":
        n_ord = int(method.order)
        if 2 * n_ord + 1 > m:
            raise GridTooCoarse("partial-sum order exceeds grid")
        mult = (np.abs(k) <= n_ord).astype(float)
    elif method.kind == "cesaro":
        n_ord = int(method.order)
        if 2 * n_ord + 1 > m:
            raise GridTooCoarse("Cesaro order exceeds grid")
        mult = np.clip(1.0 - np.abs(k) / n_ord, 0.0, None) if n_ord > 0 else (k == 0).astype(float)
    else:  # abel
        r = float(method.order)
        mult = r ** (2.0 * np.abs(k))
    out = np.fft.ifft(spec * mult) * m
    if f.is_real:
        out = out.real.astype(complex)
    return GridFunctionT(out, is_real=f.is_real)


def _cesaro_smooth(w: CoeffWindow, order: int) -> CoeffWindow:
    """Fejer mean sigma_K applied directly to a coefficient window."""
    idx = w.indices
    mult = np.clip(1.0 - np.abs(idx) / order, 0.0, None)
    return CoeffWindow(w.lo, w.hi, w.coeffs * mult)


def _window_conv(a: CoeffWindow, b: CoeffWindow) -> CoeffWindow:
    """Exact coefficient product (convolution of windows)."""
    c = np.convolve(a.coeffs, b.coeffs)
    return CoeffWindow(a.lo + b.lo, a.hi + b.hi, c)


@dataclass
class WienerCertificate:
    """Record of the Neumann-series inversion run."""

    epsilon: float
    smoothing_order: int
    derivative_sup: float
    terms_used: int
    tail_bound: float
    residual_l1: float


def wiener_invert(f: CoeffWindow, tol: float = 1e-8):
    """Invert f in the coefficient algebra by Newman's Neumann series.

    Returns (g, certificate) where g is a CoeffWindow with the certified
    residual  sum_n |(f*g - 1)^(n)| <= tol,  computed exactly by window
    convolution.  The series 1/P_eps * sum ((P_eps - f)/P_eps)^k is truncated
    when the term bound 2*M(eps)*k*eps^k*(1-eps)^{-k-1} drops below tol.
    """
    if tol <= 0:
        raise BadParameter("tol must be positive")
    width = f.hi - f.lo + 1
    m_eval = 256
    while m_eval < 16 * width:
        m_eval *= 2

    for _attempt in range(4):
        g, cert = _wiener_attempt(f, tol, m_eval)
        if g is not None:
            return g, cert
        m_eval *= 2
    raise NoConvergence(
        "wiener_invert: residual bound not met at maximal evaluation grid",
        diagnostics={"m_eval": m_eval, "tol": tol},
    )


def _wiener_attempt(f: CoeffWindow, tol: float, m_eval: int):
    grid = synthesize(f, m_eval)
    min_abs = float(np.min(np.abs(grid.values)))
    if min_abs < 1e-12:
        raise NotInvertible(f"min |f| on evaluation grid is {min_abs:.3e}")

    # Normalize so |fn| >= 1 on the grid (Newman's normalization).
    scale = min_abs
    fn = CoeffWindow(f.lo, f.hi, f.coeffs / scale)

    # Smallest Fejer order K with ||fn - sigma_K(fn)||_A < 1/2; the A-norm of
    # the difference is exact since both windows are finite.
    def a_dist(order: int) -> float:
        sm = _cesaro_smooth(fn, order)
        return float(np.sum(np.abs(fn.coeffs - sm.coeffs)))

    target = 0.45
    k_hi = 1
    while a_dist(k_hi) >= target:
        k_hi *= 2
        if k_hi > 8 * (f.hi - f.lo + 2):
            return None, None
    k_lo = k_hi // 2
    while k_hi - k_lo > 1:
        mid = (k_lo + k_hi) // 2
        if a_dist(mid) < target:
            k_hi = mid
        else:
            k_lo = mid
    order = k_hi
    p_eps = _cesaro_smooth(fn, order)
    eps = max(a_dist(order), 1e-16)

    # M(eps) = sup |P_eps'| via the derivative window on the evaluation grid;
    # floored at (1-eps)/2 so the collapsed form of the Sobolev term bound
    # (2 M n eps^n (1-eps)^{-n-1}) stays an upper bound for constant P_eps.
    dcoeffs = p_eps.coeffs * (1j * p_eps.indices)
    dgrid = synthesize(CoeffWindow(p_eps.lo, p_eps.hi, dcoeffs), m_eval, is_real=False)
    m_eps = max(float(np.max(np.abs(dgrid.values))), (1.0 - eps) / 2.0)

    p_vals = synthesize(p_eps, m_eval).values
    if np.min(np.abs(p_vals)) < (1 - eps) * 0.5:
        return None, None
    q_vals = (p_vals - grid.values / scale) / p_vals
    inv_p = 1.0 / p_vals

    acc = inv_p.copy()
    power = np.ones(m_eval, dtype=complex)
    term_bound = math.inf
    n_used = 0
    for n in range(1, 4000):
        power = power * q_vals
        acc = acc + inv_p * power
        term_bound = 2.0 * m_eps * n * eps**n * (1 - eps) ** (-n - 1)
        n_used = n
        if term_bound < tol:
            break
    else:
        return None, None

    spec = np.fft.fft(acc) / m_eval
    # Grow the returned window until the exact l1 residual meets tol.
    half = min(m_eval // 2 - 1, max(4 * (f.hi - f.lo + 1) + 32, 64))
    while True:
        idx = np.arange(-half, half + 1)
        g = CoeffWindow(-half, half, spec[idx % m_eval] / scale)
        resid = _window_conv(f, g)
        res = resid.coeffs.copy()
        res[-resid.lo] -= 1.0  # subtract delta at index 0
        residual = float(np.sum(np.abs(res)))
        if residual <= tol:
            cert = WienerCertificate(
                epsilon=eps,
                smoothing_order=order,
                derivative_sup=m_eps,
                terms_used=n_used,
                tail_bound=term_bound,
                residual_l1=residual,
            )
            return g, cert
        if half >= m_eval // 2 - 1:
            return None, None
        half = min(2 * half, m_eval // 2 - 1)


def atom_mass(mu_coeffs: CoeffWindow, zeta0: float, n_max: int) -> complex:
    """Averaged Dirichlet sum (1/(2N+1)) sum_{|k|<=N} mu^(k) zeta0^k.

    Converges to the atomic mass mu({zeta0}) as N grows; zeta0 is an angle.
    """
    if mu_coeffs.lo > -n_max or mu_coeffs.hi < n_max:
        raise GridTooCoarse("coefficient window does not cover |n| <= N")
    k = np.arange(-n_max, n_max + 1)
    c = np.array([mu_coeffs[int(n)] for n in k])
    return complex(np.sum(c * np.exp(1j * k * zeta0)) / (2 * n_max + 1))


def rajchman_profile(mu_coeffs: CoeffWindow, n_max: int) -> np.ndarray:
    """Cesaro averages (1/(2m+1)) sum_{|n|<=m} |mu^(n)|^2 for m = 1..N.

    The limit reports the total squared atomic mass of the measure.
    """
    if mu_coeffs.lo > -n_max or mu_coeffs.hi < n_max:
        raise GridTooCoarse("coefficient window does not cover |n| <= N")
    sq = np.array([abs(mu_coeffs[n]) ** 2 for n in range(-n_max, n_max + 1)])
    center = n_max
    out = np.empty(n_max)
    running = sq[center]
    for m in range(1, n_max + 1):
        running += sq[center - m] + sq[center + m]
        out[m - 1] = running / (2 * m + 1)
    return out


def sobolev_embedding_constant() -> float:
    """Cauchy-Schwarz constant C with sum |c_n| <= C (sup|f| + sup|f'|).

    Derived from sum (1+|n|)^{-2} = 2*zeta(2) - 1 and the splitting
    sum (1+|n|)^2 |c_n|^2 <= 2 (||f||_2^2 + ||f'||_2^2).
    """
    s = 2.0 * (math.pi**2 / 6.0) - 1.0
    return math.sqrt(2.0) * math.sqrt(s)
