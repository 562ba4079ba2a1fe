"""Szego and Kolmogorov extremal problems and orthogonal polynomials on the
unit circle.

Moment convention: c_n = mu^(n) = int zeta^{-n} d mu, so the Gram matrix of
the monomials in L^2(d mu) is the Hermitian Toeplitz matrix with entries
<z^k, z^j> = c_{j-k}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import BadParameter, IllConditioned, MeasureTooSingular
from .measures_sets import SampledMeasure, measure_coeffs

_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class MomentVector:
    """Trigonometric moments c_0..c_n of a positive measure."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex)
        object.__setattr__(self, "c", c)
        if c.size < 1 or c[0].real <= 0 or abs(c[0].imag) > 1e-12:
            raise BadParameter("c_0 must be positive real")
        # positive semidefiniteness of the leading Toeplitz block, by
        # attempted factorization with a tiny diagonal shift
        t = sla.toeplitz(np.conj(c))
        try:
            sla.cholesky(t + 1e-10 * c[0].real * np.eye(c.size), lower=True)
        except sla.LinAlgError as exc:
            raise MeasureTooSingular("Toeplitz moment block is not PSD") from exc

    @property
    def order(self) -> int:
        return self.c.size - 1

    def moment(self, n: int) -> complex:
        """c_n for any n, using Hermitian symmetry of positive measures."""
        if n >= 0:
            if n >= self.c.size:
                raise BadParameter("moment order out of range")
            return complex(self.c[n])
        return complex(np.conj(self.c[-n]))


@dataclass(frozen=True)
class VerblunskyCoeffs:
    """Szego recursion parameters, |alpha_k| < 1."""

    alphas: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alphas, dtype=complex)
        object.__setattr__(self, "alphas", a)
        if a.size and np.max(np.abs(a)) >= 1.0:
            raise BadParameter("Verblunsky coefficients must satisfy |alpha| < 1")


def _toeplitz_gram(moments: MomentVector, size: int) -> np.ndarray:
    """Gram matrix A[j,k] = <z^k, z^j> = c_{j-k}, shape (size, size)."""
    col = np.array([moments.moment(j) for j in range(size)])
    row = np.array([moments.moment(-k) for k in range(size)])
    return sla.toeplitz(col, row)


def _solve_hermitian(a: np.ndarray, b: np.ndarray):
    """Cholesky solve with one step of iterative refinement.

    Returns (x, condition_estimate); raises IllConditioned when factorization
    fails outright.
    """
    try:
        cho = sla.cho_factor(a, lower=True)
    except sla.LinAlgError:
        eigs = np.abs(sla.eigvalsh(a))
        cond = float(np.max(eigs) / max(np.min(eigs), 1e-300))
        raise IllConditioned("Gram system not positive definite", condition=cond)
    x = sla.cho_solve(cho, b)
    resid = b - a @ x
    x = x + sla.cho_solve(cho, resid)
    diag = np.abs(np.diag(cho[0]))
    cond = float((np.max(diag) / max(np.min(diag), 1e-300)) ** 2)
    return x, cond


def szego_distance(mu: SampledMeasure, degree: int) -> float:
    """min over degree-n analytic polynomials q of int |q - conj(zeta)|^2 dmu.

    Solved through the Toeplitz normal equations; nonincreasing in the degree
    with limit exp(int log w dm) (convention exp(-inf) = 0).
    """
    if degree < 0 or degree > 512:
        raise BadParameter("degree must lie in [0, 512]")
    moments = MomentVector(measure_coeffs(mu, degree + 1).coeffs[degree + 1:])
    a = _toeplitz_gram(moments, degree + 1)
    b = np.array([moments.moment(1 + j) for j in range(degree + 1)])
    x, _cond = _solve_hermitian(a, b)
    val = moments.moment(0).real - float(np.real(np.vdot(b, x)))
    return max(val, 0.0)


def szego_distance_profile(mu: SampledMeasure, degrees) -> np.ndarray:
    return np.array([szego_distance(mu, n) for n in degrees])


def extrapolate_distance(values, tail: int = 8):
    """Fit d_n = d_inf + c rho^n on the last `tail` values.

    Returns (d_inf, rho, residual).  The ratio rho is estimated from
    successive differences; degenerate tails fall back to the last value.
    """
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        return float(v[-1]), 0.0, 0.0
    v = v[-max(tail, 3):]
    d = np.diff(v)
    mask = np.abs(d[:-1]) > 1e-300
    if not np.any(mask):
        return float(v[-1]), 0.0, 0.0
    ratios = d[1:][mask] / d[:-1][mask]
    ratios = ratios[(ratios > 0) & (ratios < 1)]
    if ratios.size == 0:
        return float(v[-1]), 0.0, float(np.max(np.abs(d)))
    rho = float(np.exp(np.mean(np.log(ratios))))
    # least squares for d_inf, c against rho^n
    n = np.arange(v.size)
    basis = np.vstack([np.ones_like(n, dtype=float), rho**n]).T
    coef, *_ = np.linalg.lstsq(basis, v, rcond=None)
    resid = float(np.max(np.abs(basis @ coef - v)))
    return float(coef[0]), rho, resid


def verblunsky(moments: MomentVector) -> VerblunskyCoeffs:
    """Geronimus-Verblunsky sequence via the Szego recursion
    Phi_{n+1}(z) = z Phi_n(z) - alpha_n Phi_n^*(z), alpha_n = -Phi_{n+1}(0).

    alpha_n is fixed by orthogonality to the constants:
    alpha_n = <z Phi_n, 1> / <Phi_n^*, 1>.
    """
    order = moments.order

    def pair(f: np.ndarray, g: np.ndarray) -> complex:
        # <f, g> = sum_{j,k} f_j conj(g_k) c_{k-j}
        acc = 0.0 + 0.0j
        for j, fj in enumerate(f):
            if fj == 0:
                continue
            for k, gk in enumerate(g):
                if gk == 0:
                    continue
                acc += fj * np.conj(gk) * moments.moment(k - j)
        return acc

    phi = np.array([1.0 + 0.0j])  # monic Phi_0
    alphas = []
    one = np.array([1.0 + 0.0j])
    for n in range(order):
        z_phi = np.concatenate([[0.0], phi])
        star = np.conj(phi[::-1])
        denom = pair(star, one)
        if abs(denom) < 1e-13:
            raise MeasureTooSingular(f"degenerate block at step {n}")
        alpha = pair(z_phi, one) / denom
        if abs(alpha) >= 1.0:
            raise MeasureTooSingular(
                f"|alpha_{n}| = {abs(alpha):.6f} >= 1: leading block degenerate")
        phi = z_phi - alpha * np.concatenate([star, [0.0]])
        norm_sq = pair(phi, phi).real
        if norm_sq <= 1e-14 * moments.moment(0).real:
            raise MeasureTooSingular(f"monic polynomial degenerates at step {n}")
        alphas.append(alpha)
    return VerblunskyCoeffs(np.array(alphas))


def verblunsky_gram_schmidt(moments: MomentVector) -> VerblunskyCoeffs:
    """Independent oracle: monic orthogonal polynomials by explicit
    Gram-Schmidt against the Toeplitz Gram matrix, alphas read off from
    alpha_n = -Phi_{n+1}(0)."""
    order = moments.order
    size = order + 1
    gram = _toeplitz_gram(moments, size)

    alphas = []
    polys = [np.array([1.0 + 0.0j])]
    for n in range(1, size):
        target = np.zeros(n + 1, dtype=complex)
        target[n] = 1.0  # monic z^n
        vec = target.copy()
        for q in polys:
            qq = np.concatenate([q, np.zeros(n + 1 - q.size)])
            num = np.conj(qq) @ gram[: n + 1, : n + 1] @ target
            den = np.conj(qq) @ gram[: n + 1, : n + 1] @ qq
            vec = vec - (num / den) * qq
        polys.append(vec)
        alphas.append(-vec[0])
    return VerblunskyCoeffs(np.array(alphas))


def moments_from_verblunsky(alphas, grid: int = 4096) -> MomentVector:
    """Bernstein-Szego reconstruction: the measure with Verblunsky sequence
    (alpha_0..alpha_{m-1}, 0, 0, ...) has density
    prod (1-|alpha_k|^2) / |Phi_m|^2."""
    a = np.asarray(alphas, dtype=complex)
    phi = np.array([1.0 + 0.0j])
    for alpha in a:
        z_phi = np.concatenate([[0.0], phi])
        star = np.conj(phi[::-1])
        phi = z_phi - alpha * np.concatenate([star, [0.0]])
    t = 2.0 * math.pi * np.arange(grid) / grid
    vals = np.polyval(phi[::-1], np.exp(1j * t))  # phi stored lowest-first
    dens = float(np.prod(1.0 - np.abs(a) ** 2)) / np.abs(vals) ** 2
    spec = np.fft.fft(dens) / grid
    c = spec[: a.size + 1].copy()
    c[0] = c[0].real
    return MomentVector(c)


@dataclass
class SzegoProductReport:
    prod_one_minus_abs: float
    prod_one_minus_sq: float
    exp_log_integral: float
    normalized_target: float
    matches_abs: bool
    matches_sq: bool
    resolution: str


def szego_product_check(alphas: VerblunskyCoeffs, mu: SampledMeasure,
                        rel_tol: float = 1e-3) -> SzegoProductReport:
    """Compare prod(1-|alpha_n|) and prod(1-|alpha_n|^2) with
    exp(int log w dm) and record which product form matches.

    Verblunsky coefficients are scale invariant, so the comparison is made
    against the probability normalization exp(int log(w/mu(T)) dm); the raw
    exp(int log w dm) is reported alongside.
    """
    if mu.density is None:
        raise BadParameter("a density component is required")
    a = np.abs(alphas.alphas)
    p_abs = float(np.prod(1.0 - a))
    p_sq = float(np.prod(1.0 - a**2))
    w = np.maximum(np.abs(mu.density.values.real), _LOG_FLOOR)
    raw = float(np.exp(np.mean(np.log(w))))
    mass = float(np.mean(mu.density.values.real)) + sum(m.real for _, m in mu.atoms)
    target = raw / mass
    scale = max(target, 1e-30)
    m_abs = abs(p_abs - target) <= rel_tol * scale
    m_sq = abs(p_sq - target) <= rel_tol * scale
    if m_sq and not m_abs:
        resolution = ("prod(1-|alpha|^2) matches exp(int log(w/mass) dm); "
                      "the prod(1-|alpha|) form does not")
    elif m_abs and not m_sq:
        resolution = "prod(1-|alpha|) matches exp(int log(w/mass) dm)"
    elif m_abs and m_sq:
        resolution = "both products match within tolerance (alphas too small to resolve)"
    else:
        resolution = "neither product matches within tolerance"
    return SzegoProductReport(p_abs, p_sq, raw, target, m_abs, m_sq, resolution)


def kolmogorov_distance(mu: SampledMeasure, degree: int) -> float:
    """min over real parts of analytic polynomials p with p(0)=0, deg <= n, of
    int |1 - Re p|^2 dmu; limit target (int dm/w)^{-1} with 1/inf = 0."""
    if degree < 0 or degree > 512:
        raise BadParameter("degree must lie in [0, 512]")
    moments = MomentVector(measure_coeffs(mu, 2 * degree).coeffs[2 * degree:])

    def mom(p: int) -> complex:
        return moments.moment(-p)  # int zeta^p dmu

    n = degree
    size = 2 * n  # basis cos(kt), sin(kt), k = 1..n
    if size == 0:
        return float(moments.moment(0).real)
    gram = np.zeros((size, size))
    rhs = np.zeros(size)

    def basis_product(i: int, j: int) -> float:
        # indices: 0..n-1 -> cos((i+1)t), n..2n-1 -> sin((i-n+1)t)
        def parts(i):
            return ("cos", i + 1) if i < n else ("sin", i - n + 1)

        (ti, ki), (tj, kj) = parts(i), parts(j)
        mp, mm = mom(ki + kj), mom(ki - kj)
        if ti == "cos" and tj == "cos":
            return 0.5 * float(np.real(mp + mm))
        if ti == "sin" and tj == "sin":
            return 0.5 * float(np.real(mm - mp))
        if ti == "cos" and tj == "sin":
            return 0.5 * float(np.imag(mp - mm))
        return 0.5 * float(np.imag(mp + mm))

    for i in range(size):
        rhs[i] = float(np.real(mom(i + 1))) if i < n else float(np.imag(mom(i - n + 1)))
        for j in range(i, size):
            gram[i, j] = basis_product(i, j)
            gram[j, i] = gram[i, j]
    x, _cond = _solve_hermitian(gram, rhs)
    val = float(moments.moment(0).real) - float(rhs @ x)
    return max(val, 0.0)
