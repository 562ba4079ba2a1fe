"""Conjugate functions, Poisson/analytic extensions, inner-outer-Blaschke
factorization, and constructive boundary-vanishing outer functions.

Sign conventions.  On the circle the harmonic conjugate acts by the Fourier
multiplier -i*sgn(n).  On the line the Hilbert transform follows the (t-x)
kernel H(f)(x) = P.V. int f(t)/(t-x) dt/pi, i.e. the multiplier +i*sgn(xi);
the harmonic-conjugate (boundary phase of an outer function) is then -H(f).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle_core import TWO_PI, GridFunctionT, dft_coeffs
from .errors import BadInput, BadParameter, NotLogIntegrable
from .fields import LineField, check_decay, taper
from .measures_sets import IntervalSet, SampledMeasure, whitney_pieces

LOG_FLOOR = 1e-300


def conjugate_circle(f: GridFunctionT) -> GridFunctionT:
    """Harmonic conjugate: multiplier -i*sgn(n); the Nyquist bin is zeroed so
    real inputs map to real outputs."""
    m = f.sample_count
    spec = np.fft.fft(f.values)
    k = np.fft.fftfreq(m, d=1.0 / m)
    mult = -1j * np.sign(k)
    mult[m // 2] = 0.0
    out = np.fft.ifft(spec * mult)
    if f.is_real:
        out = out.real.astype(complex)
    return GridFunctionT(out, is_real=f.is_real)


def hilbert_line(f: LineField) -> LineField:
    """Line Hilbert transform with the (t-x) kernel: multiplier +i*sgn(xi).

    Inputs that do not decay below 1e-6 at the truncation boundary are tapered
    over the outer 5% and flagged with a truncation report; never silent.
    """
    g, ok = check_decay(f, tol=1e-6, context="hilbert_line")
    if not ok:
        g = taper(g, 0.05)
    m = g.size
    spec = np.fft.fft(g.values)
    k = np.fft.fftfreq(m, d=1.0 / m)
    mult = 1j * np.sign(k)
    mult[m // 2] = 0.0
    out = np.fft.ifft(spec * mult)
    md = dict(g.metadata)
    md["kernel_sign"] = "(t - x)"
    return LineField(f.half_width, out, md)


def poisson_extend(data, eval_points) -> np.ndarray:
    """Poisson integral values at strictly interior evaluation points.

    data: GridFunctionT (disc, series sum f^(n) r^{|n|} e^{int}),
    SampledMeasure (disc, kernel sums), or LineField (half-plane integral).
    """
    pts = np.atleast_1d(np.asarray(eval_points, dtype=complex))

    if isinstance(data, GridFunctionT):
        if np.any(np.abs(pts) >= 1.0):
            raise BadParameter("evaluation points must satisfy |z| < 1")
        m = data.sample_count
        w = dft_coeffs(data, m // 2 - 1)
        n = w.indices
        out = np.array(
            [np.sum(w.coeffs * (np.abs(z) ** np.abs(n)) * np.exp(1j * n * np.angle(z)))
             if z != 0 else w[0] for z in pts]
        )
        return out

    if isinstance(data, SampledMeasure):
        if np.any(np.abs(pts) >= 1.0):
            raise BadParameter("evaluation points must satisfy |z| < 1")
        out = np.zeros(pts.shape, dtype=complex)
        for theta, mass in data.atoms:
            zeta = np.exp(1j * theta)
            out += mass * (1 - np.abs(pts) ** 2) / np.abs(zeta - pts) ** 2
        if data.density is not None:
            dens = data.density.values
            thetas = data.density.angles
            zetas = np.exp(1j * thetas)
            for i, z in enumerate(pts):
                kern = (1 - abs(z) ** 2) / np.abs(zetas - z) ** 2
                out[i] += np.mean(kern * dens)
        return out

    if isinstance(data, LineField):
        if np.any(pts.imag <= 0):
            raise BadParameter("evaluation points must satisfy Im z > 0")
        xs = data.xs
        h = data.step
        out = np.array(
            [h / math.pi * np.sum(z.imag / ((z.real - xs) ** 2 + z.imag**2) * data.values)
             for z in pts]
        )
        return out

    raise BadParameter(f"unsupported data type {type(data).__name__}")


@dataclass(frozen=True)
class BoundaryModulus:
    """log|f| on the circle or line, with the 1e-300 floor applied on
    construction and a recorded log-integrability estimate.

    Isolated zeros only pin single floored nodes (harmless: the quadrature of
    an integrable log singularity stays finite); a zero filling a whole arc
    floors a positive fraction of the nodes, which is what the
    non-log-integrability gate detects.
    """

    domain: str
    log_mod: object  # GridFunctionT (circle) or LineField (line)
    floor_applied: bool = False
    log_integral: float = 0.0
    floored_fraction: float = 0.0

    @staticmethod
    def from_modulus_circle(modulus: GridFunctionT) -> "BoundaryModulus":
        vals = np.abs(modulus.values.real if modulus.is_real else modulus.values)
        floored = np.maximum(vals, LOG_FLOOR)
        log_vals = np.log(floored)
        gf = GridFunctionT.from_real(log_vals)
        return BoundaryModulus(
            "circle", gf, bool(np.any(vals < LOG_FLOOR)),
            float(np.mean(log_vals)), float(np.mean(vals < LOG_FLOOR))
        )

    @staticmethod
    def from_modulus_line(modulus: LineField) -> "BoundaryModulus":
        vals = np.abs(modulus.values)
        floored = np.maximum(vals, LOG_FLOOR)
        log_vals = np.log(floored)
        lf = LineField(modulus.half_width, log_vals.astype(complex), dict(modulus.metadata))
        # Poisson-measure quadrature of log|f| on the truncated line.
        xs = modulus.xs
        est = float(modulus.step / math.pi * np.sum(log_vals / (1.0 + xs**2)))
        return BoundaryModulus("line", lf, bool(np.any(vals < LOG_FLOOR)), est,
                               float(np.mean(vals < LOG_FLOOR)))

    @property
    def log_integrable(self) -> bool:
        # 1% of floored nodes marks an arc-sized zero set (divergent integral)
        return self.log_integral > -1e6 and self.floored_fraction <= 0.01


@dataclass(frozen=True)
class ZeroList:
    """Finite zero set with multiplicities, in the disc or half-plane."""

    domain: str
    zeros: tuple  # ((point, multiplicity), ...)

    def __post_init__(self):
        zs = tuple((complex(z), int(mult)) for z, mult in self.zeros)
        object.__setattr__(self, "zeros", zs)
        if self.domain == "disc":
            if any(abs(z) >= 1.0 for z, _ in zs):
                raise BadParameter("disc zeros must satisfy |z| < 1")
        elif self.domain == "halfplane":
            if any(z.imag <= 0.0 for z, _ in zs):
                raise BadParameter("half-plane zeros must satisfy Im z > 0")
        else:
            raise BadParameter("domain must be 'disc' or 'halfplane'")

    def blaschke_sum(self) -> float:
        if self.domain == "disc":
            return float(sum(m * (1 - abs(z)) for z, m in self.zeros))
        return float(sum(m * z.imag / (1 + abs(z) ** 2) for z, m in self.zeros))


class OuterFunction:
    """Evaluator for the outer function with prescribed boundary modulus.

    Disc: F(z) = exp( int (zeta+z)/(zeta-z) log|f| dm ); boundary values are
    exp(log|f| + i * conjugate(log|f|)).
    Line: Schwartz integral F(z) = exp( i int (1/(z-t) - t/(1+t^2)) log|f(t)|
    dt/pi ); boundary phase is minus the Hilbert transform of log|f|.
    """

    def __init__(self, modulus: BoundaryModulus):
        if not modulus.log_integrable:
            raise NotLogIntegrable(
                f"log-integral estimate {modulus.log_integral:.3e} below -1e6"
            )
        self.modulus = modulus
        if modulus.domain == "circle":
            log_grid = modulus.log_mod
            self._log_coeffs = dft_coeffs(log_grid, log_grid.sample_count // 2 - 1)
            phase = conjugate_circle(log_grid)
            vals = np.exp(log_grid.values.real + 1j * phase.values.real)
            self.boundary = GridFunctionT(vals, is_real=False)
        else:
            log_field = modulus.log_mod
            phase = hilbert_line(LineField(log_field.half_width,
                                           log_field.values.real.astype(complex)))
            vals = np.exp(log_field.values.real - 1j * phase.values.real)
            self.boundary = LineField(log_field.half_width, vals,
                                      {"outer_boundary": True})

    def __call__(self, z) -> np.ndarray:
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        if self.modulus.domain == "circle":
            if np.any(np.abs(pts) >= 1.0):
                raise BadParameter("interior evaluation requires |z| < 1")
            w = self._log_coeffs
            pos = w.indices > 0
            n_pos = w.indices[pos]
            c_pos = w.coeffs[pos]
            out = np.empty(pts.shape, dtype=complex)
            for i, zz in enumerate(pts):
                herg = w[0] + 2.0 * np.sum(c_pos * zz**n_pos)
                out[i] = np.exp(herg)
            return out
        log_field = self.modulus.log_mod
        if np.any(pts.imag <= 0.0):
            raise BadParameter("interior evaluation requires Im z > 0")
        xs = log_field.xs
        h = log_field.step
        lv = log_field.values.real
        out = np.empty(pts.shape, dtype=complex)
        for i, zz in enumerate(pts):
            integrand = (1.0 / (zz - xs) - xs / (xs**2 + 1.0)) * lv
            out[i] = np.exp(1j * h / math.pi * np.sum(integrand))
        return out


def outer_from_modulus(modulus: BoundaryModulus) -> OuterFunction:
    """Outer evaluator plus boundary samples; refuses non-log-integrable data."""
    return OuterFunction(modulus)


def blaschke(zl: ZeroList, eval_points) -> np.ndarray:
    """Finite Blaschke product with factors |a|/a * (a-z)/(1-conj(a)z) on the
    disc (a=0 contributing z) and (z-z_k)/(z-conj(z_k)) on the half-plane."""
    pts = np.atleast_1d(np.asarray(eval_points, dtype=complex))
    out = np.ones(pts.shape, dtype=complex)
    if zl.domain == "disc":
        for a, mult in zl.zeros:
            if abs(abs(a) - 1.0) < 1e-14:
                raise BadParameter("zero on the boundary circle")
            if a == 0:
                fac = pts
            else:
                fac = (abs(a) / a) * (a - pts) / (1 - np.conj(a) * pts)
            out *= fac**mult
        return out
    for zk, mult in zl.zeros:
        if abs(zk.imag) < 1e-14:
            raise BadParameter("zero on the real line")
        out *= ((pts - zk) / (pts - np.conj(zk))) ** mult
    return out


def singular_inner(mass_at, eval_points) -> np.ndarray:
    """exp(-sum c_k (zeta_k+z)/(zeta_k-z)) for boundary atoms (angle, c>=0)."""
    pts = np.atleast_1d(np.asarray(eval_points, dtype=complex))
    acc = np.zeros(pts.shape, dtype=complex)
    for angle, c in mass_at:
        c = float(c)
        if c < 0 or not math.isfinite(c):
            raise BadParameter("singular masses must be finite and >= 0")
        zeta = np.exp(1j * float(angle))
        acc += c * (zeta + pts) / (zeta - pts)
    return np.exp(-acc)


def jensen_check(f: GridFunctionT, tol: float = 1e-10):
    """Jensen's lemma check for analytic windows.

    Returns (log|f^(0)|, int log|f| dm); the contract is first <= second +
    1e-8.  A window with negative-frequency mass above tol is rejected.
    """
    m = f.sample_count
    w = dft_coeffs(f, m // 2 - 1)
    neg = w.coeffs[w.indices < 0]
    if neg.size and float(np.max(np.abs(neg))) > tol:
        raise BadInput("coefficient window has mass on negative frequencies")
    c0 = abs(w[0])
    lhs = math.log(c0) if c0 > 1e-14 else -math.inf
    mods = np.maximum(np.abs(f.values), LOG_FLOOR)
    rhs = float(np.mean(np.log(mods)))
    return lhs, rhs


class VanishingOuter:
    """exp(-sum lambda_k h_k(z)) built over a Whitney system of the
    complement of a small closed set E (the endpoints of the given interval
    set's complement components).

    mode 'rc':        h_k(z) = s_k * xi_k / (r_k xi_k - z),
    mode 'carleson':  h_k(z) = s_k log(1/s_k) * xi_k / (r_k xi_k - z),
    with s_k the normalized piece length, xi_k the piece center on the circle
    and r_k = 1 + s_k.  Re h_k >= 0 on the closed disc, so |f| <= 1, and f
    tends to 0 along the boundary on approach to E while staying analytic
    across every boundary arc off E.
    """

    def __init__(self, e_set: IntervalSet, lambdas=None, mode: str = "rc",
                 min_piece: float = 1e-9):
        if mode not in ("rc", "carleson"):
            raise BadParameter("mode must be 'rc' or 'carleson'")
        comps = e_set.complement_components()
        if not comps:
            raise BadParameter("the set E must be a proper subset of the circle")
        pieces = []
        for comp in comps:
            pieces.extend(whitney_pieces(comp, min_length=min_piece))
        # enumerate from the largest piece so lambda increases toward E
        pieces.sort(key=lambda ab: ab[1] - ab[0], reverse=True)
        lengths = np.array([(b - a) / TWO_PI for a, b in pieces])
        centers = np.exp(1j * np.array([(a + b) / 2.0 for a, b in pieces]))
        if lambdas is None:
            lam = np.log(np.log(16.0 + 1.0 / lengths))
        elif callable(lambdas):
            lam = np.array([float(lambdas(k, s)) for k, s in enumerate(lengths)])
        else:
            lam = np.asarray(lambdas, dtype=float)
            if lam.size != lengths.size:
                raise BadParameter(
                    f"need {lengths.size} weights, got {lam.size}")
        if np.any(lam <= 0):
            raise BadParameter("weights must be positive")
        weight = lengths if mode == "rc" else lengths * np.log(1.0 / lengths)
        total = float(np.sum(lam * weight))
        if not math.isfinite(total):
            raise BadParameter("divergent weight sum")
        self.mode = mode
        self.e_set = e_set
        self.pieces = tuple(pieces)
        self.lengths = lengths
        self.centers = centers
        self.radii = 1.0 + lengths
        self.lambdas = lam
        self.weights = lam * weight
        self.weight_sum = total

    def log_terms(self, z: complex) -> np.ndarray:
        return self.weights * self.centers / (self.radii * self.centers - z)

    def __call__(self, z) -> np.ndarray:
        pts = np.atleast_1d(np.asarray(z, dtype=complex))
        if np.any(np.abs(pts) > 1.0 + 1e-12):
            raise BadParameter("evaluation is restricted to the closed disc")
        out = np.empty(pts.shape, dtype=complex)
        for i, zz in enumerate(pts):
            out[i] = np.exp(-np.sum(self.log_terms(zz)))
        return out

    def endpoint_set(self) -> np.ndarray:
        """Angles of the proxy set E (component endpoints)."""
        comps = self.e_set.complement_components()
        pts = []
        for a, b in comps:
            pts.extend([a % TWO_PI, b % TWO_PI])
        return np.unique(np.round(np.array(pts), 14))


def vanishing_outer(e_set: IntervalSet, lambdas=None, mode: str = "rc") -> VanishingOuter:
    """Constructive outer-type function vanishing exactly on the measure-zero
    proxy set (see :class:`VanishingOuter`)."""
    return VanishingOuter(e_set, lambdas=lambdas, mode=mode)
