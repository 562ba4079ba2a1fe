"""Riesz products on lacunary spectra and the Zygmund / Paley-Zygmund
inequality suite.

Partial products are expanded by sparse convolution over the recursion
P_{n+1} = P_n + a_{n+1} Re(zeta^{N_{n+1}}) P_n, never by FFT, so support
statements ("every nonzero coefficient lies in {0} union of the blocks
Lambda_j") hold exactly in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circle_core import CoeffWindow, GridFunctionT, synthesize
from .errors import BadParameter, SpectrumTooWide, Undefined

_MAX_SPAN = 50_000_000


@dataclass(frozen=True)
class LacunarySpec:
    """Strictly increasing positive integer frequencies with ratio gap >= 3."""

    freqs: tuple

    def __post_init__(self):
        freqs = tuple(int(n) for n in self.freqs)
        if not freqs:
            raise BadParameter("at least one frequency required")
        if freqs[0] < 1 or any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise BadParameter("frequencies must be strictly increasing positive integers")
        object.__setattr__(self, "freqs", freqs)
        if self.kappa < 3.0:
            raise BadParameter(f"lacunarity kappa = {self.kappa:.3f} < 3")

    @property
    def kappa(self) -> float:
        if len(self.freqs) == 1:
            return math.inf
        return min(b / a for a, b in zip(self.freqs, self.freqs[1:]))

    def block(self, j: int) -> tuple:
        """Closed block Lambda_j = [ (1-1/(kappa-1)) N_j , (1+1/(kappa-1)) N_j ]."""
        if j < 1 or j > len(self.freqs):
            raise BadParameter("block index out of range")
        kap = self.kappa
        slack = 1.0 / (kap - 1.0) if math.isfinite(kap) else 0.0
        n_j = self.freqs[j - 1]
        return ((1.0 - slack) * n_j, (1.0 + slack) * n_j)


@dataclass(frozen=True)
class RieszSpec:
    """Riesz product data: lacunary frequencies, amplitudes, kind R1 or R2.

    R1 factors are 1 + a_j Re(zeta^{N_j}) with a_j in [-1,1]; R2 factors are
    1 + i a_j Re(zeta^{N_j}) with a_j in (-1,1).
    """

    spec: LacunarySpec
    amps: tuple
    kind: str = "R1"

    def __post_init__(self):
        amps = tuple(float(a) for a in self.amps)
        object.__setattr__(self, "amps", amps)
        if self.kind not in ("R1", "R2"):
            raise BadParameter("kind must be 'R1' or 'R2'")
        if len(amps) > len(self.spec.freqs):
            raise BadParameter("more amplitudes than frequencies")
        if self.kind == "R1" and any(abs(a) > 1.0 for a in amps):
            raise BadParameter("R1 requires amplitudes in [-1,1]")
        if self.kind == "R2" and any(abs(a) >= 1.0 for a in amps):
            raise BadParameter("R2 requires amplitudes in (-1,1)")


def riesz_partial(r: RieszSpec, n: int) -> CoeffWindow:
    """Exact coefficients of the n-factor partial product.

    Sparse recursion: each factor contributes c/2 at frequency shifts +-N_j,
    with c = a_j for R1 and c = i*a_j for R2.  The coefficient at 0 is 1.
    """
    if n < 0 or n > len(r.amps):
        raise BadParameter("factor count out of range")
    span = 1 + sum(r.spec.freqs[:n])
    if span > _MAX_SPAN:
        raise SpectrumTooWide(f"window span {span} exceeds supported range")
    table = {0: 1.0 + 0.0j}
    for j in range(n):
        freq = r.spec.freqs[j]
        half = (r.amps[j] if r.kind == "R1" else 1j * r.amps[j]) / 2.0
        if half == 0:
            continue
        new = dict(table)
        for idx, c in table.items():
            for shifted in (idx + freq, idx - freq):
                new[shifted] = new.get(shifted, 0.0 + 0.0j) + c * half
        table = {k: v for k, v in new.items() if v != 0}
    lo = min(table) if table else 0
    hi = max(table) if table else 0
    coeffs = np.zeros(hi - lo + 1, dtype=complex)
    for idx, c in table.items():
        coeffs[idx - lo] = c
    return CoeffWindow(lo, hi, coeffs)


def block_mass(r: RieszSpec, j: int, n: int) -> float:
    """sum over Lambda_j of |P_n^(k)|^2 computed from the exact expansion."""
    if not (1 <= j <= n <= len(r.amps)):
        raise BadParameter("need 1 <= j <= n <= factor count")
    window = riesz_partial(r, n)
    lo_b, hi_b = r.spec.block(j)
    idx = window.indices
    mask = (np.abs(idx) >= lo_b - 1e-9) & (np.abs(idx) <= hi_b + 1e-9)
    return float(np.sum(np.abs(window.coeffs[mask]) ** 2))


def block_mass_oracle(r: RieszSpec, j: int, n: int) -> float:
    """Independent tuple-enumeration oracle for the block mass.

    Sums prod (a_k/2)^2 over sign tuples whose top nonzero index is j; with
    kappa >= 3 every frequency has a unique representing tuple, so this equals
    the direct expansion block mass.
    """
    if not (1 <= j <= n <= len(r.amps)):
        raise BadParameter("need 1 <= j <= n <= factor count")
    a = [abs(x) / 2.0 for x in r.amps[:n]]
    total = 0.0
    # epsilon_j = +-1; lower indices free in {-1,0,1}; magnitudes are
    # symmetric in the sign so count multiplicities instead of enumerating.
    prod = 1.0
    for k in range(j - 1):
        prod *= 1.0 + 2.0 * a[k] ** 2
    total = 2.0 * a[j - 1] ** 2 * prod
    return total


def _auto_grid(max_freq: int) -> int:
    m = 256
    while m < 8 * (max_freq + 1):
        m *= 2
    return m


def _synth_on_spec(spec: LacunarySpec, coeffs) -> GridFunctionT:
    c = np.asarray(coeffs, dtype=complex)
    if c.size != len(spec.freqs):
        raise BadParameter("one coefficient per frequency required")
    hi = spec.freqs[-1]
    arr = np.zeros(hi + 1, dtype=complex)
    for f, cc in zip(spec.freqs, c):
        arr[f] = cc
    window = CoeffWindow(0, hi, arr)
    return synthesize(window, _auto_grid(hi), is_real=False)


def zygmund_l1_ratio(spec: LacunarySpec, coeffs) -> float:
    """(sum |c|^2)^{1/2} divided by the grid L^1 norm of sum c_k zeta^{N_k}."""
    c = np.asarray(coeffs, dtype=complex)
    if np.all(c == 0):
        raise Undefined("zero polynomial")
    grid = _synth_on_spec(spec, c)
    l1 = float(np.mean(np.abs(grid.values)))
    return float(np.sqrt(np.sum(np.abs(c) ** 2)) / l1)


def sidon_ratio(spec: LacunarySpec, coeffs) -> float:
    """sum |c_n| divided by the grid sup norm of sum c_k zeta^{N_k}."""
    c = np.asarray(coeffs, dtype=complex)
    if np.all(c == 0):
        raise Undefined("zero polynomial")
    grid = _synth_on_spec(spec, c)
    sup = float(np.max(np.abs(grid.values)))
    return float(np.sum(np.abs(c)) / sup)


@dataclass
class HolderReport:
    """Coefficient-side and grid-side Hoelder diagnostics."""

    alpha: float
    coeff_sup: float          # sup_n |c_n| N_n^alpha
    grid_seminorm: float      # sup over dyadic separations of |f(z)-f(w)|/|z-w|^alpha
    by_separation: tuple      # (chord length, seminorm at that separation)


def holder_decay_check(spec: LacunarySpec, coeffs, alpha: float,
                       grid_size: int | None = None) -> HolderReport:
    """Paley-Zygmund diagnostics: (A) sup |c_n| N_n^alpha and (B) the grid
    Hoelder seminorm over dyadic separations; the theorem makes them finite
    together."""
    if not (0.0 < alpha < 1.0):
        raise BadParameter("alpha must lie in (0,1)")
    c = np.asarray(coeffs, dtype=complex)
    coeff_sup = float(np.max(np.abs(c) * np.array(spec.freqs, dtype=float) ** alpha))
    hi = spec.freqs[-1]
    m = grid_size or _auto_grid(hi)
    arr = np.zeros(hi + 1, dtype=complex)
    for f, cc in zip(spec.freqs, c):
        arr[f] = cc
    grid = synthesize(CoeffWindow(0, hi, arr), m, is_real=False)
    vals = grid.values
    rows = []
    sep = 1
    while sep <= m // 2:
        diff = np.max(np.abs(np.roll(vals, -sep) - vals))
        chord = abs(np.exp(1j * (2 * np.pi * sep / m)) - 1.0)
        rows.append((chord, float(diff / chord**alpha)))
        sep *= 2
    semi = max(r[1] for r in rows)
    return HolderReport(alpha=alpha, coeff_sup=coeff_sup,
                        grid_seminorm=semi, by_separation=tuple(rows))
