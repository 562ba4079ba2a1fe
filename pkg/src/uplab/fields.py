"""Uniformly sampled fields on a truncated line [-L, L) with quadrature
metadata.

Transform normalization (used everywhere on the line): the forward transform
is  fhat(xi) = int f(x) e^{-i x xi} dx  without prefactor, the inverse carries
1/(2*pi), and Plancherel reads  int |f|^2 dx = (1/2pi) int |fhat|^2 dxi.
A field of M samples on [-L, L) has step h = 2L/M and frequency grid
xi_k = (pi/L) k for k = -M/2 .. M/2-1, so the frequency half-width is
pi/h = pi*M/(2L).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, TruncationWarning


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


@dataclass(frozen=True)
class LineField:
    """Complex samples on the uniform grid x_j = -L + j*h, h = 2L/M."""

    half_width: float
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", vals)
        if self.half_width <= 0:
            raise BadParameter("half-width L must be positive")
        if vals.size < 64 or not _is_power_of_two(vals.size):
            raise BadParameter("sample count must be a power of two >= 64")

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / self.size

    @property
    def xs(self) -> np.ndarray:
        """Sample axis.  For a transform output this is the frequency axis."""
        return -self.half_width + self.step * np.arange(self.size)

    @property
    def frequency_axis(self) -> np.ndarray:
        """Frequency grid xi_k = (pi/L) k of this field's transform; identical
        to the transform output's own sample axis."""
        return (math.pi / self.half_width) * np.arange(-self.size // 2, self.size // 2)

    def norm2_sq(self) -> float:
        """Quadrature value of int |f|^2 dx."""
        return float(self.step * np.sum(np.abs(self.values) ** 2))

    def edge_sup(self, fraction: float = 0.02) -> float:
        k = max(1, int(self.size * fraction))
        return float(max(np.max(np.abs(self.values[:k])), np.max(np.abs(self.values[-k:]))))

    def with_metadata(self, **kw) -> "LineField":
        md = dict(self.metadata)
        md.update(kw)
        return LineField(self.half_width, self.values, md)

    @staticmethod
    def from_function(fn, half_width: float, size: int, **metadata) -> "LineField":
        xs = -half_width + (2.0 * half_width / size) * np.arange(size)
        return LineField(half_width, np.asarray(fn(xs), dtype=complex), metadata or {})


def line_transform(f: LineField) -> LineField:
    """Forward transform: values of fhat on the xi grid (increasing order).

    Trapezoid-exact for the periodized model: fhat(xi_k) = h * sum_j f(x_j)
    e^{-i x_j xi_k}; spectrally accurate for fields decaying at the boundary.
    """
    m = f.size
    h = f.step
    # x_j = -L + j h; e^{-i x_j xi_k} = e^{+i L xi_k} e^{-2 pi i j k / M}
    raw = np.fft.fft(f.values)
    k = np.arange(-m // 2, m // 2)
    phase = np.exp(1j * f.half_width * (math.pi / f.half_width) * k)
    fhat = h * phase * raw[k % m]
    xi_half = math.pi / h  # half-width of the frequency window
    return LineField(xi_half, fhat, {"space_half_width": f.half_width, "domain": "frequency"})


def line_inverse(fhat: LineField, space_half_width: float | None = None) -> LineField:
    """Inverse transform, exactly undoing :func:`line_transform`."""
    m = fhat.size
    lw = space_half_width or fhat.metadata.get("space_half_width")
    if lw is None:
        raise BadParameter("space half-width required to invert")
    h = 2.0 * lw / m
    k = np.arange(-m // 2, m // 2)
    phase = np.exp(1j * lw * (math.pi / lw) * k)
    raw = np.zeros(m, dtype=complex)
    raw[k % m] = fhat.values / (h * phase)
    f_vals = np.fft.ifft(raw)
    return LineField(lw, f_vals, {"domain": "space"})


def taper(f: LineField, fraction: float = 0.05) -> LineField:
    """Smooth cosine taper over the outer `fraction` of the domain."""
    m = f.size
    k = max(2, int(m * fraction))
    window = np.ones(m)
    ramp = 0.5 * (1.0 - np.cos(np.pi * np.arange(k) / k))
    window[:k] = ramp
    window[-k:] = ramp[::-1]
    md = dict(f.metadata)
    md["taper_fraction"] = fraction
    return LineField(f.half_width, f.values * window, md)


def check_decay(f: LineField, tol: float = 1e-6, context: str = "line field"):
    """Attach (and emit) a truncation warning when the field fails to decay."""
    sup = f.edge_sup()
    if sup > tol:
        warnings.warn(
            f"{context}: boundary values reach {sup:.3e} > {tol:.1e}",
            TruncationWarning,
            stacklevel=3,
        )
        return f.with_metadata(truncation_warning=sup), False
    return f, True
