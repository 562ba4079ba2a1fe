"""Measures, Cantor-type sets, Beurling-Carleson entropy and interval-set
utilities shared by the rest of the library.

Circle intervals are stored in radians on [0, 2*pi); a single wrap-around
interval is accepted on construction and normalized by splitting, which keeps
the sortedness invariant trivial.  Entropy uses natural logarithms and
normalized lengths (|I| relative to the full circle).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .circle_core import TWO_PI, CoeffWindow, GridFunctionT, dft_coeffs
from .errors import BadInput, BadParameter, GridTooCoarse

_DEGENERATE = 1e-15


@dataclass(frozen=True)
class IntervalSet:
    """Sorted disjoint intervals on the circle (radians mod 2*pi) or line."""

    domain: str
    intervals: tuple

    def __post_init__(self):
        if self.domain not in ("circle", "line"):
            raise BadParameter("domain must be 'circle' or 'line'")
        ivs = [(float(a), float(b)) for a, b in self.intervals]
        if self.domain == "circle":
            normalized = []
            for a, b in ivs:
                if b - a >= TWO_PI:
                    normalized.append((0.0, TWO_PI))
                    continue
                a_mod = a % TWO_PI
                b_mod = a_mod + (b - a)
                if b_mod <= TWO_PI:
                    normalized.append((a_mod, b_mod))
                else:
                    normalized.append((a_mod, TWO_PI))
                    normalized.append((0.0, b_mod - TWO_PI))
            ivs = normalized
        ivs = [(a, b) for a, b in ivs if b - a > 0]
        ivs.sort()
        for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
            if a2 < b1 - 1e-14:
                raise BadInput(f"intervals overlap: ({a1},{b1}) and ({a2},{b2})")
        if self.domain == "circle" and sum(b - a for a, b in ivs) > TWO_PI + 1e-12:
            raise BadInput("total circle length exceeds 2*pi")
        object.__setattr__(self, "intervals", tuple(ivs))

    def total_length(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    def measure(self, lo: float, hi: float) -> float:
        """Length of the intersection with [lo, hi] (line geometry)."""
        acc = 0.0
        for a, b in self.intervals:
            acc += max(0.0, min(b, hi) - max(a, lo))
        return acc

    def contains(self, x: float, tol: float = 0.0) -> bool:
        if self.domain == "circle":
            x = x % TWO_PI
        return any(a - tol <= x <= b + tol for a, b in self.intervals)

    def complement_circle(self) -> "IntervalSet":
        """Connected components of the complement on the circle."""
        if self.domain != "circle":
            raise BadParameter("complement_circle requires circle domain")
        if not self.intervals:
            return IntervalSet("circle", ((0.0, TWO_PI),))
        comps = []
        ivs = self.intervals
        for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
            if a2 - b1 > _DEGENERATE:
                comps.append((b1, a2))
        gap = (ivs[0][0] + TWO_PI) - ivs[-1][1]
        if gap > _DEGENERATE:
            comps.append((ivs[-1][1], ivs[0][0] + TWO_PI))
        return IntervalSet("circle", tuple(comps))

    def complement_components(self) -> tuple:
        """Connected components of the circle complement, with the wrap
        component (if any) kept whole as (a, b) with b possibly > 2*pi."""
        if self.domain != "circle":
            raise BadParameter("complement_components requires circle domain")
        if not self.intervals:
            return ((0.0, TWO_PI),)
        comps = []
        ivs = self.intervals
        for (a1, b1), (a2, b2) in zip(ivs, ivs[1:]):
            if a2 - b1 > _DEGENERATE:
                comps.append((b1, a2))
        gap = (ivs[0][0] + TWO_PI) - ivs[-1][1]
        if gap > _DEGENERATE:
            comps.append((ivs[-1][1], ivs[0][0] + TWO_PI))
        return tuple(comps)

    def to_json(self) -> str:
        return json.dumps(
            {"domain": self.domain, "intervals": [[a, b] for a, b in self.intervals]}
        )

    @staticmethod
    def from_json(text: str) -> "IntervalSet":
        data = json.loads(text)
        return IntervalSet(data["domain"], tuple(tuple(iv) for iv in data["intervals"]))


@dataclass(frozen=True)
class CantorSpec:
    """Removal proportions alpha_n in (0,1) and a construction depth."""

    alphas: tuple
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        if self.depth < 1:
            raise BadParameter("depth must be >= 1")
        if len(self.alphas) < self.depth:
            raise BadParameter("need one removal proportion per stage")
        if any(not (0.0 < a < 1.0) for a in self.alphas):
            raise BadParameter("removal proportions must lie in (0,1)")


@dataclass(frozen=True)
class SampledMeasure:
    """Measure on the circle: atoms + absolutely continuous density
    + optional generator descriptor for weak-star approximants."""

    atoms: tuple = ()
    density: GridFunctionT | None = None
    generator: dict | None = None
    positive: bool = False

    def __post_init__(self):
        atoms = tuple((float(t) % TWO_PI, complex(m)) for t, m in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if self.positive:
            if any(m.real < 0 or abs(m.imag) > 1e-12 for _, m in atoms):
                raise BadInput("positivity flag requires nonnegative atom masses")
            if self.density is not None and np.min(self.density.values.real) < -1e-12:
                raise BadInput("positivity flag requires density >= -1e-12")
        if not math.isfinite(self.total_variation()):
            raise BadInput("total variation must be finite")

    def total_variation(self) -> float:
        tv = sum(abs(m) for _, m in self.atoms)
        if self.density is not None:
            tv += float(np.mean(np.abs(self.density.values)))
        return float(tv)

    @staticmethod
    def lebesgue(m: int = 256) -> "SampledMeasure":
        return SampledMeasure(
            density=GridFunctionT.from_real(np.ones(m)), positive=True
        )

    @staticmethod
    def dirac(angle: float, mass: complex = 1.0) -> "SampledMeasure":
        return SampledMeasure(atoms=((angle, mass),), positive=(complex(mass).imag == 0 and complex(mass).real >= 0))


def cantor_set(spec: CantorSpec) -> IntervalSet:
    """Depth-level approximation E_depth of the Cantor-type construction.

    Stage n removes from each of the 2^n current components the middle open
    arc of length alpha_n / 2^n (unit-length normalization; the circle carries
    coordinates scaled by 2*pi).  E_depth has 2^depth components.
    """
    comps = [(0.0, 1.0)]
    for n in range(spec.depth):
        removed = spec.alphas[n] / (2.0**n)
        new = []
        for a, b in comps:
            length = b - a
            if removed >= length - 1e-15:
                raise BadParameter(
                    f"stage {n} removal {removed} exceeds component length {length}"
                )
            keep = (length - removed) / 2.0
            new.append((a, a + keep))
            new.append((b - keep, b))
        comps = new
    return IntervalSet("circle", tuple((TWO_PI * a, TWO_PI * b) for a, b in comps))


def bc_entropy(e_set: IntervalSet) -> float:
    """Beurling-Carleson entropy sum |I_k| log(1/|I_k|) over complement
    components, lengths normalized to total measure 1."""
    if e_set.domain != "circle":
        raise BadParameter("bc_entropy is defined on the circle")
    if not e_set.intervals:
        return 0.0
    total = 0.0
    for a, b in e_set.complement_components():
        s = (b - a) / TWO_PI
        if s <= _DEGENERATE:
            continue
        total += s * math.log(1.0 / s)
    return total


def whitney_pieces(interval, min_length: float = 1e-9) -> tuple:
    """Raw dyadic Whitney pieces of an interval (coordinates untouched)."""
    a, b = float(interval[0]), float(interval[1])
    length = b - a
    if length <= 0:
        raise BadParameter("empty interval")
    pieces = [(a + length / 3.0, b - length / 3.0)]  # central third
    j = 1
    while True:
        ell_j = length / (3.0 * 2.0**j)
        if ell_j < min_length:
            break
        pieces.append((a + ell_j, a + 2.0 * ell_j))
        pieces.append((b - 2.0 * ell_j, b - ell_j))
        j += 1
    pieces.sort()
    return tuple(pieces)


def whitney(interval, e_set: IntervalSet, min_length: float = 1e-9) -> IntervalSet:
    """Dyadic Whitney decomposition of a complement component.

    Pieces have |I_j| = |I| / (3 * 2^{|j|}) with distance to the component's
    endpoints exactly equal to their length; the system covers the component
    up to its endpoints and is truncated once pieces drop below min_length.
    """
    return IntervalSet(e_set.domain, whitney_pieces(interval, min_length))


def measure_coeffs(mu: SampledMeasure, n_max: int) -> CoeffWindow:
    """mu^(n) = sum of atom contributions mass * e^{-i n theta} plus the
    density coefficients, for |n| <= n_max."""
    n = np.arange(-n_max, n_max + 1)
    coeffs = np.zeros(n.size, dtype=complex)
    for theta, mass in mu.atoms:
        coeffs += mass * np.exp(-1j * n * theta)
    if mu.density is not None:
        if 2 * n_max + 1 > mu.density.sample_count:
            raise GridTooCoarse("density grid too coarse for requested window")
        coeffs += dft_coeffs(mu.density, n_max).coeffs
    return CoeffWindow(-n_max, n_max, coeffs)
