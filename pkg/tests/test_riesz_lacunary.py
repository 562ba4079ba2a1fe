"""riesz_lacunary: products, blocks, Zygmund/Sidon ratios, Hoelder checks."""

import itertools
import math

import numpy as np
import pytest

from uplab.errors import BadParameter, Undefined
from uplab.riesz_lacunary import (
    LacunarySpec,
    RieszSpec,
    block_mass,
    holder_decay_check,
    riesz_partial,
    sidon_ratio,
    zygmund_l1_ratio,
)


def enumerate_coeffs(freqs, amps):
    """Exact oracle over sign tuples eps in {-1,0,1}^n."""
    out = {}
    n = len(freqs)
    for eps in itertools.product((-1, 0, 1), repeat=n):
        freq = sum(e * f for e, f in zip(eps, freqs))
        coeff = 1.0
        for e, a in zip(eps, amps):
            if e != 0:
                coeff *= a / 2.0
        out[freq] = out.get(freq, 0.0) + coeff
    return out


class TestRieszPartial:
    def test_zero_factors(self):
        spec = LacunarySpec((3, 9))
        w = riesz_partial(RieszSpec(spec, (0.5, 0.5)), 0)
        assert w.lo == w.hi == 0 and abs(w[0] - 1.0) < 1e-15

    def test_single_factor(self):
        spec = LacunarySpec((5,))
        w = riesz_partial(RieszSpec(spec, (0.8,)), 1)
        assert abs(w[0] - 1.0) < 1e-15
        assert abs(w[5] - 0.4) < 1e-15 and abs(w[-5] - 0.4) < 1e-15

    def test_support_exactly_in_blocks(self):
        spec = LacunarySpec(tuple(3**j for j in range(1, 6)))
        r = RieszSpec(spec, (1.0,) * 5)
        w = riesz_partial(r, 5)
        blocks = [spec.block(j) for j in range(1, 6)]
        for idx, c in zip(w.indices, w.coeffs):
            if c == 0:
                continue
            if idx == 0:
                continue
            assert any(lo - 1e-9 <= abs(idx) <= hi + 1e-9 for lo, hi in blocks), idx

    def test_matches_enumeration_oracle(self):
        freqs = (3, 9, 27, 81)
        amps = (0.9, -0.5, 0.7, 1.0)
        spec = LacunarySpec(freqs)
        w = riesz_partial(RieszSpec(spec, amps), 4)
        oracle = enumerate_coeffs(freqs, amps)
        for idx, val in oracle.items():
            assert abs(w[idx] - val) < 1e-14

    def test_r1_grid_nonnegative_and_real(self):
        from uplab.circle_core import synthesize

        spec = LacunarySpec((4, 16, 64))
        w = riesz_partial(RieszSpec(spec, (1.0, -0.7, 0.3)), 3)
        assert np.max(np.abs(w.coeffs.imag)) == 0.0
        g = synthesize(w, 1024)
        assert g.values.real.min() >= -1e-10

    def test_r2_modulus_band(self):
        from uplab.circle_core import synthesize

        spec = LacunarySpec((4, 16, 64))
        amps = (0.9, 0.6, 0.3)
        w = riesz_partial(RieszSpec(spec, amps, "R2"), 3)
        g = synthesize(w, 1024, is_real=False)
        mods_sq = np.abs(g.values) ** 2
        upper = float(np.prod([1 + a * a for a in amps]))
        assert mods_sq.min() >= 1.0 - 1e-10
        assert mods_sq.max() <= upper + 1e-10

    def test_unique_representation(self):
        freqs = (3, 9, 27, 81, 243, 729)
        seen = {}
        for eps in itertools.product((-1, 0, 1), repeat=6):
            f = sum(e * n for e, n in zip(eps, freqs))
            assert f not in seen, f"collision at {f}"
            seen[f] = eps


class TestBlockMass:
    def test_single_factor(self):
        spec = LacunarySpec((7,))
        r = RieszSpec(spec, (0.6,))
        assert abs(block_mass(r, 1, 1) - 0.6**2 / 2) < 1e-15

    def test_zero_amplitudes(self):
        spec = LacunarySpec((3, 9, 27))
        r = RieszSpec(spec, (0.0, 0.0, 0.0))
        for j in range(1, 4):
            assert block_mass(r, j, 3) == 0.0

    def test_against_tuple_enumeration(self):
        freqs = (3, 9, 27, 81)
        amps = (1.0, 0.8, 0.6, 0.4)
        spec = LacunarySpec(freqs)
        r = RieszSpec(spec, amps)
        oracle_coeffs = enumerate_coeffs(freqs, amps)
        kappa = spec.kappa
        for j in range(1, 5):
            lo = (1 - 1 / (kappa - 1)) * freqs[j - 1]
            hi = (1 + 1 / (kappa - 1)) * freqs[j - 1]
            oracle = sum(
                v**2 for f, v in oracle_coeffs.items()
                if lo - 1e-9 <= abs(f) <= hi + 1e-9
            )
            assert abs(block_mass(r, j, 4) - oracle) < 1e-12


class TestZygmundSidon:
    def test_single_frequency_ratios_one(self):
        spec = LacunarySpec((5,))
        assert abs(zygmund_l1_ratio(spec, [1.5]) - 1.0) < 1e-10
        assert abs(sidon_ratio(spec, [1.5 + 0.5j]) - 1.0) < 1e-10

    def test_zygmund_random_unit_coeffs_bound(self):
        rng = np.random.default_rng(3)
        spec = LacunarySpec(tuple(3**j for j in range(1, 9)))
        phases = np.exp(1j * rng.uniform(0, 2 * math.pi, 8))
        assert zygmund_l1_ratio(spec, phases) <= 2 * math.exp(0.5)

    def test_zygmund_scale_invariance(self):
        spec = LacunarySpec(tuple(3**j for j in range(1, 7)))
        rng = np.random.default_rng(5)
        c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        r1 = zygmund_l1_ratio(spec, c)
        r2 = zygmund_l1_ratio(spec, 7.3 * c)
        assert abs(r1 - r2) < 1e-9

    def test_sidon_unimodular_bound(self):
        rng = np.random.default_rng(11)
        spec = LacunarySpec(tuple(3**j for j in range(1, 7)))
        phases = np.exp(1j * rng.uniform(0, 2 * math.pi, 6))
        assert sidon_ratio(spec, phases) <= 2.0 + 1e-9

    def test_sidon_rotation_stability(self):
        spec = LacunarySpec(tuple(4**j for j in range(1, 6)))
        rng = np.random.default_rng(13)
        c = np.exp(1j * rng.uniform(0, 2 * math.pi, 5))
        r1 = sidon_ratio(spec, c)
        r2 = sidon_ratio(spec, c * np.exp(0.7j))
        assert abs(r1 - r2) < 1e-9

    def test_zero_polynomial_rejected(self):
        spec = LacunarySpec((3, 9))
        with pytest.raises(Undefined):
            zygmund_l1_ratio(spec, [0.0, 0.0])


class TestHolder:
    def test_coefficient_side_normalized(self):
        spec = LacunarySpec(tuple(3**j for j in range(1, 8)))
        alpha = 0.5
        coeffs = np.array([float(f) ** -alpha for f in spec.freqs])
        rep = holder_decay_check(spec, coeffs, alpha)
        assert abs(rep.coeff_sup - 1.0) < 1e-12

    def test_grid_seminorm_stable_as_spectrum_grows(self):
        # two-resolution comparison: with the matched decay c_n = N_n^{-alpha}
        # the seminorm stays put while the series (and the grid) extend
        alpha = 0.5
        semis = []
        for j_top in (6, 9):
            spec = LacunarySpec(tuple(3**j for j in range(1, j_top + 1)))
            coeffs = np.array([float(f) ** -alpha for f in spec.freqs])
            semis.append(holder_decay_check(spec, coeffs, alpha).grid_seminorm)
        assert semis[1] <= 1.5 * semis[0]

    def test_flat_coefficients_diverge(self):
        # same harness, c_n = 1: the seminorm grows without bound
        semis = []
        for j_top in (6, 9):
            spec = LacunarySpec(tuple(3**j for j in range(1, j_top + 1)))
            semis.append(holder_decay_check(spec, np.ones(j_top), 0.5).grid_seminorm)
        assert semis[1] > 2.0 * semis[0]


class TestSpecValidation:
    def test_kappa_gate(self):
        with pytest.raises(BadParameter):
            LacunarySpec((4, 8))  # ratio 2 < 3
        spec = LacunarySpec((4, 12, 36))
        assert spec.kappa == 3.0
