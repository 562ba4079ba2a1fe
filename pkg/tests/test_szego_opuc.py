"""szego_opuc: extremal distances, Verblunsky recursion, product identity."""

import math

import numpy as np
import pytest

from uplab.circle_core import TWO_PI, GridFunctionT
from uplab.errors import MeasureTooSingular
from uplab.measures_sets import SampledMeasure, measure_coeffs
from uplab.szego_opuc import (
    MomentVector,
    extrapolate_distance,
    kolmogorov_distance,
    moments_from_verblunsky,
    szego_distance,
    szego_product_check,
    verblunsky,
    verblunsky_gram_schmidt,
)


def weight_measure(fn, m=4096):
    t = TWO_PI * np.arange(m) / m
    return SampledMeasure(density=GridFunctionT.from_real(fn(t)), positive=True)


TWO_PLUS_COS = weight_measure(lambda t: 2.0 + np.cos(t), 8192)
SZEGO_TARGET = (2.0 + math.sqrt(3.0)) / 2.0   # exp(int log(2+cos) dm)
KOLM_TARGET = math.sqrt(3.0)                   # (int dm/(2+cos))^{-1}


class TestSzegoDistance:
    def test_lebesgue_distance_one(self):
        leb = SampledMeasure.lebesgue(512)
        for n in (0, 1, 5, 16):
            assert abs(szego_distance(leb, n) - 1.0) < 1e-12

    def test_atoms_only_distance_shrinks(self):
        angles = np.linspace(0.1, TWO_PI - 0.4, 12)
        mu = SampledMeasure(atoms=tuple((a, 1.0 / 12) for a in angles),
                            positive=True)
        d4 = szego_distance(mu, 4)
        d10 = szego_distance(mu, 10)
        d11 = szego_distance(mu, 11)  # degree reaches the atom count
        assert d10 < d4
        assert d11 < 1e-8

    def test_weight_quadrature_target(self):
        # oracle: high-order quadrature of exp(int log w dm); closed form
        # for 2 + cos t is (2 + sqrt 3)/2
        grid = TWO_PLUS_COS.density.values.real
        quad = float(np.exp(np.mean(np.log(grid))))
        assert abs(quad - SZEGO_TARGET) < 1e-12
        d = szego_distance(TWO_PLUS_COS, 128)
        assert abs(d - SZEGO_TARGET) / SZEGO_TARGET < 0.02

    def test_monotone_and_lower_bounded(self):
        dists = [szego_distance(TWO_PLUS_COS, n) for n in range(0, 24, 4)]
        assert all(b <= a + 1e-12 for a, b in zip(dists, dists[1:]))
        assert all(d >= SZEGO_TARGET - 1e-8 for d in dists)

    def test_singular_part_irrelevant(self):
        # the atom slows convergence to O(1/n), so extrapolate on the high
        # degrees where the geometric fit undershoots the small correction
        degrees = list(range(100, 129, 4))
        base = [szego_distance(TWO_PLUS_COS, n) for n in degrees]
        with_atom = SampledMeasure(
            atoms=((1.0, 0.25),), density=TWO_PLUS_COS.density, positive=True)
        aug = [szego_distance(with_atom, n) for n in degrees]
        d_inf_base, _, _ = extrapolate_distance(base)
        d_inf_aug, _, _ = extrapolate_distance(aug)
        assert abs(d_inf_aug - d_inf_base) / d_inf_base < 0.01


class TestKolmogorov:
    def test_lebesgue(self):
        leb = SampledMeasure.lebesgue(512)
        assert abs(kolmogorov_distance(leb, 8) - 1.0) < 1e-12

    def test_weight_target(self):
        d = kolmogorov_distance(TWO_PLUS_COS, 128)
        assert abs(d - KOLM_TARGET) / KOLM_TARGET < 0.02

    def test_vanishing_arc_drives_to_zero(self):
        m = 4096
        t = TWO_PI * np.arange(m) / m
        w = np.where((t > 1.0) & (t < 2.0), 1e-12, 1.0)
        mu = SampledMeasure(density=GridFunctionT.from_real(w), positive=True)
        d8 = kolmogorov_distance(mu, 8)
        d64 = kolmogorov_distance(mu, 64)
        assert d64 < d8
        assert d64 < 0.15


class TestVerblunsky:
    def test_lebesgue_zero(self):
        alphas = verblunsky(MomentVector(np.array([1.0, 0, 0, 0, 0]))).alphas
        assert np.max(np.abs(alphas)) == 0.0

    def test_geometric_moments(self):
        c = 0.5 ** np.arange(7)
        a_rec = verblunsky(MomentVector(c.astype(complex))).alphas
        a_gs = verblunsky_gram_schmidt(MomentVector(c.astype(complex))).alphas
        assert np.max(np.abs(a_rec - a_gs)) < 1e-10
        assert abs(a_rec[0] - 0.5) < 1e-12
        assert np.max(np.abs(a_rec[1:])) < 1e-12

    def test_gram_schmidt_consistency_random(self):
        rng = np.random.default_rng(6)
        alphas = 0.5 * (rng.standard_normal(5) + 1j * rng.standard_normal(5))
        alphas /= np.maximum(1.0, 1.5 * np.abs(alphas))
        mom = moments_from_verblunsky(alphas)
        a1 = verblunsky(mom).alphas
        a2 = verblunsky_gram_schmidt(mom).alphas
        assert np.max(np.abs(a1 - a2)) < 1e-10

    def test_modulus_below_one(self):
        mom = measure_coeffs(TWO_PLUS_COS, 20)
        vec = MomentVector(mom.coeffs[20:])
        alphas = verblunsky(vec).alphas
        assert np.max(np.abs(alphas)) < 1.0

    def test_roundtrip_small_instances(self):
        rng = np.random.default_rng(8)
        for trial in range(4):
            size = rng.integers(2, 8)
            alphas = 0.6 * rng.uniform(-1, 1, size) \
                + 0.3j * rng.uniform(-1, 1, size)
            alphas = alphas / np.maximum(1.0, 1.25 * np.abs(alphas))
            mom = moments_from_verblunsky(alphas)
            back = verblunsky(mom).alphas
            assert np.max(np.abs(back - alphas)) < 1e-8

    def test_degenerate_rejected(self):
        # moments of a single atom: Toeplitz blocks are singular
        with pytest.raises(MeasureTooSingular):
            verblunsky(MomentVector(np.ones(6, dtype=complex)))


class TestProductCheck:
    def test_lebesgue_all_one(self):
        leb = SampledMeasure.lebesgue(512)
        alphas = verblunsky(MomentVector(np.array([1.0, 0, 0, 0])))
        rep = szego_product_check(alphas, leb)
        assert abs(rep.prod_one_minus_abs - 1) < 1e-12
        assert abs(rep.prod_one_minus_sq - 1) < 1e-12
        assert abs(rep.normalized_target - 1) < 1e-12

    def test_two_plus_cos_identifies_squared_form(self):
        mom = measure_coeffs(TWO_PLUS_COS, 40)
        alphas = verblunsky(MomentVector(mom.coeffs[40:]))
        rep = szego_product_check(alphas, TWO_PLUS_COS, rel_tol=1e-3)
        assert rep.matches_sq and not rep.matches_abs
        assert "1-|alpha|^2" in rep.resolution

    def test_vanishing_weight_both_small(self):
        m = 4096
        t = TWO_PI * np.arange(m) / m
        w = np.where((t > 1.0) & (t < 2.5), 1e-14, 1.0)
        mu = SampledMeasure(density=GridFunctionT.from_real(w), positive=True)
        mom = measure_coeffs(mu, 24)
        alphas = verblunsky(MomentVector(mom.coeffs[24:]))
        rep = szego_product_check(alphas, mu)
        # exp side is ~0 under the exp(-inf) = 0 convention; products decay
        assert rep.normalized_target < 1e-3
        assert rep.prod_one_minus_sq < 1.0
