"""uniqueness_pairs: localization operators, A-B/LS machinery, line checks."""

import math

import numpy as np
import pytest

from uplab.errors import BadInput, BadParameter
from uplab.fields import LineField, line_transform
from uplab.measures_sets import IntervalSet
from uplab.uniqueness_pairs import (
    LocalizationSpec,
    _line_complement,
    ab_inequality_check,
    dense_t_star_t,
    harmonic_measure_line,
    loc_operator_norm,
    ls_density,
    ls_inequality_check,
    poisson_summation_check,
    prescribe,
    prescription_residuals,
    pw_extend,
    shannon_reconstruct,
    uncertainty_checks,
)

TWO_PI = 2.0 * math.pi
SYM = IntervalSet("line", ((-0.5, 0.5),))


class TestLocOperatorNorm:
    def test_empty_set_zero(self):
        spec = LocalizationSpec(IntervalSet("line", ()), SYM, 16.0, 512)
        assert loc_operator_norm(spec).value == 0.0

    def test_contraction_and_hs_bound(self):
        spec = LocalizationSpec(SYM, SYM, 16.0, 1024)
        est = loc_operator_norm(spec)
        assert est.value < 1.0
        assert est.value <= est.hs_bound + 1e-6
        me, mf = spec.measures()
        assert abs(est.hs_bound - math.sqrt(me * mf / TWO_PI)) < 1e-12

    def test_small_product_normalized_bound(self):
        # |E||F|/(2 pi) = 0.1: the normalization-consistent bound is the
        # Hilbert-Schmidt one, ||T|| <= sqrt(|E||F|/2pi); the un-squared
        # quantity is the trace of T*T, not an operator-norm bound
        s = math.sqrt(0.2 * math.pi)
        e_set = IntervalSet("line", ((-s / 2, s / 2),))
        spec = LocalizationSpec(e_set, e_set, 16.0, 2048)
        est = loc_operator_norm(spec)
        assert est.value <= math.sqrt(0.1) + 1e-3
        assert est.value <= est.hs_bound + 1e-6

    def test_power_iteration_matches_dense_oracle(self):
        spec = LocalizationSpec(SYM, SYM, 16.0, 512)
        est = loc_operator_norm(spec)
        mat = dense_t_star_t(spec)
        lam = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
        assert abs(est.value - math.sqrt(lam[-1])) < 1e-9
        assert est.converged and est.residual < 1e-5

    def test_random_fields_contraction(self):
        from uplab.uniqueness_pairs import _apply_t

        spec = LocalizationSpec(SYM, SYM, 16.0, 512)
        me, mf = spec.masks()
        rng = np.random.default_rng(0)
        for _ in range(200):
            v = rng.standard_normal(512) + 1j * rng.standard_normal(512)
            tv = _apply_t(spec, v, me, mf)
            assert np.linalg.norm(tv) <= np.linalg.norm(v) * (1 + 1e-10)


class TestABInequality:
    def test_worst_ratio_below_constant(self):
        spec = LocalizationSpec(SYM, SYM, 16.0, 1024)
        rep = ab_inequality_check(spec, trials=50, seed=3)
        assert rep.worst_ratio <= rep.constant * (1 + 1e-3)

    def test_field_outside_e_trivial(self):
        spec = LocalizationSpec(SYM, SYM, 16.0, 512)
        me, mf = spec.masks()
        vals = np.where(me == 0, 1.0, 0.0).astype(complex)
        f = LineField(16.0, vals)
        fhat = line_transform(f)
        h = spec.step
        dxi = math.pi / 16.0
        total = h * np.sum(np.abs(vals) ** 2)
        out_e = h * np.sum((1 - me) * np.abs(vals) ** 2)
        out_f = dxi / TWO_PI * np.sum((1 - mf) * np.abs(fhat.values) ** 2)
        est = loc_operator_norm(spec)
        c = 1 / (1 - est.value)
        assert total <= c * (out_e + out_f) + 1e-9

    def test_equivalence_sweep(self):
        # projection-equivalence sweep: norm < 1, inequality constant,
        # and prescription convergence move together across a parameter sweep
        for width in (0.5, 1.0, 2.0):
            e_set = IntervalSet("line", ((-width / 2, width / 2),))
            spec = LocalizationSpec(e_set, e_set, 16.0, 512)
            est = loc_operator_norm(spec)
            assert est.value < 1.0
            rep = ab_inequality_check(spec, trials=20, seed=1)
            assert rep.worst_ratio <= rep.constant * (1 + 1e-3)
            xs = np.linspace(-16, 16, 512, endpoint=False)
            g = LineField(16.0, np.exp(-(xs**2)).astype(complex))
            h = LineField(16.0, np.zeros(512, dtype=complex))
            f = prescribe(g, h, spec, tol=1e-7)
            re_, rf_ = prescription_residuals(f, g, h, spec)
            assert max(re_, rf_) < 1e-6


class TestPrescription:
    def test_zero_data(self):
        e_set = IntervalSet("line", ((-2.0, -1.0),))
        f_set = IntervalSet("line", ((3.0, 4.0),))
        spec = LocalizationSpec(e_set, f_set, 16.0, 512)
        z = LineField(16.0, np.zeros(512, dtype=complex))
        f = prescribe(z, z, spec)
        assert np.max(np.abs(f.values)) == 0.0

    def test_disjoint_intervals_residuals(self):
        e_set = IntervalSet("line", ((-2.0, -1.0),))
        f_set = IntervalSet("line", ((3.0, 4.0),))
        spec = LocalizationSpec(e_set, f_set, 16.0, 2048)
        xs = np.linspace(-16, 16, 2048, endpoint=False)
        g = LineField(16.0, np.ones(2048, dtype=complex))
        h = LineField(16.0, np.zeros(2048, dtype=complex))
        f = prescribe(g, h, spec, tol=1e-9)
        re_, rf_ = prescription_residuals(f, g, h, spec)
        assert re_ < 1e-6 and rf_ < 1e-6

    def test_norm_gate(self):
        wide = IntervalSet("line", ((-14.0, 14.0),))
        full_f = IntervalSet("line", ((-40.0, 40.0),))
        spec = LocalizationSpec(wide, full_f, 16.0, 512)
        z = LineField(16.0, np.zeros(512, dtype=complex))
        with pytest.raises(BadParameter):
            prescribe(z, z, spec)


class TestLSDensity:
    def test_empty_is_one(self):
        assert ls_density(IntervalSet("line", ()), 1.0) == 1.0

    def test_full_window_zero(self):
        e_set = IntervalSet("line", ((-100.0, 100.0),))
        assert ls_density(e_set, 2.0) == 0.0

    def test_periodic_quarter(self):
        e_comp = IntervalSet("line", tuple((k, k + 0.25) for k in range(-40, 40)))
        e_set = _line_complement(e_comp, -40.0, 40.0)
        assert abs(ls_density(e_set, 2.0) - 0.25) < 1e-12

    def test_monotone_in_complement(self):
        e1 = IntervalSet("line", ((-10.0, -1.0), (1.0, 10.0)))
        e2 = IntervalSet("line", ((-10.0, -2.0), (2.0, 10.0)))  # smaller E
        assert ls_density(e2, 4.0) >= ls_density(e1, 4.0)


class TestLSDensityProperty:
    from hypothesis import given, settings
    from hypothesis import strategies as st

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_monotone_under_shrinking_e(self, seed):
        rng = np.random.default_rng(seed)
        starts = np.sort(rng.uniform(-20, 18, 4))
        lengths = rng.uniform(0.2, 1.5, 4)
        ivs = []
        cursor = -25.0
        for s0, ell in zip(starts, lengths):
            a = max(s0, cursor + 0.1)
            ivs.append((a, a + ell))
            cursor = a + ell
        big = IntervalSet("line", tuple(ivs))
        small = IntervalSet("line", tuple((a, a + (b - a) / 2) for a, b in ivs))
        r = float(rng.uniform(0.5, 4.0))
        # shrinking E enlarges the complement: delta_r never decreases
        assert ls_density(small, r) >= ls_density(big, r) - 1e-12


class TestHarmonicMeasure:
    def test_unit_window(self):
        s = IntervalSet("line", ((-1.0, 1.0),))
        assert abs(harmonic_measure_line(s, 0.0) - 0.5) < 1e-14

    def test_huge_interval_near_one(self):
        s = IntervalSet("line", ((-1e8, 1e8),))
        assert harmonic_measure_line(s, 0.0) > 1 - 1e-7

    def test_additivity(self):
        s1 = IntervalSet("line", ((-3.0, -1.0),))
        s2 = IntervalSet("line", ((0.5, 2.0),))
        both = IntervalSet("line", ((-3.0, -1.0), (0.5, 2.0)))
        for x in (-0.7, 0.0, 1.3):
            lhs = harmonic_measure_line(both, x)
            rhs = harmonic_measure_line(s1, x) + harmonic_measure_line(s2, x)
            assert abs(lhs - rhs) < 1e-14
            assert 0.0 <= lhs <= 1.0


class TestLSInequality:
    def test_periodic_complement(self):
        e_comp = IntervalSet("line", tuple((k, k + 0.25) for k in range(-64, 64)))
        e_set = _line_complement(e_comp, -64.0, 64.0)
        rep = ls_inequality_check(e_set, 1.0, half_width=64.0, size=4096,
                                  trials=40, seed=5)
        assert rep.gamma > 0
        assert rep.empirical_constant <= rep.proof_bound

    def test_full_line_complement(self):
        e_set = IntervalSet("line", ())
        rep = ls_inequality_check(e_set, 0.5, half_width=32.0, size=1024,
                                  trials=10, seed=2)
        # continuum constant is 1; boundary half-cells leave percent-level slack
        assert rep.empirical_constant <= 1.01
        assert rep.empirical_constant <= rep.proof_bound


class TestUncertainty:
    def test_unit_gaussian_extremal(self):
        lf = LineField.from_function(
            lambda x: (1 / math.pi) ** 0.25 * np.exp(-(x**2) / 2), 32.0, 2048)
        rep = uncertainty_checks(lf)
        assert abs(rep.heisenberg_product - 1.0) < 0.01
        assert abs(rep.entropy_sum - rep.entropy_bound) < 0.01 * abs(rep.entropy_bound)
        assert rep.norm_sq <= rep.heisenberg_product + 1e-8

    def test_dilation_invariance(self):
        lf1 = LineField.from_function(lambda x: np.exp(-(x**2) / 2), 32.0, 2048)
        lf2 = LineField.from_function(lambda x: np.exp(-((1.7 * x) ** 2) / 2),
                                      32.0, 2048)
        r1 = uncertainty_checks(lf1)
        r2 = uncertainty_checks(lf2)
        assert abs(r1.heisenberg_product - r2.heisenberg_product) < 1e-6

    def test_two_bump_strict_margin(self):
        lf = LineField.from_function(
            lambda x: np.exp(-((x - 3) ** 2)) + np.exp(-((x + 3) ** 2)),
            32.0, 2048)
        rep = uncertainty_checks(lf)
        assert rep.heisenberg_product > 1.0 + 0.1


class TestPWAndShannon:
    def test_indicator_transform(self):
        a = 2.0
        m, lw = 4096, 64.0
        xi = (math.pi / lw) * np.arange(-m // 2, m // 2)
        vals = (np.abs(xi) <= a).astype(complex)
        fhat = LineField(math.pi / (2 * lw / m), vals,
                         {"space_half_width": lw})
        v0, bound0 = pw_extend(fhat, a, 0.0)
        assert abs(v0 - 2 * a / TWO_PI) < 1e-2
        vz, boundz = pw_extend(fhat, a, 0.5 + 0.8j)
        import cmath
        oracle = 2 * cmath.sin(a * (0.5 + 0.8j)) / (0.5 + 0.8j) / TWO_PI
        assert abs(vz - oracle) < 5e-2 * abs(oracle)
        assert abs(vz) <= boundz + 1e-12

    def test_growth_bound_on_imaginary_axis(self):
        a = 1.5
        m, lw = 2048, 32.0
        xi = (math.pi / lw) * np.arange(-m // 2, m // 2)
        vals = np.exp(-(xi**2)) * (np.abs(xi) <= a)
        fhat = LineField(math.pi / (2 * lw / m), vals.astype(complex),
                         {"space_half_width": lw})
        for y in (0.5, 2.0, 4.0):
            v, bound = pw_extend(fhat, a, 1j * y)
            assert abs(v) <= bound + 1e-12

    def test_support_violation(self):
        m, lw = 1024, 32.0
        xi = (math.pi / lw) * np.arange(-m // 2, m // 2)
        vals = np.exp(-np.abs(xi)).astype(complex)
        fhat = LineField(math.pi / (2 * lw / m), vals,
                         {"space_half_width": lw})
        with pytest.raises(BadInput):
            pw_extend(fhat, 0.5, 0.0)

    def test_shannon_lattice_exact(self):
        a = 2.0
        samples = {n: math.sin(0.3 + n) for n in range(-20, 21)}
        for k in (-3, 0, 5):
            v, _ = shannon_reconstruct(samples, a, math.pi * k / a)
            assert abs(v - samples[k]) < 1e-12

    def test_shannon_offlattice_against_transform_oracle(self):
        # f smooth supported in [-a, a]; oracle: direct transform quadrature
        a = 4.0
        xs = np.linspace(-a, a, 20001)
        f_vals = np.where(np.abs(xs) < a, np.exp(-1 / np.maximum(1 - (xs / a) ** 2, 1e-300)), 0.0)

        def fhat(xi):
            return np.trapezoid(f_vals * np.exp(-1j * xs * xi), xs)

        samples = {n: fhat(math.pi * n / a) for n in range(-60, 61)}
        for xi in (0.37, 1.91, -2.43):
            v, _ = shannon_reconstruct(samples, a, xi)
            assert abs(v - fhat(xi)) < 1e-6

    def test_shannon_zero(self):
        v, _ = shannon_reconstruct({n: 0.0 for n in range(-5, 6)}, 1.0, 0.77)
        assert v == 0.0


class TestPoissonSummation:
    def test_gaussian(self):
        lf = LineField.from_function(lambda x: np.exp(-(x**2) / 2), 32.0, 4096)
        left, right, _ = poisson_summation_check(
            lf, f_callable=lambda x: math.exp(-(x**2) / 2))
        assert abs(left - right) < 1e-10

    def test_zero(self):
        lf = LineField(32.0, np.zeros(1024, dtype=complex))
        left, right, _ = poisson_summation_check(lf)
        assert left == 0 and right == 0

    def test_dilation_preserves_identity(self):
        for s in (1.0, 1.5):
            lf = LineField.from_function(lambda x: np.exp(-(s * x**2) / 2), 32.0, 4096)
            left, right, _ = poisson_summation_check(
                lf, f_callable=lambda x: math.exp(-(s * x**2) / 2))
            assert abs(left - right) < 1e-9
