"""Dirichlet series arithmetic, norms, mean values, and the zeta kernel."""

import math

import mpmath
import numpy as np
import pytest

from dirseries import series
from dirseries.errors import (
    DomainError,
    InvalidArgumentError,
    NonInvertibleError,
)
from dirseries.numtheory import build_factor_table
from dirseries.series import (
    CarlsonReport,
    DirichletPoly,
    carlson_mean,
    convolve,
    estimate_sigma_c,
    euler_norms,
    evaluate,
    from_multiplicative,
    inner_product,
    kernel,
    norm_H,
    norm_Hd,
    ones,
    partial_sums,
    reciprocal,
    unit,
)


def random_poly(rng, n, a1=None):
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    if a1 is not None:
        c[0] = a1
    return DirichletPoly(c)


class TestDirichletPoly:
    def test_construction(self):
        f = DirichletPoly([1, 0.5])
        assert f.truncation == 2
        assert f.coeff(1) == 1
        assert f.coeff(2) == 0.5
        assert f.coeffs[0] == 0
        assert f.coeffs.flags.writeable is False

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            DirichletPoly([])
        with pytest.raises(InvalidArgumentError):
            DirichletPoly([[1, 2], [3, 4]])
        with pytest.raises(InvalidArgumentError):
            DirichletPoly([1, float("nan")])
        with pytest.raises(InvalidArgumentError):
            DirichletPoly([1, float("inf")])
        f = DirichletPoly([1, 2, 3])
        with pytest.raises(InvalidArgumentError):
            f.coeff(0)
        with pytest.raises(InvalidArgumentError):
            f.coeff(4)

    def test_unit_and_ones(self):
        u = unit(5)
        assert u.coeff(1) == 1 and u.coeff(5) == 0
        o = ones(4)
        assert [o.coeff(k) for k in range(1, 5)] == [1, 1, 1, 1]


class TestConvolutionAlgebra:
    def test_unit_is_identity(self):
        rng = np.random.default_rng(3)
        f = random_poly(rng, 40)
        g = convolve(f, unit(40))
        assert np.array_equal(g.coeffs, f.coeffs)

    def test_hand_example(self):
        f = DirichletPoly([1, 1])
        c = convolve(f, f)
        assert c.coeff(1) == 1 and c.coeff(2) == 2

    def test_ones_squared_is_divisor_count(self):
        n = 2000
        t = build_factor_table(n)
        c = convolve(ones(n), ones(n))
        assert np.array_equal(c.coeffs.real, t.divisor_count.astype(float))

    def test_truncation_is_minimum(self):
        rng = np.random.default_rng(4)
        f = random_poly(rng, 30)
        g = random_poly(rng, 12)
        assert convolve(f, g).truncation == 12

    def test_commutative_and_associative(self):
        rng = np.random.default_rng(8)
        f, g, h = (random_poly(rng, 64) for _ in range(3))
        fg = convolve(f, g)
        gf = convolve(g, f)
        assert np.allclose(fg.coeffs, gf.coeffs, rtol=1e-12, atol=1e-12)
        left = convolve(fg, h)
        right = convolve(f, convolve(g, h))
        assert np.allclose(left.coeffs, right.coeffs, rtol=1e-10, atol=1e-10)

    def test_reciprocal_roundtrip(self):
        rng = np.random.default_rng(12)
        for _ in range(10):
            f = random_poly(rng, 200, a1=1.0)
            g = reciprocal(f)
            prod = convolve(f, g)
            unit_arr = np.zeros(201, dtype=np.complex128)
            unit_arr[1] = 1
            assert np.max(np.abs(prod.coeffs - unit_arr)) < 1e-10

    def test_reciprocal_scales_leading(self):
        f = DirichletPoly([2.0, 1.0])
        g = reciprocal(f)
        assert g.coeff(1) == 0.5
        assert abs(g.coeff(2) + 0.25) < 1e-15

    def test_noninvertible(self):
        with pytest.raises(NonInvertibleError):
            reciprocal(DirichletPoly([0, 1]))


class TestEvaluation:
    def test_geometric_series_in_two(self):
        # coefficients supported on powers of 2 with a_{2^k} = x^k sum to
        # a finite geometric series at s: sum_{k<=K} (x 2^{-s})^k
        n = 1 << 14
        c = np.zeros(n, dtype=np.complex128)
        x = 0.35 - 0.2j
        k = 0
        while (1 << k) <= n:
            c[(1 << k) - 1] = x**k
            k += 1
        f = DirichletPoly(c)
        s = 0.8 + 3.0j
        ratio = x * 2**-s
        want = (1.0 - ratio**k) / (1.0 - ratio)
        assert abs(evaluate(f, s) - want) < 1e-12

    def test_evaluate_against_fsum(self):
        rng = np.random.default_rng(31)
        f = random_poly(rng, 3000)
        s = 1.2 - 2.5j
        ns = np.arange(1, 3001, dtype=np.float64)
        terms = f.coeffs[1:] * np.exp(-s * np.log(ns))
        want = complex(math.fsum(terms.real), math.fsum(terms.imag))
        assert abs(evaluate(f, s) - want) < 1e-12

    def test_real_and_complex_paths_agree(self):
        rng = np.random.default_rng(32)
        f = random_poly(rng, 500)
        assert abs(evaluate(f, 1.5) - evaluate(f, 1.5 + 0j)) < 1e-13

    def test_inner_product_reproduces_evaluation(self):
        rng = np.random.default_rng(33)
        n = 200
        f = random_poly(rng, n)
        w = 1.4 + 0.7j
        ns = np.arange(1, n + 1, dtype=np.float64)
        k_w = DirichletPoly(np.exp(-np.conj(w) * np.log(ns)))
        assert abs(inner_product(f, k_w) - evaluate(f, w)) < 1e-12


class TestPartialSumsAndAbscissa:
    def test_partial_sums_of_ones(self):
        ns, sums = partial_sums(ones(1 << 10))
        assert list(ns) == [1 << k for k in range(11)]
        assert np.allclose(sums, ns.astype(float))

    def test_estimate_for_ones_is_one(self):
        est = estimate_sigma_c(ones(1 << 17))
        assert abs(est.estimate - 1.0) < 1e-9
        assert est.residual < 1e-9
        assert est.flags == ()

    def test_estimate_tracks_power_growth(self):
        # a_n = n^(alpha-1) gives S_N ~ N^alpha / alpha
        n = 1 << 17
        alpha = 0.7
        ns = np.arange(1, n + 1, dtype=np.float64)
        f = DirichletPoly(ns ** (alpha - 1.0))
        est = estimate_sigma_c(f)
        assert abs(est.estimate - alpha) < 0.05

    def test_alternating_signs_are_flagged_bounded(self):
        n = 1 << 10
        c = np.ones(n)
        c[::2] = -1.0  # a_1=-1, a_2=+1, ... so S_N = 0 at even N
        est = estimate_sigma_c(DirichletPoly(c))
        assert est.estimate == 0.0
        assert "bounded-partial-sums" in est.flags

    def test_zero_series_marker(self):
        c = np.zeros(256)
        est = estimate_sigma_c(DirichletPoly(c))
        assert est.estimate == float("-inf")
        assert "all-partial-sums-zero" in est.flags

    def test_needs_eight_dyadic_points(self):
        with pytest.raises(InvalidArgumentError):
            estimate_sigma_c(ones(100))  # only 7 dyadic points
        estimate_sigma_c(ones(128))  # exactly 8: fine

    def test_decaying_partial_sums_clamp_to_zero(self):
        # choose coefficients so that S_N = N^{-1/2} exactly: the raw slope
        # is -1/2 but the reported estimate must clamp at 0
        n = 1 << 12
        ns = np.arange(1, n + 1, dtype=np.float64)
        targets = ns**-0.5
        c = np.diff(targets, prepend=0.0)
        est = estimate_sigma_c(DirichletPoly(c))
        assert est.estimate == 0.0
        assert abs(est.slope + 0.5) < 1e-6
        assert "negative-slope-clamped" in est.flags


class TestNorms:
    def test_norm_h_hand_value(self):
        f = DirichletPoly([3, 4])
        assert norm_H(f) == 5.0

    def test_norm_hd_weights_by_divisor_count(self):
        t = build_factor_table(6)
        f = DirichletPoly([1, 1, 0, 1, 0, 0])
        # d(1)+d(2)+d(4) = 1+2+3
        assert abs(norm_Hd(f, t) - math.sqrt(6.0)) < 1e-14

    def test_norm_hd_table_too_small(self):
        t = build_factor_table(5)
        with pytest.raises(InvalidArgumentError):
            norm_Hd(DirichletPoly([1] * 6), t)

    def test_euler_norms_half_at_two(self):
        en = euler_norms({2: 0.5})
        assert abs(en.norm_h2 - 4.0 / 3.0) < 1e-14
        assert abs(en.norm_hd2 - 16.0 / 9.0) < 1e-14
        assert abs(en.reciprocal_norm_h2 - 5.0 / 4.0) < 1e-14
        assert abs(en.reciprocal_norm_hd2 - 3.0 / 2.0) < 1e-14
        assert en.in_h

    def test_euler_norms_outside_space(self):
        en = euler_norms({2: 1.0})
        assert not en.in_h
        assert en.norm_h2 == float("inf")
        assert en.norm_hd2 == float("inf")
        assert np.isfinite(en.reciprocal_norm_h2)

    def test_euler_norms_against_sieve(self):
        pv = {2: 0.31 + 0.2j, 3: -0.25, 5: 0.2j, 7: 0.15}
        n = 1 << 20
        t = build_factor_table(n)
        f = from_multiplicative(pv, n, t)
        en = euler_norms(pv)
        assert abs(norm_H(f) ** 2 - en.norm_h2) / en.norm_h2 < 1e-3
        assert abs(norm_Hd(f, t) ** 2 - en.norm_hd2) / en.norm_hd2 < 1e-3
        g = reciprocal(f)
        assert (
            abs(norm_H(g) ** 2 - en.reciprocal_norm_h2) / en.reciprocal_norm_h2
            < 1e-3
        )
        assert (
            abs(norm_Hd(g, t) ** 2 - en.reciprocal_norm_hd2)
            / en.reciprocal_norm_hd2
            < 1e-3
        )

    def test_divisor_weighted_square_identity(self):
        # for a totally multiplicative rule, sum |a_n|^2 d(n) equals
        # (sum |a_n|^2)^2 in the limit
        pv = {2: 0.3, 3: 0.25j, 5: -0.2}
        n = 1 << 16
        t = build_factor_table(n)
        f = from_multiplicative(pv, n, t)
        lhs = norm_Hd(f, t) ** 2
        rhs = norm_H(f) ** 4
        assert abs(lhs - rhs) / rhs < 1e-3

    def test_euler_norms_validation(self):
        with pytest.raises(InvalidArgumentError):
            euler_norms({4: 0.5})
        with pytest.raises(InvalidArgumentError):
            euler_norms({2: float("nan")})


class TestCarlsonMean:
    def test_single_frequency_is_exact(self):
        # f(s) = 2^{-s} has |f(sigma+it)|^2 constant in t
        f = DirichletPoly([0, 1.0])
        rep = carlson_mean(f, 0.75, 50.0)
        want = 2.0 ** (-1.5)
        assert abs(rep.target - want) < 1e-15
        assert abs(rep.closed_form_mean - want) < 1e-15
        assert abs(rep.quadrature_mean - want) < 1e-9
        assert rep.cross_term_bound == 0.0

    def test_two_term_hand_formula(self):
        sigma, T = 0.8, 200.0
        f = DirichletPoly([1.0, 1.0])
        rep = carlson_mean(f, sigma, T)
        l2 = math.log(2.0)
        target = 1.0 + 2.0 ** (-2 * sigma)
        cross = 2.0 * 2.0**-sigma * math.sin(T * l2) / (T * l2)
        assert abs(rep.target - target) < 1e-15
        assert abs(rep.closed_form_mean - (target + cross)) < 1e-12
        assert abs(rep.quadrature_mean - rep.closed_form_mean) < 1e-6
        assert abs(rep.cross_term_bound - 2.0 * 2.0**-sigma / (T * l2)) < 1e-15

    def test_random_reports_are_consistent(self):
        rng = np.random.default_rng(2024)
        for _ in range(8):
            n = int(rng.integers(2, 30))
            f = random_poly(rng, n)
            sigma = float(rng.choice([0.6, 0.75, 1.0]))
            T = float(rng.choice([50.0, 400.0]))
            rep = carlson_mean(f, sigma, T)
            assert isinstance(rep, CarlsonReport)
            assert abs(rep.quadrature_mean - rep.closed_form_mean) < 1e-6
            assert abs(rep.closed_form_mean - rep.target) <= (
                rep.cross_term_bound * (1 + 1e-12) + 1e-15
            )

    def test_long_interval_approaches_target(self):
        f = DirichletPoly([1.0, 0.5, 0.25])
        rep = carlson_mean(f, 0.75, 1e3)
        assert abs(rep.closed_form_mean - rep.target) < 5e-3
        assert rep.cross_term_bound < 2e-2

    def test_validation(self):
        f = DirichletPoly([1.0, 0.5])
        with pytest.raises(InvalidArgumentError):
            carlson_mean(f, 0.0, 10.0)
        with pytest.raises(InvalidArgumentError):
            carlson_mean(f, 0.5, -1.0)


class TestZetaKernel:
    def test_against_mpmath_grid(self):
        mpmath.mp.dps = 30
        for sigma in (1.1, 1.5, 2.0, 3.0, 6.0):
            for t in (0.0, 0.7, -3.0, 12.5, 50.0):
                s = complex(sigma, t)
                want = complex(mpmath.zeta(s))
                got = series.zeta(s)
                assert abs(got - want) < 1e-10, s

    def test_kernel_conjugates_second_argument(self):
        mpmath.mp.dps = 30
        z = 1.3 + 2.0j
        w = 0.9 + 0.4j
        want = complex(mpmath.zeta(complex(2.2, 2.0 - 0.4)))
        assert abs(kernel(z, w) - want) < 1e-10

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            kernel(0.5, 0.5)
        with pytest.raises(DomainError):
            kernel(0.5 + 3j, 0.5 - 1j)
        with pytest.raises(DomainError):
            series.zeta(1.0)

    def test_kernel_hermitian_symmetry(self):
        z = 1.2 + 1.0j
        w = 1.1 - 0.6j
        assert abs(kernel(z, w) - kernel(w, z).conjugate()) < 1e-12

    def test_reproducing_property_truncated(self):
        rng = np.random.default_rng(55)
        n = 500
        f = random_poly(rng, n)
        w = 1.6 + 0.8j
        ns = np.arange(1, n + 1, dtype=np.float64)
        k_w = DirichletPoly(np.exp(-np.conj(w) * np.log(ns)))
        assert abs(inner_product(f, k_w) - evaluate(f, w)) < 1e-12
