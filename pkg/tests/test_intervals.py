"""Containment tests for the outward-rounded interval arithmetic."""

import math

import mpmath
import numpy as np
import pytest

from dirseries.errors import InvalidArgumentError
from dirseries.intervals import CInt, RInt


def assert_contains(interval, exact):
    exact = float(exact)
    assert interval.lo <= exact <= interval.hi


class TestRealIntervals:
    def test_point_construction_is_exact(self):
        x = RInt(0.1)
        assert x.lo == 0.1 and x.hi == 0.1
        assert x.width == 0.0

    def test_validation(self):
        with pytest.raises(InvalidArgumentError):
            RInt(2.0, 1.0)
        with pytest.raises(InvalidArgumentError):
            RInt(float("nan"))
        with pytest.raises(InvalidArgumentError):
            RInt(1.0) / RInt(-1.0, 1.0)
        with pytest.raises(InvalidArgumentError):
            RInt(-1.0, 1.0).log()
        with pytest.raises(InvalidArgumentError):
            RInt(-1.0, 1.0).sqrt()

    def test_small_sums(self):
        s = RInt(2.0) + RInt(3.0)
        assert_contains(s, 5.0)
        assert s.width < 1e-14

    def test_random_chains_contain_exact_value(self):
        mpmath.mp.dps = 60
        rng = np.random.default_rng(0)
        for _ in range(200):
            a, b = rng.uniform(-10.0, 10.0, size=2)
            x, y = RInt(a), RInt(b)
            ea, eb = mpmath.mpf(a), mpmath.mpf(b)
            assert_contains(x + y, ea + eb)
            assert_contains(x - y, ea - eb)
            assert_contains(x * y, ea * eb)
            if abs(b) > 1e-6:
                assert_contains(x / y, ea / eb)
            assert_contains(x.abs(), abs(ea))
            if abs(a) < 50:
                assert_contains(x.exp(), mpmath.exp(ea))
            if a > 1e-6:
                assert_contains(x.log(), mpmath.log(ea))
                assert_contains(x.sqrt(), mpmath.sqrt(ea))
            assert_contains(x.pow_int(3), ea**3)
            assert_contains(x.pow_int(8), ea**8)

    def test_widths_stay_tight(self):
        x = RInt(1.5)
        y = ((x * x + 2.0) / 3.5).exp().log()
        assert y.width < 1e-12
        assert_contains(y, math.log(math.exp((1.5 * 1.5 + 2.0) / 3.5)))

    def test_even_power_of_straddling_interval(self):
        x = RInt(-2.0, 1.0)
        sq = x.pow_int(2)
        assert sq.lo == 0.0
        assert sq.hi >= 4.0

    def test_exp_log_roundtrip_contains_input(self):
        for v in (0.25, 1.0, 3.75, 20.0):
            assert RInt(v).log().exp().contains(v)

    def test_hull_and_membership(self):
        h = RInt(1.0, 2.0).hull(RInt(4.0))
        assert h.lo == 1.0 and h.hi == 4.0
        assert h.contains(3.0)
        assert not RInt(1.0, 2.0).contains(3.0)


class TestComplexIntervals:
    def test_point_product(self):
        z = CInt(1.0 + 2.0j) * CInt(3.0 - 1.0j)
        assert_contains(z.re, 5.0)
        assert_contains(z.im, 5.0)
        assert z.re.width < 1e-13

    def test_random_products_and_powers(self):
        mpmath.mp.dps = 60
        rng = np.random.default_rng(1)
        for _ in range(100):
            a = complex(*rng.uniform(-3.0, 3.0, size=2))
            b = complex(*rng.uniform(-3.0, 3.0, size=2))
            za, zb = CInt(a), CInt(b)
            ma = mpmath.mpc(a.real, a.imag)
            mb = mpmath.mpc(b.real, b.imag)
            prod = za * zb
            exact = ma * mb
            assert_contains(prod.re, exact.real)
            assert_contains(prod.im, exact.imag)
            cube = za.powi(3)
            ecube = ma**3
            assert_contains(cube.re, ecube.real)
            assert_contains(cube.im, ecube.imag)
            assert_contains(za.abs(), mpmath.fabs(ma))

    def test_abs_of_three_four(self):
        r = CInt(3.0 + 4.0j).abs()
        assert_contains(r, 5.0)
        assert r.width < 1e-13

    def test_abs_lower_bound_zero_when_rectangle_straddles(self):
        z = CInt(RInt(-1.0, 1.0), RInt(-1.0, 1.0))
        assert z.abs().lo == 0.0

    def test_sum_cancellation_is_certified(self):
        # 1 + 0.7*(-1/1.1) + 0.4*(-1/1.1) vanishes; the interval must pin it
        r = RInt(1.0) / RInt(1.1)
        total = CInt(1.0) + CInt(0.7) * CInt(-r, RInt(0.0)) + CInt(0.4) * CInt(
            -r, RInt(0.0)
        )
        assert total.abs().hi < 1e-14
