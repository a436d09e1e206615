"""Multi-index lift, polydisk evaluation, and polytorus sup norms."""

import numpy as np
import pytest

from dirseries.bohrlift import (
    MultiIndexPoly,
    QuasiCharacterPoint,
    euler_multiplier_norm,
    eval_quasi,
    lift,
    multiply,
    point_eval_bound,
    prime_linear_sup_norm,
    sup_norm_polytorus,
    sup_norm_search,
    unlift,
)
from dirseries.errors import InvalidArgumentError, ResourceCapError
from dirseries.numtheory import MultiIndex, build_factor_table
from dirseries.series import (
    DirichletPoly,
    convolve,
    evaluate,
    from_multiplicative,
    norm_H,
    unit,
)

TABLE = build_factor_table(10**4)


def random_poly(rng, n):
    return DirichletPoly(rng.normal(size=n) + 1j * rng.normal(size=n))


def prime_linear(prime_coeffs, N):
    c = np.zeros(N, dtype=np.complex128)
    c[0] = 1.0
    for p, v in prime_coeffs.items():
        c[p - 1] = v
    return DirichletPoly(c)


class TestLift:
    def test_lift_unit(self):
        P = lift(unit(5), TABLE)
        assert len(P) == 1
        assert P.coefficient(MultiIndex(())) == 1
        assert P.prime_support == ()

    def test_lift_four(self):
        P = lift(DirichletPoly([1, 0, 0, 0.25]), TABLE)
        assert len(P) == 2
        assert P.coefficient(MultiIndex(())) == 1
        assert P.coefficient(MultiIndex(((2, 2),))) == 0.25
        assert P.prime_support == (2,)

    def test_zero_coefficients_dropped(self):
        P = lift(DirichletPoly([1, 0, 2.0]), TABLE)
        assert len(P) == 2
        assert 2 not in P.prime_support
        assert P.prime_support == (3,)

    def test_roundtrip_exact(self):
        rng = np.random.default_rng(42)
        f = random_poly(rng, 10**4)
        g = unlift(lift(f, TABLE))
        assert np.array_equal(g.coeffs, f.coeffs)

    def test_unlift_with_truncation(self):
        f = DirichletPoly([1, 0.5, 0, 0])
        g = unlift(lift(f, TABLE), truncation=4)
        assert np.array_equal(g.coeffs, f.coeffs)
        with pytest.raises(InvalidArgumentError):
            unlift(lift(f, TABLE), truncation=1)

    def test_table_too_small(self):
        t = build_factor_table(5)
        with pytest.raises(InvalidArgumentError):
            lift(DirichletPoly([1] * 6), t)

    def test_lift_is_ring_isomorphism(self):
        rng = np.random.default_rng(17)
        n = 30
        # integer coefficients make every product exact in floating point
        f = DirichletPoly(rng.integers(-4, 5, size=n).astype(np.complex128))
        g = DirichletPoly(rng.integers(-4, 5, size=n).astype(np.complex128))
        want = lift(convolve(f, g), TABLE)
        got = multiply(lift(f, TABLE), lift(g, TABLE), limit=n)
        assert dict(want.terms) == dict(got.terms)

    def test_cancelling_terms_dropped(self):
        mi = MultiIndex(((2, 1),))
        P = multiply(
            MultiIndexPoly({mi: 1.0, MultiIndex(()): 1.0}),
            MultiIndexPoly({mi: -1.0, MultiIndex(()): 1.0}),
        )
        # (1+z)(1-z) = 1 - z^2: the linear terms cancel exactly
        assert P.coefficient(mi) == 0
        assert P.coefficient(MultiIndex(((2, 2),))) == -1


class TestEvalQuasi:
    def test_zero_point_gives_leading_coefficient(self):
        rng = np.random.default_rng(2)
        f = random_poly(rng, 50)
        P = lift(f, TABLE)
        assert eval_quasi(P, QuasiCharacterPoint({})) == pytest.approx(
            complex(f.coeff(1))
        )

    def test_special_point_reproduces_evaluation(self):
        # phi(p) = p^{-s} on all primes up to the truncation turns the
        # lifted polynomial back into the Dirichlet series value
        rng = np.random.default_rng(3)
        n = 64
        f = random_poly(rng, n)
        P = lift(f, TABLE)
        s = 0.7 - 1.3j
        phi = {int(p): complex(p) ** (-s) for p in build_factor_table(n).primes}
        assert abs(eval_quasi(P, phi) - evaluate(f, s)) < 1e-12

    def test_smooth_restriction(self):
        # with phi supported on {2,3} only the 3-smooth part survives
        t = build_factor_table(30)
        c = np.ones(30, dtype=np.complex128)
        f = DirichletPoly(c)
        s = 1.1 + 0.4j
        phi = {2: 2.0 ** (-s), 3: 3.0 ** (-s)}
        smooth = np.zeros(30, dtype=np.complex128)
        for n in range(1, 31):
            m = n
            for p in (2, 3):
                while m % p == 0:
                    m //= p
            if m == 1:
                smooth[n - 1] = 1.0
        want = evaluate(DirichletPoly(smooth), s)
        assert abs(eval_quasi(lift(f, t), phi) - want) < 1e-12

    def test_matches_per_term_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n = int(rng.integers(2, 200))
            f = random_poly(rng, n)
            P = lift(f, TABLE)
            vals = {
                2: 0.5 * (rng.normal() + 1j * rng.normal()) / 3,
                3: 0.5 * (rng.normal() + 1j * rng.normal()) / 3,
                5: 0.5 * (rng.normal() + 1j * rng.normal()) / 3,
            }
            want = 0.0 + 0.0j
            for mi, c in P.sorted_items():
                factor = 1.0 + 0.0j
                for p, e in mi.exponents:
                    factor *= vals.get(p, 0.0 + 0.0j) ** e
                want += c * factor
            got = eval_quasi(P, vals)
            assert abs(got - want) < 1e-10

    def test_vectorized_path_matches_scalar(self):
        rng = np.random.default_rng(6)
        f = random_poly(rng, 500)  # > 64 terms triggers the matrix path
        P = lift(f, TABLE)
        phi = {2: 0.4 + 0.2j, 3: -0.3j, 7: 0.25}
        got = eval_quasi(P, phi)
        want = 0.0 + 0.0j
        for mi, c in P.sorted_items():
            factor = 1.0 + 0.0j
            for p, e in mi.exponents:
                factor *= complex(phi.get(p, 0.0)) ** e
            want += c * factor
        assert abs(got - want) < 1e-10


class TestPointEvalBound:
    def test_empty_point(self):
        assert point_eval_bound(QuasiCharacterPoint({})) == 1.0

    def test_single_prime(self):
        got = point_eval_bound(QuasiCharacterPoint({2: 0.5}))
        assert abs(got - 2.0 / np.sqrt(3.0)) < 1e-14

    def test_outside_disk_is_flagged_infinite(self):
        with pytest.warns(RuntimeWarning):
            assert point_eval_bound({2: 1.0}) == float("inf")

    def test_point_validation(self):
        with pytest.raises(InvalidArgumentError):
            QuasiCharacterPoint({2: 1.0})
        with pytest.raises(InvalidArgumentError):
            QuasiCharacterPoint({4: 0.5})
        with pytest.raises(InvalidArgumentError):
            QuasiCharacterPoint({2: float("nan")})

    def test_bound_dominates_evaluation(self):
        rng = np.random.default_rng(99)
        f = random_poly(rng, 10**4)
        P = lift(f, TABLE)
        nf = norm_H(f)
        primes = np.array([2, 3, 5, 7])
        for _ in range(1000):
            r = rng.uniform(0.0, 0.95, size=4)
            ang = rng.uniform(0.0, 2 * np.pi, size=4)
            phi = {
                int(p): r[i] * np.exp(1j * ang[i]) for i, p in enumerate(primes)
            }
            assert abs(eval_quasi(P, phi)) <= point_eval_bound(phi) * nf


class TestSupNormGrid:
    def test_unit_is_exactly_one(self):
        res = sup_norm_polytorus(lift(unit(4), TABLE), 64)
        assert res.lower == 1.0
        assert res.estimate == 1.0
        assert res.dimension == 0

    def test_prime_linear_example(self):
        f = prime_linear({2: 0.3, 3: 0.2}, 4)
        res = sup_norm_polytorus(lift(f, TABLE), 64)
        assert abs(res.estimate - 1.5) < 1e-3
        assert res.lower <= res.estimate
        # the aligned-phase optimum is on the grid here
        assert abs(res.lower - 1.5) < 1e-12

    def test_one_minus_two(self):
        f = DirichletPoly([1, -1])
        res = sup_norm_polytorus(lift(f, TABLE), 64)
        assert abs(res.estimate - 2.0) < 1e-3

    def test_single_term_grid_is_deterministic(self):
        # |0.5 z| is constant on the circle: the scan must settle on one
        # reproducible argmax and report its value as the lower bound
        f = DirichletPoly([0, 0.5])
        a = sup_norm_polytorus(lift(f, TABLE), 64)
        b = sup_norm_polytorus(lift(f, TABLE), 64)
        assert a == b
        assert abs(a.lower - 0.5) < 1e-15
        assert a.estimate == a.lower

    def test_zero_polynomial(self):
        res = sup_norm_polytorus(MultiIndexPoly({}), 64)
        assert res.lower == 0.0 and res.estimate == 0.0

    def test_monotone_along_nested_resolutions(self):
        rng = np.random.default_rng(31)
        c = np.zeros(30, dtype=np.complex128)
        for n in (1, 2, 3, 4, 5, 6, 8, 9, 10, 12, 15, 16, 18, 20, 24, 25, 27, 30):
            c[n - 1] = rng.normal() + 1j * rng.normal()
        P = lift(DirichletPoly(c), TABLE)
        lows = [sup_norm_polytorus(P, r).lower for r in (64, 128, 256)]
        assert lows[0] <= lows[1] <= lows[2]

    def test_triangle_bounds(self):
        rng = np.random.default_rng(32)
        for _ in range(10):
            c = np.zeros(12, dtype=np.complex128)
            for n in (1, 2, 3, 4, 6, 8, 9, 12):
                c[n - 1] = rng.normal() + 1j * rng.normal()
            f = DirichletPoly(c)
            P = lift(f, TABLE)
            res = sup_norm_polytorus(P, 64)
            l1 = float(np.sum(np.abs(f.coeffs)))
            assert res.lower <= l1 + 1e-12
            low = abs(f.coeff(1)) - (l1 - abs(f.coeff(1)))
            if low > 0:
                assert res.lower >= low - 1e-12

    def test_dimension_cap(self):
        pv = {p: 0.1 for p in (2, 3, 5, 7, 11, 13, 17, 19, 23)}
        f = prime_linear(pv, 24)
        with pytest.raises(InvalidArgumentError, match="sup_norm_search"):
            sup_norm_polytorus(lift(f, TABLE), 64)

    def test_point_budget(self):
        pv = {p: 0.1 for p in (2, 3, 5, 7, 11, 13)}
        f = prime_linear(pv, 14)
        with pytest.raises(ResourceCapError):
            sup_norm_polytorus(lift(f, TABLE), 64)

    def test_resolution_validation(self):
        P = lift(DirichletPoly([1, 0.5]), TABLE)
        with pytest.raises(InvalidArgumentError):
            sup_norm_polytorus(P, 32)
        with pytest.raises(InvalidArgumentError):
            sup_norm_polytorus(P, 64.0)

    def test_five_prime_grid_at_cap_matches_closed_form(self):
        # exercises the largest admissible grid (64^5 = 2^30 points) and the
        # low-precision blocked path against the prime-linear closed form
        rng = np.random.default_rng(1234)
        all_primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        coeffs = {
            p: 0.3 * (rng.normal() + 1j * rng.normal()) for p in all_primes
        }
        chosen = [2, 5, 11, 19, 29]
        sub = {p: coeffs[p] for p in chosen}
        f = prime_linear(sub, 30)
        res = sup_norm_polytorus(lift(f, TABLE), 64)
        assert abs(res.estimate - prime_linear_sup_norm(sub)) < 1e-2


class TestSupNormSearch:
    def test_matches_closed_form(self):
        f = prime_linear({2: 0.3, 3: 0.2}, 4)
        res = sup_norm_search(lift(f, TABLE), num_starts=8, seed=1)
        assert abs(res.estimate - 1.5) < 1e-6

    def test_high_dimension_allowed(self):
        pv = {p: 0.05 for p in (2, 3, 5, 7, 11, 13, 17, 19, 23)}
        f = prime_linear(pv, 24)
        res = sup_norm_search(lift(f, TABLE), num_starts=4, seed=0)
        want = prime_linear_sup_norm(pv)
        assert abs(res.estimate - want) < 1e-4

    def test_deterministic(self):
        f = prime_linear({2: 0.4, 7: 0.1j}, 8)
        P = lift(f, TABLE)
        a = sup_norm_search(P, num_starts=6, seed=7)
        b = sup_norm_search(P, num_starts=6, seed=7)
        assert a == b


class TestClosedForms:
    def test_prime_linear_empty(self):
        assert prime_linear_sup_norm({}) == 1.0

    def test_prime_linear_example(self):
        assert prime_linear_sup_norm({2: 0.3, 3: 0.2}) == 1.5

    def test_prime_linear_validation(self):
        with pytest.raises(InvalidArgumentError):
            prime_linear_sup_norm({6: 0.1})

    def test_euler_single_factor(self):
        res = euler_multiplier_norm({2: 0.5})
        assert abs(res.forward - 2.0) < 1e-14
        assert abs(res.reciprocal - 1.5) < 1e-14
        assert res.flags == ()

    def test_euler_empty(self):
        res = euler_multiplier_norm({})
        assert res.forward == 1.0 and res.reciprocal == 1.0

    def test_euler_noncontractive_flagged(self):
        res = euler_multiplier_norm({2: 1.0, 3: 0.5})
        assert res.forward == float("inf")
        assert "non-contractive-prime-value" in res.flags
        assert abs(res.reciprocal - 3.0) < 1e-14

    def test_euler_forward_matches_grid_on_subproduct(self):
        # the multiplicative extension of p -> p^{-2} on {2,3,5} has sup
        # norm Π(1-p^{-2})^{-1} = 25/16 over those primes
        pv = {2: 2.0**-2, 3: 3.0**-2, 5: 5.0**-2}
        n = 1024
        t = build_factor_table(n)
        f = from_multiplicative(pv, n, t)
        res = sup_norm_polytorus(lift(f, t), 64)
        want = euler_multiplier_norm(pv).forward
        assert abs(res.estimate - want) < 1e-2
