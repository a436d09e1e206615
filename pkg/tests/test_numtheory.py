"""Factor tables, multi-indices, and multiplicative extension."""

import numpy as np
import pytest

from dirseries.errors import InvalidArgumentError
from dirseries.numtheory import (
    MultiIndex,
    build_factor_table,
    extend_multiplicatively,
    from_multi_index,
    to_multi_index,
)

from test_kernels import brute_factor, brute_mobius


def test_table_smallest_case():
    t = build_factor_table(1)
    assert t.limit == 1
    assert t.primes.size == 0
    assert t.smallest_prime_factor[1] == 1
    assert t.mobius[1] == 1
    assert t.divisor_count[1] == 1
    assert t.big_omega[1] == 0


def test_table_first_ten():
    t = build_factor_table(10)
    assert list(t.primes) == [2, 3, 5, 7]
    assert list(t.smallest_prime_factor[1:]) == [1, 2, 3, 2, 5, 2, 7, 2, 3, 2]
    assert list(t.mobius[1:]) == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert list(t.divisor_count[1:]) == [1, 2, 2, 3, 2, 4, 2, 4, 3, 4]
    assert list(t.big_omega[1:]) == [0, 1, 1, 2, 1, 2, 1, 3, 2, 2]


def test_table_mobius_random_against_trial_division():
    t = build_factor_table(10**6)
    rng = np.random.default_rng(101)
    for n in rng.integers(1, 10**6 + 1, size=1000):
        assert t.mobius[int(n)] == brute_mobius(int(n))


def test_mobius_inversion_identity():
    # sum of mu(d) over divisors d of n is 1 at n=1 and 0 otherwise
    t = build_factor_table(5000)
    rng = np.random.default_rng(5)
    for n in [1, 2, 12, 360] + [int(x) for x in rng.integers(2, 5001, size=50)]:
        total = sum(int(t.mobius[d]) for d in range(1, n + 1) if n % d == 0)
        assert total == (1 if n == 1 else 0)


def test_divisor_count_submultiplicative():
    t = build_factor_table(10**4)
    rng = np.random.default_rng(9)
    for _ in range(200):
        m = int(rng.integers(1, 101))
        n = int(rng.integers(1, 101))
        assert t.divisor_count[m * n] <= t.divisor_count[m] * t.divisor_count[n]


def test_table_is_immutable():
    t = build_factor_table(100)
    with pytest.raises(ValueError):
        t.mobius[3] = 5


def test_table_validation():
    with pytest.raises(InvalidArgumentError):
        build_factor_table(0)
    with pytest.raises(InvalidArgumentError):
        build_factor_table(-3)
    with pytest.raises(InvalidArgumentError):
        build_factor_table(2.5)
    with pytest.raises(InvalidArgumentError):
        build_factor_table(True)


def test_is_prime():
    t = build_factor_table(50)
    assert t.is_prime(2) and t.is_prime(47)
    assert not t.is_prime(1) and not t.is_prime(49)
    with pytest.raises(InvalidArgumentError):
        t.is_prime(51)
    with pytest.raises(InvalidArgumentError):
        t.is_prime(0)


def test_multi_index_examples():
    t = build_factor_table(1000)
    assert to_multi_index(1, t).exponents == ()
    assert to_multi_index(2, t).exponents == ((2, 1),)
    assert to_multi_index(360, t).exponents == ((2, 3), (3, 2), (5, 1))
    assert from_multi_index(MultiIndex(((2, 3), (3, 2), (5, 1)))) == 360
    assert from_multi_index(MultiIndex(())) == 1


def test_multi_index_roundtrip_random():
    t = build_factor_table(10**6)
    rng = np.random.default_rng(77)
    for n in rng.integers(1, 10**6 + 1, size=500):
        n = int(n)
        mi = to_multi_index(n, t)
        assert from_multi_index(mi) == n
        assert mi.exponents == tuple(brute_factor(n))


def test_multi_index_validation():
    with pytest.raises(InvalidArgumentError):
        MultiIndex(((4, 1), (2, 1)))  # not ascending
    with pytest.raises(InvalidArgumentError):
        MultiIndex(((2, 0),))  # exponent < 1
    with pytest.raises(InvalidArgumentError):
        MultiIndex(((1, 2),))  # 1 is not a prime
    t = build_factor_table(10)
    with pytest.raises(InvalidArgumentError):
        to_multi_index(0, t)
    with pytest.raises(InvalidArgumentError):
        to_multi_index(11, t)


def test_extend_half_at_two():
    a = extend_multiplicatively({2: 0.5}, 8)
    want = [1, 0.5, 0, 0.25, 0, 0, 0, 0.125]
    assert np.allclose(a[1:], want)
    assert a[0] == 0


def test_extend_empty_mapping_gives_unit():
    a = extend_multiplicatively({}, 16)
    want = np.zeros(16)
    want[0] = 1  # a_1
    assert np.array_equal(a[1:], want.astype(np.complex128))


def test_extend_inverse_square_on_all_primes():
    n = 300
    t = build_factor_table(n)
    pv = {int(p): float(p) ** (-2.0) for p in t.primes}
    a = extend_multiplicatively(pv, n, t)
    ns = np.arange(1, n + 1, dtype=np.float64)
    assert np.allclose(a[1:], ns**-2.0, rtol=1e-12)


def test_extend_is_completely_multiplicative():
    n = 400
    t = build_factor_table(n)
    a = extend_multiplicatively({2: 0.4 + 0.1j, 3: -0.2j, 5: 0.9}, n, t)
    for m in range(1, 21):
        for k in range(1, n // m + 1):
            assert abs(a[m * k] - a[m] * a[k]) < 1e-12


def test_extend_validation():
    with pytest.raises(InvalidArgumentError):
        extend_multiplicatively({4: 0.5}, 10)  # composite key
    with pytest.raises(InvalidArgumentError):
        extend_multiplicatively({11: 0.5}, 10)  # prime exceeds truncation
    with pytest.raises(InvalidArgumentError):
        extend_multiplicatively({2: float("nan")}, 10)
    with pytest.raises(InvalidArgumentError):
        extend_multiplicatively({2: 0.5}, 0)
