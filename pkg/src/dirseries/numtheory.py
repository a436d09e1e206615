"""Sieves and factorization primitives consumed by every other module.

Conventions used across the package:

* coefficient and value arrays are 1-based — index 0 exists but is unused
  and kept at zero;
* a :class:`FactorTable` is immutable after construction and safe to share
  across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import InvalidArgumentError
from .kernels import linear_sieve, mult_extend


@dataclass(frozen=True)
class FactorTable:
    """Precomputed multiplicative-function tables for 1..limit.

    Fields
    ------
    limit:
        Largest integer covered.
    smallest_prime_factor:
        ``smallest_prime_factor[n]`` is the least prime dividing n
        (``smallest_prime_factor[1] == 1``).
    mobius:
        The Möbius function: 0 on numbers with a squared prime factor,
        otherwise (−1)^(number of prime factors).
    divisor_count:
        Number of divisors of n.
    big_omega:
        Number of prime factors counted with multiplicity (extension beyond
        the core field set; cheap in the same sieve pass and used by the
        polydisk lift).
    primes:
        Ascending array of the primes ≤ limit.

    All arrays have length ``limit + 1`` with index 0 unused.
    """

    limit: int
    smallest_prime_factor: np.ndarray
    mobius: np.ndarray
    divisor_count: np.ndarray
    big_omega: np.ndarray
    primes: np.ndarray
    _prime_set: frozenset = field(repr=False, default_factory=frozenset)

    def is_prime(self, n: int) -> bool:
        """True when n is a prime ≤ limit."""
        if not 1 <= n <= self.limit:
            raise InvalidArgumentError(
                f"n={n} outside factor table range 1..{self.limit}"
            )
        return n in self._prime_set


def build_factor_table(N: int) -> FactorTable:
    """Sieve all factorization tables up to N (N ≥ 1).

    Time O(N log log N), memory O(N).
    """
    if not isinstance(N, (int, np.integer)) or isinstance(N, bool):
        raise InvalidArgumentError(f"sieve limit must be an integer, got {N!r}")
    if N < 1:
        raise InvalidArgumentError(f"sieve limit must be >= 1, got {N}")
    spf, mobius, divisor_count, big_omega, primes = linear_sieve(int(N))
    for arr in (spf, mobius, divisor_count, big_omega, primes):
        arr.setflags(write=False)
    return FactorTable(
        limit=int(N),
        smallest_prime_factor=spf,
        mobius=mobius,
        divisor_count=divisor_count,
        big_omega=big_omega,
        primes=primes,
        _prime_set=frozenset(int(p) for p in primes),
    )


@dataclass(frozen=True)
class MultiIndex:
    """The prime-exponent signature of a positive integer.

    ``exponents`` is a tuple of (prime, exponent ≥ 1) pairs sorted by prime;
    the empty tuple corresponds to n = 1.  The map n ↔ MultiIndex is a
    bijection by unique factorization.
    """

    exponents: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last = 1
        for p, e in self.exponents:
            if p <= last:
                raise InvalidArgumentError(
                    "multi-index primes must be ascending and > 1"
                )
            if e < 1:
                raise InvalidArgumentError("multi-index exponents must be >= 1")
            last = p


def to_multi_index(n: int, table: FactorTable) -> MultiIndex:
    """Factor n into its multi-index using the table (1 ≤ n ≤ table.limit)."""
    n = int(n)
    if not 1 <= n <= table.limit:
        raise InvalidArgumentError(
            f"n={n} outside factor table range 1..{table.limit}"
        )
    spf = table.smallest_prime_factor
    pairs: list[tuple[int, int]] = []
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        pairs.append((p, e))
    return MultiIndex(exponents=tuple(pairs))


def from_multi_index(mi: MultiIndex) -> int:
    """Inverse of :func:`to_multi_index`; exact integer arithmetic."""
    n = 1
    for p, e in mi.exponents:
        n *= p**e
    return n


def extend_multiplicatively(
    prime_values: Mapping[int, complex],
    N: int,
    table: FactorTable | None = None,
) -> np.ndarray:
    """Totally multiplicative coefficients from values on primes.

    Returns a complex array ``a`` of length N+1 (index 0 unused) with
    ``a[1] = 1``, ``a[p**k] = prime_values[p]**k`` and ``a[m*n] = a[m]*a[n]``
    for all m, n.  Primes absent from the mapping get the value 0, so all of
    their multiples vanish.

    Every key must be a prime ≤ N; a table covering N is built when not
    supplied.
    """
    if N < 1:
        raise InvalidArgumentError(f"truncation must be >= 1, got {N}")
    N = int(N)
    if table is None or table.limit < N:
        table = build_factor_table(N)
    pv = np.zeros(N + 1, dtype=np.complex128)
    for p, v in prime_values.items():
        p = int(p)
        if not 2 <= p <= N or not table.is_prime(p):
            raise InvalidArgumentError(
                f"prime_values key {p} is not a prime <= {N}"
            )
        v = complex(v)
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise InvalidArgumentError(f"value for prime {p} is not finite")
        pv[p] = v
    return mult_extend(table.smallest_prime_factor, pv, N)
