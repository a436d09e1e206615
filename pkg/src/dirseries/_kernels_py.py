"""Pure-numpy fallback for the compiled kernels.

The compiled extension and this module implement the same contracts and are
bit-for-bit interchangeable on finite inputs.  Integer tables are computed
exactly, and the complex-coefficient routines follow two rules that pin down
every rounding decision:

* complex products are expanded into the four-multiply formula
  ``(xr*yr - xi*yi, xr*yi + xi*yr)`` using elementary float64 operations
  only, so no fused-multiply-add or alternative product algorithm is used
  on either side;
* every output slot receives its additive contributions in the same order
  (outer divisor ascending) in both backends, one rounded add per
  contribution.

All coefficient arrays follow the package convention that index 0 is
unused and kept at zero.
"""

from __future__ import annotations

import math

import numpy as np


def linear_sieve(n: int):
    """Factorization tables for 1..n.

    Returns ``(spf, mobius, divisor_count, big_omega, primes)`` where
    ``spf`` is the smallest prime factor (``spf[1] == 1``), ``mobius`` and
    ``divisor_count`` are the classical multiplicative functions, and
    ``big_omega`` counts prime factors with multiplicity.
    """
    if n < 1:
        raise ValueError("sieve limit must be >= 1")
    spf = np.zeros(n + 1, dtype=np.int64)
    spf[1] = 1
    root = math.isqrt(n)
    for p in range(2, root + 1):
        if spf[p] == 0:
            spf[p] = p
            block = spf[p * p :: p]
            block[block == 0] = p
    rest = np.flatnonzero(spf[2:] == 0) + 2
    spf[rest] = rest
    primes = (np.flatnonzero(spf[2:] == np.arange(2, n + 1)) + 2).astype(np.int64)

    mobius = np.ones(n + 1, dtype=np.int8)
    mobius[0] = 0
    for p in primes:
        mobius[p::p] *= -1
        sq = int(p) * int(p)
        if sq <= n:
            mobius[sq::sq] = 0

    # d(m) by counting divisor pairs (k, m//k) with k <= sqrt(m).
    divisor_count = np.zeros(n + 1, dtype=np.int64)
    for k in range(1, root + 1):
        divisor_count[k * k :: k] += 2
        divisor_count[k * k] -= 1

    big_omega = _omega_from_spf(spf, n)

    return spf, mobius, divisor_count, big_omega, primes


def _omega_from_spf(spf: np.ndarray, n: int) -> np.ndarray:
    big_omega = np.zeros(n + 1, dtype=np.int8)
    if n < 2:
        return big_omega
    primes = np.flatnonzero(spf[2 : n + 1] == np.arange(2, n + 1)) + 2
    for p in primes:
        pk = int(p)
        while pk <= n:
            big_omega[pk::pk] += 1
            pk *= int(p)
    return big_omega


def mult_extend(spf, prime_vals, n: int) -> np.ndarray:
    """Totally multiplicative extension of values given on primes.

    ``prime_vals`` is a complex array of length >= n+1 read only at prime
    slots; ``out[1] = 1`` and ``out[m] = out[m // spf[m]] * prime_vals[spf[m]]``.
    Primes whose value was left at zero annihilate all their multiples.
    """
    if n < 1:
        raise ValueError("length must be >= 1")
    spf = np.ascontiguousarray(spf, dtype=np.int64)
    pv = np.ascontiguousarray(prime_vals, dtype=np.complex128)
    if spf.shape[0] < n + 1 or pv.shape[0] < n + 1:
        raise ValueError("input tables must cover indices 0..n")
    out = np.zeros(n + 1, dtype=np.complex128)
    out[1] = 1.0
    if n < 2:
        return out
    outr = out.real
    outi = out.imag
    pvr = pv.real
    pvi = pv.imag
    big_omega = _omega_from_spf(spf, n)
    # Resolve by number of prime factors so every gather reads finished
    # values; the products use the same operands and the same expanded
    # formula as the sequential recurrence in the compiled backend.
    for r in range(1, int(big_omega.max()) + 1):
        idx = np.flatnonzero(big_omega == r)
        if idx.size == 0:
            continue
        p = spf[idx]
        q = idx // p
        xr = outr[q]
        xi = outi[q]
        yr = pvr[p]
        yi = pvi[p]
        outr[idx] = xr * yr - xi * yi
        outi[idx] = xr * yi + xi * yr
    return out


def convolve(a, b, n: int) -> np.ndarray:
    """Dirichlet convolution ``c[m] = sum_{d | m} a[d] * b[m // d]`` for m <= n."""
    if n < 1:
        raise ValueError("length must be >= 1")
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    if a.shape[0] < n + 1 or b.shape[0] < n + 1:
        raise ValueError("input arrays must cover indices 0..n")
    c = np.zeros(n + 1, dtype=np.complex128)
    cr = c.real
    ci = c.imag
    ar = a.real
    ai = a.imag
    br = b.real
    bi = b.imag
    for d in range(1, n + 1):
        adr = ar[d]
        adi = ai[d]
        if adr == 0.0 and adi == 0.0:
            continue
        hi = n // d + 1
        vr = br[1:hi]
        vi = bi[1:hi]
        cr[d::d] += adr * vr - adi * vi
        ci[d::d] += adr * vi + adi * vr
    return c


def reciprocal(a, inv_lead, n: int) -> np.ndarray:
    """Convolution inverse of ``a`` (``a[1] != 0``), with ``inv_lead == 1 / a[1]``.

    Forward propagation: once the loop reaches slot d every proper-divisor
    contribution to ``acc[d]`` is already in place, because all proper
    divisors of d are at most d // 2.
    """
    if n < 1:
        raise ValueError("length must be >= 1")
    a = np.ascontiguousarray(a, dtype=np.complex128)
    if a.shape[0] < n + 1:
        raise ValueError("input array must cover indices 0..n")
    inv = complex(inv_lead)
    b = np.zeros(n + 1, dtype=np.complex128)
    acc = np.zeros(n + 1, dtype=np.complex128)
    br_ = b.real
    bi_ = b.imag
    accr = acc.real
    acci = acc.imag
    ar = a.real
    ai = a.imag
    br_[1] = inv.real
    bi_[1] = inv.imag
    nr = -inv.real
    ni = -inv.imag
    half = n // 2
    for d in range(1, half + 1):
        if d > 1:
            xr = accr[d]
            xi = acci[d]
            bdr = xr * nr - xi * ni
            bdi = xr * ni + xi * nr
            br_[d] = bdr
            bi_[d] = bdi
        else:
            bdr = inv.real
            bdi = inv.imag
        if bdr == 0.0 and bdi == 0.0:
            continue
        hi = n // d + 1
        vr = ar[2:hi]
        vi = ai[2:hi]
        accr[2 * d :: d] += bdr * vr - bdi * vi
        acci[2 * d :: d] += bdr * vi + bdi * vr
    # Slots past n // 2 receive no further contributions; finish them in one
    # vectorized pass with the identical product formula.
    k = max(2, half + 1)
    xr = accr[k:]
    xi = acci[k:]
    br_[k:] = xr * nr - xi * ni
    bi_[k:] = xr * ni + xi * nr
    return b
