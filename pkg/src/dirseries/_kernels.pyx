# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: factorization sieve and coefficient-array recurrences.

Bit-for-bit interchangeable with the pure-numpy fallback (``_kernels_py``):
complex products use the expanded four-multiply formula on float64
components, compiled with fused-multiply-add contraction disabled, and
additive contributions land in each output slot in the same order in both
backends.  Index 0 of every coefficient array is unused and kept at zero.
"""

from libc.stdint cimport int64_t, int8_t
from libc.math cimport log

import numpy as np


def linear_sieve(Py_ssize_t n):
    """Factorization tables for 1..n.

    Returns ``(spf, mobius, divisor_count, big_omega, primes)`` where
    ``spf`` is the smallest prime factor (``spf[1] == 1``), ``mobius`` and
    ``divisor_count`` are the classical multiplicative functions, and
    ``big_omega`` counts prime factors with multiplicity.
    """
    if n < 1:
        raise ValueError("sieve limit must be >= 1")
    spf_arr = np.zeros(n + 1, dtype=np.int64)
    mob_arr = np.zeros(n + 1, dtype=np.int8)
    dc_arr = np.zeros(n + 1, dtype=np.int64)
    om_arr = np.zeros(n + 1, dtype=np.int8)
    exp_arr = np.zeros(n + 1, dtype=np.int8)
    cdef Py_ssize_t cap
    if n < 11:
        cap = 8
    else:
        # Comfortably above pi(n) < 1.26 n / ln n for n >= 11.
        cap = <Py_ssize_t>(1.26 * n / log(<double>n)) + 8
    primes_arr = np.zeros(cap, dtype=np.int64)
    cdef int64_t[::1] spf = spf_arr
    cdef int8_t[::1] mob = mob_arr
    cdef int64_t[::1] dc = dc_arr
    cdef int8_t[::1] om = om_arr
    cdef int8_t[::1] ex = exp_arr
    cdef int64_t[::1] primes = primes_arr
    cdef Py_ssize_t i, j, ip, count = 0
    cdef int64_t p
    spf[1] = 1
    mob[1] = 1
    dc[1] = 1
    with nogil:
        for i in range(2, n + 1):
            if spf[i] == 0:
                spf[i] = i
                mob[i] = -1
                om[i] = 1
                ex[i] = 1
                dc[i] = 2
                primes[count] = i
                count += 1
            for j in range(count):
                p = primes[j]
                if p > n // i:
                    break
                ip = i * p
                if p < spf[i]:
                    spf[ip] = p
                    mob[ip] = -mob[i]
                    om[ip] = om[i] + 1
                    ex[ip] = 1
                    dc[ip] = 2 * dc[i]
                else:
                    # p == spf[i]: exponent of p grows by one.
                    spf[ip] = p
                    mob[ip] = 0
                    om[ip] = om[i] + 1
                    ex[ip] = ex[i] + 1
                    dc[ip] = (dc[i] // (ex[i] + 1)) * (ex[i] + 2)
                    break
    return spf_arr, mob_arr, dc_arr, om_arr, primes_arr[:count].copy()


def mult_extend(spf, prime_vals, Py_ssize_t n):
    """Totally multiplicative extension of values given on primes.

    ``prime_vals`` is a complex array of length >= n+1 read only at prime
    slots; ``out[1] = 1`` and ``out[m] = out[m // spf[m]] * prime_vals[spf[m]]``.
    Primes whose value was left at zero annihilate all their multiples.
    """
    if n < 1:
        raise ValueError("length must be >= 1")
    spf_arr = np.ascontiguousarray(spf, dtype=np.int64)
    pv_arr = np.ascontiguousarray(prime_vals, dtype=np.complex128)
    if spf_arr.shape[0] < n + 1 or pv_arr.shape[0] < n + 1:
        raise ValueError("input tables must cover indices 0..n")
    out_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef const int64_t[::1] s = spf_arr
    cdef const double[::1] pv = pv_arr.view(np.float64)
    cdef double[::1] ov = out_arr.view(np.float64)
    cdef Py_ssize_t m, p, q
    cdef double xr, xi, yr, yi
    ov[2] = 1.0
    with nogil:
        for m in range(2, n + 1):
            p = s[m]
            q = m // p
            xr = ov[2 * q]
            xi = ov[2 * q + 1]
            yr = pv[2 * p]
            yi = pv[2 * p + 1]
            ov[2 * m] = xr * yr - xi * yi
            ov[2 * m + 1] = xr * yi + xi * yr
    return out_arr


def convolve(a, b, Py_ssize_t n):
    """Dirichlet convolution ``c[m] = sum_{d | m} a[d] * b[m // d]`` for m <= n."""
    if n < 1:
        raise ValueError("length must be >= 1")
    a_arr = np.ascontiguousarray(a, dtype=np.complex128)
    b_arr = np.ascontiguousarray(b, dtype=np.complex128)
    if a_arr.shape[0] < n + 1 or b_arr.shape[0] < n + 1:
        raise ValueError("input arrays must cover indices 0..n")
    out_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef const double[::1] av = a_arr.view(np.float64)
    cdef const double[::1] bv = b_arr.view(np.float64)
    cdef double[::1] cv = out_arr.view(np.float64)
    cdef Py_ssize_t d, m, md, k
    cdef double adr, adi, br, bi
    with nogil:
        for d in range(1, n + 1):
            adr = av[2 * d]
            adi = av[2 * d + 1]
            if adr == 0.0 and adi == 0.0:
                continue
            md = n // d
            for m in range(1, md + 1):
                br = bv[2 * m]
                bi = bv[2 * m + 1]
                k = d * m
                cv[2 * k] = cv[2 * k] + (adr * br - adi * bi)
                cv[2 * k + 1] = cv[2 * k + 1] + (adr * bi + adi * br)
    return out_arr


def reciprocal(a, inv_lead, Py_ssize_t n):
    """Convolution inverse of ``a`` (``a[1] != 0``), with ``inv_lead == 1 / a[1]``.

    Forward propagation: once the loop reaches slot d every proper-divisor
    contribution to the running inner-sum array is already in place, because
    all proper divisors of d are at most d // 2.
    """
    if n < 1:
        raise ValueError("length must be >= 1")
    a_arr = np.ascontiguousarray(a, dtype=np.complex128)
    if a_arr.shape[0] < n + 1:
        raise ValueError("input array must cover indices 0..n")
    cdef double complex inv = inv_lead
    cdef double invr = inv.real
    cdef double invi = inv.imag
    cdef double nr = -invr
    cdef double ni = -invi
    b_arr = np.zeros(n + 1, dtype=np.complex128)
    acc_arr = np.zeros(n + 1, dtype=np.complex128)
    cdef const double[::1] av = a_arr.view(np.float64)
    cdef double[::1] bv = b_arr.view(np.float64)
    cdef double[::1] accv = acc_arr.view(np.float64)
    cdef Py_ssize_t d, m, md, k
    cdef double bdr, bdi, xr, xi, vr, vi
    bv[2] = invr
    bv[3] = invi
    with nogil:
        for d in range(1, n + 1):
            if d > 1:
                xr = accv[2 * d]
                xi = accv[2 * d + 1]
                bdr = xr * nr - xi * ni
                bdi = xr * ni + xi * nr
                bv[2 * d] = bdr
                bv[2 * d + 1] = bdi
            else:
                bdr = invr
                bdi = invi
            if bdr == 0.0 and bdi == 0.0:
                continue
            md = n // d
            for m in range(2, md + 1):
                vr = av[2 * m]
                vi = av[2 * m + 1]
                k = d * m
                accv[2 * k] = accv[2 * k] + (bdr * vr - bdi * vi)
                accv[2 * k + 1] = accv[2 * k + 1] + (bdr * vi + bdi * vr)
    return b_arr
