"""Random multiplicative characters, vertical flows, and Monte Carlo
experiments on coefficient partial sums.

A character assigns an independent uniform angle to every prime and extends
to all integers by complete multiplicativity; sampling one is sampling from
the product (Haar) measure on the infinite torus.  Angles are produced by a
counter-based generator keyed on (seed, prime), so values are identical
regardless of query order or parallelism.  The vertical flow shifts every
prime angle by −t·log p, realizing χ(n) ↦ n^{−it}χ(n).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .numtheory import FactorTable
from .series import (
    DirichletPoly,
    _check_prime_key,
    evaluate_vertical,
    fit_growth_exponent,
)

__all__ = [
    "Character",
    "sample_character",
    "unit_character",
    "char_value",
    "twist",
    "kronecker_flow",
    "KolmogorovCheck",
    "GrowthExperimentReport",
    "growth_experiment",
    "prime_supported_experiment",
    "GridRect",
    "ZetaChiReport",
    "zeta_chi_explore",
    "GrowthBoundReport",
    "growth_bound_diagnostic",
]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SEED_SALT = 0x5851F42D4C957F2D
# angles use the top 53 bits so scalar and vector paths agree bitwise
_ANGLE_SCALE = 2.0 * math.pi / float(1 << 53)


def _mix64(x: int) -> int:
    """SplitMix64 finalizer: a bijective scrambling of 64-bit counters."""
    x &= _MASK
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK
    x ^= x >> 31
    return x


def _mix64_array(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


def derive_character_seed(master_seed: int, index: int) -> int:
    """Per-character seed stream for experiments: disjoint, deterministic."""
    base = ((int(master_seed) & _MASK) ^ _SEED_SALT) + (index + 1) * _GOLDEN
    return _mix64(base)


class Character:
    """Completely multiplicative unimodular character, lazily evaluated.

    ``seed`` keys the per-prime angles; ``t_shift`` applies the vertical
    flow (each prime angle shifted by −t_shift·log p); the unit character
    has every base angle 0.  Instances are immutable value objects.
    """

    __slots__ = ("seed", "t_shift", "is_unit", "_cache")

    def __init__(self, seed: int, t_shift: float = 0.0, is_unit: bool = False):
        if not isinstance(seed, (int, np.integer)) or isinstance(seed, bool):
            raise InvalidArgumentError(f"seed must be an integer, got {seed!r}")
        object.__setattr__(self, "seed", int(seed) & _MASK)
        object.__setattr__(self, "t_shift", float(t_shift))
        object.__setattr__(self, "is_unit", bool(is_unit))
        object.__setattr__(self, "_cache", {})

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("Character is immutable")

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return (
            self.seed == other.seed
            and self.t_shift == other.t_shift
            and self.is_unit == other.is_unit
        )

    def __hash__(self):
        return hash((self.seed, self.t_shift, self.is_unit))

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        flow = f", t_shift={self.t_shift}" if self.t_shift else ""
        if self.is_unit:
            return f"Character(unit{flow})"
        return f"Character(seed={self.seed}{flow})"

    def base_angle(self, p: int) -> float:
        """Angle of χ(p) in [0, 2π) before any flow shift."""
        p = _check_prime_key(p)
        cached = self._cache.get(p)
        if cached is None:
            if self.is_unit:
                cached = 0.0
            else:
                counter = (self.seed + p * _GOLDEN) & _MASK
                cached = float(_mix64(counter) >> 11) * _ANGLE_SCALE
            self._cache[p] = cached
        return cached

    def angle(self, p: int) -> float:
        """Effective angle of χ(p) in [0, 2π), flow shift included."""
        theta = self.base_angle(p)
        if self.t_shift:
            theta = (theta - self.t_shift * math.log(p)) % (2.0 * math.pi)
        return theta

    def value(self, p: int) -> complex:
        """χ(p) on the unit circle."""
        return complex(np.exp(1j * self.angle(p)))

    def prime_values(self, primes: np.ndarray) -> np.ndarray:
        """χ(p) for an array of primes (not validated), vectorized."""
        primes = np.asarray(primes, dtype=np.int64)
        if self.is_unit:
            theta = np.zeros(primes.shape[0], dtype=np.float64)
        else:
            counters = np.uint64(self.seed) + primes.astype(np.uint64) * np.uint64(
                _GOLDEN
            )
            theta = (_mix64_array(counters) >> np.uint64(11)).astype(
                np.float64
            ) * _ANGLE_SCALE
        if self.t_shift:
            theta = theta - self.t_shift * np.log(primes.astype(np.float64))
        return np.exp(1j * theta)

    def values_up_to(self, N: int, table: FactorTable) -> np.ndarray:
        """χ(n) for 1 ≤ n ≤ N as a complex array (index 0 unused, zero).

        Accumulates Σ ν_p(n)·angle(p) by sieve slicing over prime powers,
        then exponentiates — O(N log log N), fully deterministic.
        """
        N = int(N)
        if not 1 <= N <= table.limit:
            raise InvalidArgumentError(
                f"N={N} outside factor table range 1..{table.limit}"
            )
        primes = table.primes[table.primes <= N]
        if primes.size:
            if self.is_unit:
                theta = np.zeros(primes.shape[0], dtype=np.float64)
            else:
                counters = np.uint64(self.seed) + primes.astype(
                    np.uint64
                ) * np.uint64(_GOLDEN)
                theta = (_mix64_array(counters) >> np.uint64(11)).astype(
                    np.float64
                ) * _ANGLE_SCALE
            if self.t_shift:
                theta = theta - self.t_shift * np.log(primes.astype(np.float64))
        angles = np.zeros(N + 1, dtype=np.float64)
        for i in range(primes.shape[0]):
            p = int(primes[i])
            th = theta[i]
            q = p
            while q <= N:
                angles[q::q] += th
                q *= p
        out = np.exp(1j * angles)
        out[0] = 0.0
        return out


def sample_character(seed: int) -> Character:
    """Character with independent uniform prime angles keyed by ``seed``."""
    return Character(seed)


def unit_character() -> Character:
    """The character with χ(n) ≡ 1."""
    return Character(0, 0.0, is_unit=True)


def char_value(chi: Character, n: int, table: FactorTable) -> complex:
    """χ(n) = Π χ(p)^{ν_p} via the factor table (1 ≤ n ≤ table.limit)."""
    n = int(n)
    if not 1 <= n <= table.limit:
        raise InvalidArgumentError(
            f"n={n} outside factor table range 1..{table.limit}"
        )
    spf = table.smallest_prime_factor
    angle = 0.0
    m = n
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        theta = chi.base_angle(p)
        if chi.t_shift:
            theta -= chi.t_shift * math.log(p)
        angle += e * theta
    return complex(np.exp(1j * angle))


def twist(f: DirichletPoly, chi: Character, table: FactorTable) -> DirichletPoly:
    """Coefficientwise multiplication by χ: a_n ↦ a_n·χ(n).

    Since |χ(n)| = 1 the coefficient-space norm is preserved.
    """
    if f.truncation > table.limit:
        raise InvalidArgumentError(
            f"factor table covers 1..{table.limit} but the series has "
            f"truncation {f.truncation}"
        )
    vals = chi.values_up_to(f.truncation, table)
    return DirichletPoly._from_padded(f.coeffs * vals)


def kronecker_flow(chi: Character, t: float) -> Character:
    """The vertical flow: a character with values n^{−it}·χ(n).

    Flowing by t then u equals flowing by t+u (angles to 1e-12); t = 0 is
    the identity.
    """
    t = float(t)
    if not np.isfinite(t):
        raise InvalidArgumentError("flow parameter must be finite")
    return Character(chi.seed, chi.t_shift + t, is_unit=chi.is_unit)


@dataclass(frozen=True)
class KolmogorovCheck:
    """Empirical tail frequency of sup|S_N| against the variance bound.

    ``bound`` = min(1, Σ|a_p|²/threshold²); ``standard_error`` is the
    binomial deviation sqrt(bound·(1−bound)/num_characters) of an empirical
    frequency whose true value sits at the bound.
    """

    threshold: float
    empirical: float
    bound: float
    standard_error: float


@dataclass(frozen=True)
class GrowthExperimentReport:
    """Per-character partial-sum statistics for a Monte Carlo run.

    ``exponents`` holds the dyadic log-log growth fit per character (same
    scheme as the convergence-abscissa estimator), ``sups`` the maximum
    |S_N| over N ≤ N_max, ``sups_normalized`` the maximum of
    |S_N|/(√N·(1+log N)).  ``kolmogorov_checks`` is filled by the
    prime-supported experiment, ``sup_doubling`` (per character: sup at
    N_max/4, N_max/2, N_max) only on request.
    """

    num_characters: int
    N_max: int
    master_seed: int
    exponents: tuple[float, ...]
    sups: tuple[float, ...]
    sups_normalized: tuple[float, ...]
    kolmogorov_checks: tuple[KolmogorovCheck, ...] = ()
    sup_doubling: tuple[tuple[float, float, float], ...] = ()


_KOLMOGOROV_THRESHOLDS = (1.0, 2.0, 4.0, 8.0)


def _dyadic_ns(N: int) -> np.ndarray:
    return 2 ** np.arange(0, int(math.floor(math.log2(N))) + 1, dtype=np.int64)


def _sum_statistics(csum: np.ndarray, N: int):
    """(exponent, sup, normalized sup, sup-doubling triple) from the 1-based
    cumulative sums csum[1..N]."""
    mags = np.abs(csum[1:])
    ns = _dyadic_ns(N)
    fit = fit_growth_exponent(ns, mags[ns - 1])
    sup = float(np.max(mags)) if mags.size else 0.0
    weights = np.sqrt(np.arange(1, N + 1, dtype=np.float64))
    weights *= 1.0 + np.log(np.arange(1, N + 1, dtype=np.float64))
    sup_norm = float(np.max(mags / weights)) if mags.size else 0.0
    quarter = float(np.max(mags[: max(1, N // 4)]))
    half = float(np.max(mags[: max(1, N // 2)]))
    return fit.estimate, sup, sup_norm, (quarter, half, sup)


def _run_characters(worker, num_chars: int, threads: int):
    if threads <= 1:
        return [worker(i) for i in range(num_chars)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(num_chars)))


def _validate_experiment_args(num_chars: int, N_max: int, table: FactorTable):
    if num_chars < 1:
        raise InvalidArgumentError("need at least one character")
    if N_max < 128:
        raise InvalidArgumentError(
            "N_max must be >= 128 so the dyadic growth fit has 8 points"
        )
    if N_max > table.limit:
        raise InvalidArgumentError(
            f"N_max={N_max} exceeds the factor table limit {table.limit}"
        )


def growth_experiment(
    f: DirichletPoly,
    num_chars: int,
    N_max: int,
    table: FactorTable,
    *,
    master_seed: int = 0,
    threads: int = 1,
    record_sup_doubling: bool = False,
) -> GrowthExperimentReport:
    """Partial-sum growth of a_n·χ(n) over randomly sampled characters.

    For each character (seed derived deterministically from the master
    seed and its index) the dyadic partial sums of the twisted coefficients
    are fitted for a growth exponent; sup statistics are recorded.  Results
    are bit-identical for a fixed master seed at any thread count.
    """
    _validate_experiment_args(num_chars, N_max, table)
    if f.truncation < N_max:
        raise InvalidArgumentError(
            f"series truncation {f.truncation} is below N_max={N_max}"
        )
    coeffs = f.coeffs[: N_max + 1]

    def worker(i: int):
        chi = Character(derive_character_seed(master_seed, i))
        vals = chi.values_up_to(N_max, table)
        csum = np.concatenate(([0.0 + 0.0j], np.cumsum(coeffs[1:] * vals[1:])))
        return _sum_statistics(csum, N_max)

    rows = _run_characters(worker, num_chars, threads)
    return GrowthExperimentReport(
        num_characters=num_chars,
        N_max=N_max,
        master_seed=int(master_seed),
        exponents=tuple(r[0] for r in rows),
        sups=tuple(r[1] for r in rows),
        sups_normalized=tuple(r[2] for r in rows),
        kolmogorov_checks=(),
        sup_doubling=tuple(r[3] for r in rows) if record_sup_doubling else (),
    )


def prime_supported_experiment(
    prime_coeffs,
    num_chars: int,
    N_max: int,
    table: FactorTable,
    *,
    master_seed: int = 0,
    threads: int = 1,
) -> GrowthExperimentReport:
    """Sup of prime-supported partial sums vs the variance tail bound.

    Coefficients must live on primes only (composite or out-of-range keys
    are rejected).  Each character needs χ only at the support primes, so
    runs stay cheap even for large N_max.  The report's Kolmogorov checks
    compare the empirical frequency of sup ≥ M against min(1, Σ|a_p|²/M²)
    for M ∈ {1, 2, 4, 8}.
    """
    _validate_experiment_args(num_chars, N_max, table)
    items = []
    for p, v in dict(prime_coeffs).items():
        p = int(p)
        if not 2 <= p <= N_max or not table.is_prime(p):
            raise InvalidArgumentError(
                f"coefficient key {p} is not a prime <= N_max={N_max}"
            )
        v = complex(v)
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise InvalidArgumentError(f"coefficient at prime {p} is not finite")
        items.append((p, v))
    items.sort()
    primes = np.array([p for p, _ in items], dtype=np.int64)
    coeffs = np.array([v for _, v in items], dtype=np.complex128)
    variance = float(np.sum(coeffs.real**2 + coeffs.imag**2))
    ns = _dyadic_ns(N_max)

    def worker(i: int):
        chi = Character(derive_character_seed(master_seed, i))
        if primes.size:
            csum = np.cumsum(coeffs * chi.prime_values(primes))
            mags = np.abs(csum)
            sup = float(np.max(mags))
            # partial sums change only at primes; map them onto dyadic N
            idx = np.searchsorted(primes, ns, side="right") - 1
            dyadic = np.where(idx >= 0, mags[np.maximum(idx, 0)], 0.0)
            weights = np.sqrt(primes.astype(np.float64)) * (
                1.0 + np.log(primes.astype(np.float64))
            )
            sup_norm = float(np.max(mags / weights))
        else:
            sup = 0.0
            sup_norm = 0.0
            dyadic = np.zeros(ns.shape[0], dtype=np.float64)
        fit = fit_growth_exponent(ns, dyadic)
        return fit.estimate, sup, sup_norm

    rows = _run_characters(worker, num_chars, threads)
    sups = np.array([r[1] for r in rows], dtype=np.float64)
    checks = []
    for M in _KOLMOGOROV_THRESHOLDS:
        bound = min(1.0, variance / (M * M))
        se = math.sqrt(max(bound * (1.0 - bound), 0.0) / num_chars)
        checks.append(
            KolmogorovCheck(
                threshold=M,
                empirical=float(np.mean(sups >= M)),
                bound=bound,
                standard_error=se,
            )
        )
    return GrowthExperimentReport(
        num_characters=num_chars,
        N_max=N_max,
        master_seed=int(master_seed),
        exponents=tuple(r[0] for r in rows),
        sups=tuple(float(s) for s in sups),
        sups_normalized=tuple(r[2] for r in rows),
        kolmogorov_checks=tuple(checks),
    )


@dataclass(frozen=True)
class GridRect:
    """Rectangular evaluation grid: σ ∈ [sigma_lo, sigma_hi] × t ∈ [t_lo,
    t_hi], sampled uniformly with the given counts."""

    sigma_lo: float
    sigma_hi: float
    num_sigma: int
    t_lo: float
    t_hi: float
    num_t: int

    def __post_init__(self):
        if not (
            np.isfinite(self.sigma_lo)
            and np.isfinite(self.sigma_hi)
            and np.isfinite(self.t_lo)
            and np.isfinite(self.t_hi)
        ):
            raise InvalidArgumentError("grid bounds must be finite")
        if self.sigma_lo > self.sigma_hi or self.t_lo > self.t_hi:
            raise InvalidArgumentError("grid bounds must be ordered lo <= hi")
        if self.num_sigma < 1 or self.num_t < 1:
            raise InvalidArgumentError("grid needs at least one point per axis")

    def sigmas(self) -> np.ndarray:
        if self.num_sigma == 1:
            return np.array([self.sigma_lo], dtype=np.float64)
        return np.linspace(self.sigma_lo, self.sigma_hi, self.num_sigma)

    def ts(self) -> np.ndarray:
        if self.num_t == 1:
            return np.array([self.t_lo], dtype=np.float64)
        return np.linspace(self.t_lo, self.t_hi, self.num_t)


@dataclass(frozen=True)
class ZetaChiReport:
    """Exploratory zero-scan of a twisted zeta; never a certificate.

    ``min_modulus`` is the smallest |partial Euler product| over the grid
    at the largest cutoff; ``trace`` holds (cutoff, max successive change)
    stabilization diagnostics; ``reciprocal_residual`` is the worst
    |product·(inverted partial sum) − 1| over the grid.
    """

    min_modulus: float
    trace: tuple[tuple[int, float], ...]
    reciprocal_residual: float
    flags: tuple[str, ...] = ("exploratory", "no-zero-free-certificate")


def zeta_chi_explore(
    chi: Character,
    sigma_min: float,
    grid: GridRect,
    P_max: int,
    table: FactorTable,
) -> ZetaChiReport:
    """Partial Euler products Π_{p≤P}(1−χ(p)p^{−s})^{−1} over a grid.

    The grid must sit in Re s ≥ sigma_min > 1/2.  Products are snapshotted
    at increasing prime cutoffs for stabilization diagnostics, and checked
    against the independently computed Möbius-inverted partial sums of the
    reciprocal.  Exploratory only.
    """
    sigma_min = float(sigma_min)
    if sigma_min <= 0.5:
        raise InvalidArgumentError(
            f"sigma_min must exceed 1/2, got {sigma_min}"
        )
    if grid.sigma_lo < sigma_min:
        raise InvalidArgumentError(
            f"grid reaches Re s = {grid.sigma_lo} < sigma_min = {sigma_min}"
        )
    P_max = int(P_max)
    if P_max < 0:
        raise InvalidArgumentError("P_max must be >= 0")
    if P_max > table.limit:
        raise InvalidArgumentError(
            f"P_max={P_max} exceeds the factor table limit {table.limit}"
        )
    sig = grid.sigmas()
    ts = grid.ts()
    s = (sig[:, None] + 1j * ts[None, :]).ravel()

    primes = table.primes[table.primes <= P_max]
    cutoffs = sorted(
        {c for c in (P_max // 8, P_max // 4, P_max // 2, P_max) if c >= 2}
    )
    prod = np.ones(s.shape[0], dtype=np.complex128)
    snapshot = prod.copy()
    trace: list[tuple[int, float]] = []
    start = 0
    for cutoff in cutoffs:
        stop = int(np.searchsorted(primes, cutoff, side="right"))
        if stop > start:
            block = primes[start:stop]
            vals = chi.prime_values(block)
            w = np.exp(-np.outer(s, np.log(block.astype(np.float64))))
            prod = prod * np.prod(1.0 / (1.0 - vals[None, :] * w), axis=1)
            start = stop
        trace.append((cutoff, float(np.max(np.abs(prod - snapshot)))))
        snapshot = prod.copy()
    min_modulus = float(np.min(np.abs(prod)))

    # independent reciprocal: partial sums of mu(n) chi(n) n^{-s}
    n_inv = min(table.limit, max(P_max, 1000))
    vals = chi.values_up_to(n_inv, table)
    mu = table.mobius[: n_inv + 1].astype(np.float64)
    recip = DirichletPoly._from_padded(vals[: n_inv + 1] * mu)
    residual = 0.0
    for i, sigma in enumerate(sig):
        row = evaluate_vertical(recip, float(sigma), ts)
        prow = prod[i * ts.shape[0] : (i + 1) * ts.shape[0]]
        residual = max(residual, float(np.max(np.abs(prow * row - 1.0))))
    return ZetaChiReport(
        min_modulus=min_modulus,
        trace=tuple(trace),
        reciprocal_residual=residual,
    )


@dataclass(frozen=True)
class GrowthBoundReport:
    """Empirical normalized-growth constant over a grid (heuristic).

    ``max_ratio`` = max over the grid of |f_χ(s) − a₁|·σ^{1/2}/(1+|t|^{1/2});
    ``stabilization`` is the largest change in f_χ(s) when the smoothing
    scale doubles (0 where raw truncation was used).
    """

    max_ratio: float
    argmax_s: complex
    stabilization: float
    flags: tuple[str, ...]


def growth_bound_diagnostic(
    f: DirichletPoly,
    chi: Character,
    grid: GridRect,
    table: FactorTable,
) -> GrowthBoundReport:
    """Empirical constant in the normalized-growth bound for f_χ.

    The tail Σ_{n≥2} a_nχ(n)n^{−s} is evaluated with Abel smoothing
    e^{−n/M} at two scales (stability reported) for σ > 1/2, and by raw
    truncation below (flagged).  Heuristic by construction: no finite-
    truncation error bound is claimed.
    """
    if grid.sigma_lo <= 0.0:
        raise InvalidArgumentError("grid must lie in Re s > 0")
    if f.truncation > table.limit:
        raise InvalidArgumentError(
            f"factor table covers 1..{table.limit} but the series has "
            f"truncation {f.truncation}"
        )
    N = f.truncation
    vals = chi.values_up_to(N, table)
    tail = f.coeffs * vals
    tail[1] = 0.0  # the bound concerns f_chi - a_1
    ns = np.arange(0, N + 1, dtype=np.float64)
    smooth_half = tail * np.exp(-ns / max(2.0, N / 2.0))
    smooth_full = tail * np.exp(-ns / float(max(4, N)))
    poly_raw = DirichletPoly._from_padded(tail)
    poly_half = DirichletPoly._from_padded(smooth_half)
    poly_full = DirichletPoly._from_padded(smooth_full)

    ts = grid.ts()
    norm = 1.0 + np.sqrt(np.abs(ts))
    max_ratio = -1.0
    argmax_s = complex(grid.sigma_lo, grid.t_lo)
    stabilization = 0.0
    flags = ["heuristic", "abel-smoothed"]
    below = False
    for sigma in grid.sigmas():
        sigma = float(sigma)
        if sigma > 0.5:
            row = evaluate_vertical(poly_full, sigma, ts)
            row_half = evaluate_vertical(poly_half, sigma, ts)
            stabilization = max(
                stabilization, float(np.max(np.abs(row - row_half)))
            )
        else:
            row = evaluate_vertical(poly_raw, sigma, ts)
            below = True
        ratios = np.abs(row) * math.sqrt(sigma) / norm
        i = int(np.argmax(ratios))
        if float(ratios[i]) > max_ratio:
            max_ratio = float(ratios[i])
            argmax_s = complex(sigma, float(ts[i]))
    if below:
        flags.append("raw-truncation-below-half")
    return GrowthBoundReport(
        max_ratio=max_ratio,
        argmax_s=argmax_s,
        stabilization=stabilization,
        flags=tuple(flags),
    )
