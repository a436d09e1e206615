"""Correspondence between Dirichlet polynomials and polynomials in one
variable per prime, with evaluation on the infinite polydisk.

Writing n = Π p^{ν_p}, a Dirichlet monomial n^{−s} becomes the monomial
Π z_p^{ν_p} after the substitution z_p = p^{−s}.  On truncations this is a
ring isomorphism, and the sup of |f| over vertical lines equals the sup of
the lifted polynomial over the unit polytorus, where it can be searched by
a grid plus local refinement.  Special coefficient classes (linear in the
primes, or Euler products) have exact closed-form sup norms.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np
from scipy.optimize import minimize

from .errors import InvalidArgumentError, ResourceCapError
from .numtheory import FactorTable, MultiIndex, from_multi_index, to_multi_index
from .series import DirichletPoly, _check_prime_key

__all__ = [
    "MultiIndexPoly",
    "QuasiCharacterPoint",
    "lift",
    "unlift",
    "multiply",
    "eval_quasi",
    "point_eval_bound",
    "SupNormEstimate",
    "sup_norm_polytorus",
    "sup_norm_search",
    "prime_linear_sup_norm",
    "MultiplierNorms",
    "euler_multiplier_norm",
]

_GRID_POINT_CAP = 1 << 30  # total grid points (inclusive)
_BLOCK_ELEMENTS = 1 << 22  # grid values materialized per block
_INNER_CACHE_ELEMENTS = 1 << 24  # terms x inner-block element budget
_MAX_GRID_DIM = 8
_MIN_RESOLUTION = 64


class MultiIndexPoly:
    """Sparse polynomial in the variables z_p, one per prime.

    ``terms`` maps :class:`MultiIndex` to a nonzero complex coefficient
    (exact zeros are dropped); ``prime_support`` is the ascending tuple of
    primes occurring in some retained index.  Terms iterate in order of the
    integer each index factors, so evaluation order is deterministic.
    """

    __slots__ = ("_items", "_ns", "_support", "_matrix_cache")

    def __init__(self, terms: Mapping[MultiIndex, complex]):
        self._matrix_cache = None
        acc: dict[MultiIndex, complex] = {}
        for mi, c in terms.items():
            if not isinstance(mi, MultiIndex):
                mi = MultiIndex(tuple(tuple(pair) for pair in mi))
            c = complex(c)
            if not (np.isfinite(c.real) and np.isfinite(c.imag)):
                raise InvalidArgumentError("term coefficients must be finite")
            acc[mi] = acc.get(mi, 0.0 + 0.0j) + c
        items = [(from_multi_index(mi), mi, c) for mi, c in acc.items() if c != 0]
        items.sort(key=lambda t: t[0])
        self._ns = tuple(n for n, _, _ in items)
        self._items = tuple((mi, c) for _, mi, c in items)
        support: set[int] = set()
        for mi, _ in self._items:
            support.update(p for p, _ in mi.exponents)
        self._support = tuple(sorted(support))

    @property
    def terms(self) -> Mapping[MultiIndex, complex]:
        return MappingProxyType(dict(self._items))

    @property
    def prime_support(self) -> tuple[int, ...]:
        return self._support

    def sorted_items(self) -> tuple[tuple[MultiIndex, complex], ...]:
        """(index, coefficient) pairs ordered by the integer the index
        factors."""
        return self._items

    def indices_as_integers(self) -> tuple[int, ...]:
        return self._ns

    def coefficient(self, mi: MultiIndex) -> complex:
        for other, c in self._items:
            if other == mi:
                return c
        return 0.0 + 0.0j

    def _matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """(exponent matrix over prime_support, coefficient vector), cached."""
        if self._matrix_cache is None:
            pos = {p: i for i, p in enumerate(self._support)}
            V = np.zeros((len(self._items), len(self._support)), dtype=np.int64)
            c = np.empty(len(self._items), dtype=np.complex128)
            for t, (mi, coef) in enumerate(self._items):
                c[t] = coef
                for p, e in mi.exponents:
                    V[t, pos[p]] = e
            V.setflags(write=False)
            c.setflags(write=False)
            self._matrix_cache = (V, c, V.sum(axis=1), pos)
        return self._matrix_cache[:2]

    def _matrix_full(self):
        self._matrix()
        return self._matrix_cache

    def __len__(self) -> int:
        return len(self._items)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return (
            f"MultiIndexPoly(terms={len(self._items)}, "
            f"support={self._support})"
        )


class QuasiCharacterPoint:
    """Finitely supported point of the open infinite polydisk.

    ``values`` maps primes to complex numbers of modulus < 1; primes absent
    from the map take the value 0.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[int, complex]):
        clean: dict[int, complex] = {}
        for p, v in values.items():
            p = _check_prime_key(p)
            v = complex(v)
            if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                raise InvalidArgumentError(f"value at prime {p} is not finite")
            if abs(v) >= 1.0:
                raise InvalidArgumentError(
                    f"|value| at prime {p} is {abs(v)}; quasi-character "
                    "points live strictly inside the unit polydisk"
                )
            clean[p] = v
        self._values = dict(sorted(clean.items()))

    @property
    def values(self) -> Mapping[int, complex]:
        return MappingProxyType(self._values)

    def __repr__(self) -> str:  # pragma: no cover - cosmetic
        return f"QuasiCharacterPoint({self._values})"


def lift(f: DirichletPoly, table: FactorTable) -> MultiIndexPoly:
    """Multi-index polynomial of f: index of n carries coefficient a_n.

    Exact zeros are dropped; requires the factor table to cover the
    truncation.
    """
    if f.truncation > table.limit:
        raise InvalidArgumentError(
            f"factor table covers 1..{table.limit} but the series has "
            f"truncation {f.truncation}"
        )
    coeffs = f.coeffs
    terms: dict[MultiIndex, complex] = {}
    for n in np.flatnonzero(coeffs):
        terms[to_multi_index(int(n), table)] = complex(coeffs[n])
    return MultiIndexPoly(terms)


def unlift(P: MultiIndexPoly, truncation: int | None = None) -> DirichletPoly:
    """Back to coefficients; inverse of :func:`lift`.

    The truncation defaults to the largest represented index (1 for the
    zero polynomial), so ``unlift(lift(f))`` recovers f exactly whenever
    a_N is nonzero.
    """
    ns = P.indices_as_integers()
    n_max = max(ns, default=1)
    if truncation is None:
        truncation = n_max
    if truncation < n_max:
        raise InvalidArgumentError(
            f"requested truncation {truncation} drops the represented "
            f"index {n_max}"
        )
    padded = np.zeros(truncation + 1, dtype=np.complex128)
    for n, (_, c) in zip(ns, P.sorted_items()):
        padded[n] = c
    return DirichletPoly._from_padded(padded)


def multiply(
    P: MultiIndexPoly, Q: MultiIndexPoly, limit: int | None = None
) -> MultiIndexPoly:
    """Polynomial product; with ``limit``, terms whose index factors an
    integer above it are discarded (matching convolution of truncations)."""
    acc: dict[tuple, complex] = {}
    for (mi_p, cp), n_p in zip(P.sorted_items(), P.indices_as_integers()):
        for (mi_q, cq), n_q in zip(Q.sorted_items(), Q.indices_as_integers()):
            if limit is not None and n_p * n_q > limit:
                continue
            merged = dict(mi_p.exponents)
            for p, e in mi_q.exponents:
                merged[p] = merged.get(p, 0) + e
            key = tuple(sorted(merged.items()))
            acc[key] = acc.get(key, 0.0 + 0.0j) + cp * cq
    return MultiIndexPoly({MultiIndex(k): v for k, v in acc.items()})


def _character_values(phi) -> Mapping[int, complex]:
    if isinstance(phi, QuasiCharacterPoint):
        return phi.values
    return {int(p): complex(v) for p, v in dict(phi).items()}


def eval_quasi(P: MultiIndexPoly, phi) -> complex:
    """Evaluate the polynomial at a point: Σ c·Π φ(p)^ν.

    ``phi`` is a :class:`QuasiCharacterPoint` or a plain prime → complex
    mapping; primes absent from it take the value 0, so any term using them
    contributes nothing.  Terms are combined deterministically in order of
    increasing index.
    """
    values = _character_values(phi)
    if len(P) > 64:
        # vectorized path: keep only terms supported inside phi, then gather
        # per-axis power tables by exponent
        V, c, row_weight, pos = P._matrix_full()
        axes = [pos[p] for p in values if p in pos and values[p] != 0]
        if axes:
            live = V[:, axes]
            surviving = np.flatnonzero(live.sum(axis=1) == row_weight)
        else:
            surviving = np.flatnonzero(row_weight == 0)
        if surviving.size == 0:
            return 0.0 + 0.0j
        factors = c[surviving].copy()
        support = P.prime_support
        for ax in axes:
            exps = V[surviving, ax]
            e_max = int(exps.max()) if exps.size else 0
            u = complex(values[support[ax]])
            table = np.empty(e_max + 1, dtype=np.complex128)
            table[0] = 1.0
            if e_max:
                table[1:] = np.cumprod(np.full(e_max, u, dtype=np.complex128))
            factors *= table[exps]
        return complex(np.sum(factors))
    total = 0.0 + 0.0j
    for mi, c in P.sorted_items():
        factor = 1.0 + 0.0j
        for p, e in mi.exponents:
            v = values.get(p)
            if v is None or v == 0:
                factor = 0.0 + 0.0j
                break
            factor *= v**e
        if factor != 0:
            total += c * factor
    return total


def point_eval_bound(phi) -> float:
    """Π(1−|φ(p)|²)^{−1/2}: point evaluation at φ is bounded by this times
    the coefficient-space norm.

    Accepts a :class:`QuasiCharacterPoint` or a plain mapping; a plain
    mapping with some |value| ≥ 1 yields +inf with a RuntimeWarning (the
    point is outside the open polydisk, so evaluation is unbounded there).
    """
    values = _character_values(phi)
    x = np.array([abs(v) ** 2 for v in values.values()], dtype=np.float64)
    if np.any(x >= 1.0):
        warnings.warn(
            "point evaluation bound is infinite: some |value| >= 1 places "
            "the point outside the open polydisk",
            RuntimeWarning,
            stacklevel=2,
        )
        return float("inf")
    return float(np.exp(-0.5 * np.sum(np.log1p(-x))))


@dataclass(frozen=True)
class SupNormEstimate:
    """Polytorus sup-norm search result.

    ``lower`` is |P| evaluated in double precision at the best point found,
    hence a true lower bound for the sup norm; ``estimate`` additionally
    applies local refinement and is the better working value, but carries
    no certificate beyond being itself an evaluation.  ``argmax`` holds the
    angles (radians, one per support prime, ascending prime order) of the
    refined best point.
    """

    lower: float
    estimate: float
    dimension: int
    resolution: int
    grid_points: int
    argmax: tuple[float, ...]
    method: str


def _exponent_matrix(P: MultiIndexPoly) -> tuple[np.ndarray, np.ndarray]:
    return P._matrix()


def _eval_angles(V: np.ndarray, c: np.ndarray, angles: np.ndarray) -> complex:
    """P at the torus point z_p = exp(i·angle_p), in double precision."""
    return complex(np.exp(1j * (V @ angles)) @ c)


def _refine(V, c, angles: np.ndarray) -> tuple[float, np.ndarray]:
    if angles.size == 0:
        return abs(_eval_angles(V, c, angles)), angles

    def negabs(theta):
        return -abs(_eval_angles(V, c, theta))

    res = minimize(
        negabs,
        angles,
        method="Nelder-Mead",
        options={
            "xatol": 1e-10,
            "fatol": 1e-13,
            "maxiter": 4000,
            "maxfev": 8000,
        },
    )
    return -float(res.fun), np.asarray(res.x, dtype=np.float64)


def sup_norm_polytorus(P: MultiIndexPoly, resolution: int) -> SupNormEstimate:
    """Grid lower bound and refined estimate of sup |P| on the unit torus.

    A uniform grid with ``resolution`` points per support prime is scanned
    (blocked; ties broken toward the lexicographically smallest grid point),
    the best point is re-evaluated in double precision (``lower``), and a
    local simplex refinement from it gives ``estimate``.  Along nested
    resolutions (doubling) the lower bound is monotone nondecreasing.

    Grid mode handles at most 8 support primes and at least 64 points per
    dimension; beyond 2^30 total points use :func:`sup_norm_search`.
    """
    if not isinstance(resolution, (int, np.integer)) or isinstance(resolution, bool):
        raise InvalidArgumentError("resolution must be an integer")
    resolution = int(resolution)
    if resolution < _MIN_RESOLUTION:
        raise InvalidArgumentError(
            f"grid resolution must be >= {_MIN_RESOLUTION}, got {resolution}"
        )
    d = len(P.prime_support)
    if d > _MAX_GRID_DIM:
        raise InvalidArgumentError(
            f"grid mode handles at most {_MAX_GRID_DIM} support primes, got "
            f"{d}; use sup_norm_search (random-restart local search) instead"
        )
    if len(P) == 0:
        return SupNormEstimate(0.0, 0.0, d, resolution, 0, (), "grid")
    V, c = _exponent_matrix(P)
    if d == 0:
        val = abs(complex(c[0]))
        return SupNormEstimate(val, val, 0, resolution, 1, (), "grid")
    points = resolution**d
    if points > _GRID_POINT_CAP:
        raise ResourceCapError(
            f"{resolution}^{d} grid points exceed the cap 2^30; lower the "
            "resolution or use sup_norm_search"
        )

    dtype = np.complex128 if d < 5 else np.complex64
    theta = 2.0 * np.pi * np.arange(resolution, dtype=np.float64) / resolution
    # per-term, per-axis power vectors on the circle
    W = [
        [np.exp(1j * V[t, ax] * theta) for ax in range(d)]
        for t in range(len(c))
    ]

    # split axes into outer (looped) and inner (one matmul block per outer
    # combination); shrink the inner block if the term stack would not fit
    m = d
    while m > 1 and resolution**m > _BLOCK_ELEMENTS:
        m -= 1
    while m > 1 and len(c) * resolution**m > _INNER_CACHE_ELEMENTS:
        m -= 1
    if len(c) * resolution**m > _INNER_CACHE_ELEMENTS and m == 1:
        raise ResourceCapError(
            f"{len(c)} terms are too many for grid mode at resolution "
            f"{resolution}; use sup_norm_search"
        )
    inner_axes = list(range(d - m, d))
    outer_axes = list(range(0, d - m))

    def tensor(vectors, cast):
        arr = vectors[0].astype(cast)
        for vec in vectors[1:]:
            arr = (arr[..., None] * vec.astype(cast)).reshape(-1)
        return arr

    inner_size = resolution**m
    stack = np.empty((len(c), inner_size), dtype=dtype)
    for t in range(len(c)):
        stack[t] = tensor([W[t][ax] for ax in inner_axes], dtype)

    outer_size = resolution ** len(outer_axes)
    scalars = np.empty((outer_size, len(c)), dtype=np.complex128)
    for t in range(len(c)):
        if outer_axes:
            scalars[:, t] = c[t] * tensor(
                [W[t][ax] for ax in outer_axes], np.complex128
            )
        else:
            scalars[:, t] = c[t]
    scalars = scalars.astype(dtype)

    rows_per_chunk = max(1, _BLOCK_ELEMENTS // inner_size)
    best_val = -1.0
    best_flat = 0
    for lo in range(0, outer_size, rows_per_chunk):
        chunk = scalars[lo : lo + rows_per_chunk] @ stack
        mags = np.abs(chunk)
        i = int(np.argmax(mags))
        v = float(mags.flat[i])
        if v > best_val:
            best_val = v
            best_flat = lo * inner_size + i

    idx = np.unravel_index(best_flat, (resolution,) * d)
    angles = theta[np.asarray(idx)]
    lower = abs(_eval_angles(V, c, angles))
    refined, refined_angles = _refine(V, c, angles)
    # accept the refined point only on a real improvement, not float wobble
    if refined > lower * (1.0 + 1e-12):
        estimate, final_angles = refined, refined_angles
    else:
        estimate, final_angles = lower, angles
    return SupNormEstimate(
        lower=lower,
        estimate=estimate,
        dimension=d,
        resolution=resolution,
        grid_points=points,
        argmax=tuple(float(a) for a in np.mod(final_angles, 2.0 * np.pi)),
        method="grid",
    )


def sup_norm_search(
    P: MultiIndexPoly, num_starts: int = 32, seed: int = 0
) -> SupNormEstimate:
    """Random-restart local search for sup |P|; any support dimension.

    Deterministic for a fixed seed.  Both fields report the best double-
    precision evaluation found (a true lower bound, not an upper bound).
    """
    if num_starts < 1:
        raise InvalidArgumentError("num_starts must be >= 1")
    d = len(P.prime_support)
    if len(P) == 0:
        return SupNormEstimate(0.0, 0.0, d, 0, 0, (), "search")
    V, c = _exponent_matrix(P)
    rng = np.random.default_rng(seed)
    starts = [np.zeros(d, dtype=np.float64)]
    for _ in range(num_starts - 1):
        starts.append(rng.uniform(0.0, 2.0 * np.pi, size=d))
    best_val = -1.0
    best_angles = np.zeros(d, dtype=np.float64)
    for x0 in starts:
        val, ang = _refine(V, c, x0)
        if val > best_val:
            best_val = val
            best_angles = ang
    return SupNormEstimate(
        lower=best_val,
        estimate=best_val,
        dimension=d,
        resolution=0,
        grid_points=len(starts),
        argmax=tuple(float(a) for a in np.mod(best_angles, 2.0 * np.pi)),
        method="search",
    )


def prime_linear_sup_norm(prime_coeffs: Mapping[int, complex]) -> float:
    """Exact sup norm 1 + Σ|a_p| of 1 + Σ a_p p^{−s}.

    For polynomials with constant term 1 and remaining support on the
    primes, the sup over vertical lines is attained with all phases
    aligned, making the closed form exact (no search needed).
    """
    total = 0.0
    for p, v in prime_coeffs.items():
        _check_prime_key(p)
        v = complex(v)
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise InvalidArgumentError(f"coefficient at prime {p} is not finite")
        total += abs(v)
    return 1.0 + total


@dataclass(frozen=True)
class MultiplierNorms:
    """Multiplier norms of a totally multiplicative coefficient rule.

    ``forward`` = Π(1−|a_p|)^{−1} (+inf, flagged, when some |a_p| ≥ 1);
    ``reciprocal`` = Π(1+|a_p|), the norm of the convolution inverse's
    rule.  Both come from maximizing each prime's factor independently.
    """

    forward: float
    reciprocal: float
    flags: tuple[str, ...]


def euler_multiplier_norm(prime_values: Mapping[int, complex]) -> MultiplierNorms:
    """Closed-form multiplier norms for an Euler-product rule."""
    mags = []
    for p, v in prime_values.items():
        _check_prime_key(p)
        v = complex(v)
        if not (np.isfinite(v.real) and np.isfinite(v.imag)):
            raise InvalidArgumentError(f"value at prime {p} is not finite")
        mags.append(abs(v))
    r = np.asarray(mags, dtype=np.float64)
    reciprocal = float(np.exp(np.sum(np.log1p(r))))
    if np.any(r >= 1.0):
        return MultiplierNorms(
            forward=float("inf"),
            reciprocal=reciprocal,
            flags=("non-contractive-prime-value",),
        )
    forward = float(np.exp(-np.sum(np.log1p(-r))))
    return MultiplierNorms(forward=forward, reciprocal=reciprocal, flags=())
