"""Benchmark the compiled kernel backend against the pure-Python fallback.

Runs each hot kernel on both backends (when both are importable), reports
best-of-repeats wall time and the speedup, and verifies that the outputs
are bit-for-bit identical — the fallback is a drop-in replacement, just
slower.

Usage:  python3 benchmarks/bench_kernels.py [--repeats 3]
"""

import argparse
import time

import numpy as np

from dirseries import kernels


def best_of(fn, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def identical(a, b) -> bool:
    if isinstance(a, tuple):
        return all(identical(x, y) for x, y in zip(a, b))
    return bool(np.array_equal(np.asarray(a), np.asarray(b)))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    backends = kernels.available_backends()
    print(f"active backend: {kernels.BACKEND}; available: {backends}")
    if backends != ["compiled", "python"]:
        print("compiled backend not importable here - nothing to compare")
        return 0

    compiled = kernels.get_backend("compiled")
    python = kernels.get_backend("python")

    N = 10**6
    rng = np.random.default_rng(0)
    a = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
    a[0] = 0.0
    a[1] = 1.0
    conv_n = 3 * 10**5
    spf = compiled.linear_sieve(N)[0]
    prime_vals = np.zeros(N + 1, dtype=np.complex128)
    prime_vals[np.flatnonzero(spf[2:] == np.arange(2, N + 1)) + 2] = 0.5

    cases = [
        (f"linear_sieve({N})", lambda be: be.linear_sieve(N)),
        (f"mult_extend(N={N})", lambda be: be.mult_extend(spf, prime_vals, N)),
        (f"convolve(N={conv_n})", lambda be: be.convolve(a, a, conv_n)),
        (f"reciprocal(N={N})", lambda be: be.reciprocal(a, 1.0 + 0.0j, N)),
    ]

    print(f"{'kernel':<24} {'compiled':>12} {'python':>12} {'speedup':>9}  bitwise")
    for name, call in cases:
        t_c, r_c = best_of(lambda: call(compiled), args.repeats)
        t_p, r_p = best_of(lambda: call(python), args.repeats)
        same = identical(r_c, r_p)
        print(
            f"{name:<24} {t_c * 1e3:>10.1f}ms {t_p * 1e3:>10.1f}ms "
            f"{t_p / t_c:>8.1f}x  {'equal' if same else 'MISMATCH'}"
        )
        if not same:
            return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
