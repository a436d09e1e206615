"""Command-line surface: deterministic experiment orchestration.

Every subcommand reads inputs (coefficient CSVs, flags, an optional
key=value config file), runs one library operation, and writes a single
artifact in the declared format.  Artifacts embed the full configuration
and component versions; the wall-clock line goes to stderr so repeated
runs stay byte-identical.  All randomness derives from the master seed.

Exit codes: 0 success; 2 invalid input (unreadable files, bad values,
domain errors); 3 resource cap reached (a partial artifact is still
written when one exists); 64 usage errors (unknown subcommand, malformed
flags).
"""

from __future__ import annotations

import argparse
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy

from . import __version__, kernels
from .bohrlift import lift, prime_linear_sup_norm, sup_norm_polytorus, sup_norm_search
from .characters import (
    Character,
    GridRect,
    derive_character_seed,
    growth_experiment,
    prime_supported_experiment,
    zeta_chi_explore,
)
from .config import RunConfig, make_config, parse_config_file
from .dilation import (
    SineSystemSpec,
    completeness_check,
    construct_sign_change_series,
    construct_vanishing_infimum_spec,
    frame_bounds_estimate,
    gram_section,
    riesz_check,
)
from .errors import (
    DirseriesError,
    DomainError,
    InvalidArgumentError,
    NonInvertibleError,
    NumericalError,
    ResourceCapError,
)
from .numtheory import build_factor_table
from .serialize import (
    coeffs_csv_text,
    emit_text,
    gram_csv_text,
    json_text,
    read_coeffs_csv,
    table_csv_text,
    to_jsonable,
)
from .series import (
    DirichletPoly,
    carlson_mean,
    convolve,
    evaluate,
    norm_H,
    norm_Hd,
    ones,
    reciprocal,
)

_USAGE_EXIT = 64


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(_USAGE_EXIT, f"{self.prog}: usage error: {message}\n")


def _versions() -> dict:
    return {
        "dirseries": __version__,
        "kernel_backend": kernels.BACKEND,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "scipy": scipy.__version__,
    }


def _echo(cfg: RunConfig) -> dict:
    return {"config": cfg.echo(), "versions": _versions()}


def _resolve_path(args, cfg: RunConfig) -> str:
    return args.output if args.output is not None else cfg.out_path


def _resolve_format(args, cfg: RunConfig) -> str:
    fmt = args.format if args.format is not None else cfg.out_format
    if fmt not in ("csv", "json"):
        raise InvalidArgumentError(f"unknown format {fmt!r}")
    return fmt


def _emit_json_artifact(args, cfg: RunConfig, subcommand: str, result) -> None:
    payload = {
        **_echo(cfg),
        "subcommand": subcommand,
        "result": to_jsonable(result),
    }
    emit_text(_resolve_path(args, cfg), json_text(payload))


def _emit_series(args, cfg: RunConfig, subcommand: str, poly: DirichletPoly):
    if _resolve_format(args, cfg) == "json":
        result = {
            "truncation": poly.truncation,
            "coefficients": [poly.coeff(n) for n in range(1, poly.truncation + 1)],
        }
        _emit_json_artifact(args, cfg, subcommand, result)
    else:
        emit_text(_resolve_path(args, cfg), coeffs_csv_text(poly, _echo(cfg)))


def _threads(args) -> int:
    threads = getattr(args, "threads", 1)
    if threads < 1:
        raise InvalidArgumentError("--threads must be >= 1")
    return threads


def _size(args, cfg_default: int, dedicated=None) -> int:
    """Dedicated flag > generic --limit > configured default."""
    if dedicated is not None:
        return dedicated
    if args.limit is not None:
        return args.limit
    return cfg_default


# ---------------------------------------------------------------------------
# subcommands


def cmd_convolve(args, cfg):
    f = read_coeffs_csv(args.file[0])
    g = read_coeffs_csv(args.file[1])
    _emit_series(args, cfg, "convolve", convolve(f, g))
    return 0


def cmd_invert(args, cfg):
    f = read_coeffs_csv(args.file)
    _emit_series(args, cfg, "invert", reciprocal(f))
    return 0


def cmd_eval(args, cfg):
    f = read_coeffs_csv(args.file)
    try:
        s = complex(args.s.replace(" ", ""))
    except ValueError:
        raise InvalidArgumentError(
            f"cannot parse {args.s!r} as a complex number (e.g. '1.5+0.3j')"
        ) from None
    value = evaluate(f, s)
    _emit_json_artifact(
        args, cfg, "eval",
        {"s": s, "truncation": f.truncation, "value": value},
    )
    return 0


def cmd_norms(args, cfg):
    f = read_coeffs_csv(args.file)
    table = build_factor_table(max(f.truncation, 2))
    result = {
        "truncation": f.truncation,
        "norm_h": norm_H(f),
        "norm_hd": norm_Hd(f, table),
    }
    _emit_json_artifact(args, cfg, "norms", result)
    return 0


def cmd_supnorm(args, cfg):
    f = read_coeffs_csv(args.file)
    table = build_factor_table(max(f.truncation, 2))
    P = lift(f, table)
    if args.resolution is not None:
        est = sup_norm_polytorus(P, args.resolution)
        method = "polytorus-grid"
    else:
        est = sup_norm_search(P, num_starts=args.starts, seed=cfg.master_seed)
        method = "multi-start-search"
    result = {
        "method": method,
        "lower_bound": est.lower,
        "refined_estimate": est.estimate,
        "truncation": f.truncation,
    }
    prime_coeffs = {}
    linear = f.coeff(1) == 1.0
    for n in range(2, f.truncation + 1):
        c = f.coeff(n)
        if c != 0:
            if table.is_prime(n):
                prime_coeffs[n] = c
            else:
                linear = False
                break
    if linear:
        result["kronecker_identity_value"] = prime_linear_sup_norm(prime_coeffs)
    _emit_json_artifact(args, cfg, "supnorm", result)
    return 0


def cmd_lift(args, cfg):
    f = read_coeffs_csv(args.file)
    table = build_factor_table(max(f.truncation, 2))
    P = lift(f, table)
    terms = [
        {"exponents": [[p, e] for p, e in mi.exponents], "coefficient": c}
        for mi, c in P.sorted_items()
    ]
    result = {
        "prime_support": list(P.prime_support),
        "num_terms": len(terms),
        "terms": terms,
    }
    _emit_json_artifact(args, cfg, "lift", result)
    return 0


def cmd_mc_growth(args, cfg):
    N_max = _size(args, cfg.truncation, args.n_max)
    if args.coeffs is not None:
        f = read_coeffs_csv(args.coeffs)
    else:
        f = ones(N_max)
    table = build_factor_table(max(N_max, 2))
    report = growth_experiment(
        f,
        args.num_chars,
        N_max,
        table,
        master_seed=cfg.master_seed,
        threads=_threads(args),
    )
    if _resolve_format(args, cfg) == "json":
        _emit_json_artifact(args, cfg, "mc-growth", report)
    else:
        rows = [
            [i, report.exponents[i], report.sups[i], report.sups_normalized[i]]
            for i in range(report.num_characters)
        ]
        text = table_csv_text(
            ["index", "exponent", "sup", "sup_normalized"], rows, _echo(cfg)
        )
        emit_text(_resolve_path(args, cfg), text)
    return 0


def cmd_mc_primes(args, cfg):
    P_limit = _size(args, min(cfg.sieve_limit, 10**5), args.prime_limit)
    table = build_factor_table(max(P_limit, 2))
    if args.coeffs is not None:
        f = read_coeffs_csv(args.coeffs)
        prime_coeffs = {}
        for n in range(2, f.truncation + 1):
            c = f.coeff(n)
            if c != 0:
                prime_coeffs[n] = c
    else:
        ps = table.primes[table.primes <= P_limit]
        prime_coeffs = {int(p): 1.0 / float(p) for p in ps}
    report = prime_supported_experiment(
        prime_coeffs,
        args.num_chars,
        P_limit,
        table,
        master_seed=cfg.master_seed,
        threads=_threads(args),
    )
    if _resolve_format(args, cfg) == "json":
        _emit_json_artifact(args, cfg, "mc-primes", report)
    else:
        rows = [
            [k.threshold, k.empirical, k.bound, k.standard_error]
            for k in report.kolmogorov_checks
        ]
        text = table_csv_text(
            ["threshold", "empirical", "bound", "standard_error"],
            rows,
            _echo(cfg),
        )
        emit_text(_resolve_path(args, cfg), text)
    return 0


def _parse_grid(spec: str) -> GridRect:
    parts = [p.strip() for p in spec.split(",")]
    if len(parts) != 6:
        raise InvalidArgumentError(
            "--grid expects 'sigma_lo,sigma_hi,num_sigma,t_lo,t_hi,num_t'"
        )
    try:
        return GridRect(
            float(parts[0]),
            float(parts[1]),
            int(parts[2]),
            float(parts[3]),
            float(parts[4]),
            int(parts[5]),
        )
    except ValueError as exc:
        raise InvalidArgumentError(f"cannot parse grid: {exc}") from None


def cmd_mc_zeta(args, cfg):
    P_max = _size(args, 10**4, args.p_max)
    grid = _parse_grid(args.grid)
    table = build_factor_table(max(P_max, 2))
    threads = _threads(args)

    def worker(i: int):
        chi = Character(derive_character_seed(cfg.master_seed, i))
        return zeta_chi_explore(chi, args.sigma_min, grid, P_max, table)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(worker, range(args.num_chars)))
    else:
        reports = [worker(i) for i in range(args.num_chars)]

    per_char = [
        {
            "index": i,
            "min_modulus": r.min_modulus,
            "reciprocal_residual": r.reciprocal_residual,
            "trace": [[int(c), d] for c, d in r.trace],
        }
        for i, r in enumerate(reports)
    ]
    result = {
        "num_characters": args.num_chars,
        "p_max": P_max,
        "sigma_min": args.sigma_min,
        "grid": grid,
        "global_min_modulus": min(r.min_modulus for r in reports),
        "worst_reciprocal_residual": max(
            r.reciprocal_residual for r in reports
        ),
        "per_character": per_char,
        "flags": ["exploratory", "no-zero-free-certificate"],
    }
    if _resolve_format(args, cfg) == "json":
        _emit_json_artifact(args, cfg, "mc-zeta", result)
    else:
        rows = [
            [i, r.min_modulus, r.reciprocal_residual]
            for i, r in enumerate(reports)
        ]
        text = table_csv_text(
            ["index", "min_modulus", "reciprocal_residual"], rows, _echo(cfg)
        )
        emit_text(_resolve_path(args, cfg), text)
    return 0


def cmd_carlson(args, cfg):
    f = read_coeffs_csv(args.file)
    report = carlson_mean(f, args.sigma, args.T)
    _emit_json_artifact(args, cfg, "carlson", report)
    return 0


def cmd_gram(args, cfg):
    f = read_coeffs_csv(args.file)
    spec = SineSystemSpec(f)
    J = _size(args, 16, args.size)
    section = gram_section(spec, J, threads=_threads(args))
    bounds = frame_bounds_estimate(section)
    if _resolve_format(args, cfg) == "json":
        result = {
            "size": section.size,
            "min_eig": bounds.min_eig,
            "max_eig": bounds.max_eig,
            "entries": section.entries,
        }
        _emit_json_artifact(args, cfg, "gram", result)
    else:
        emit_text(
            _resolve_path(args, cfg),
            gram_csv_text(section.entries, _echo(cfg)),
        )
    return 0


def cmd_riesz_check(args, cfg):
    f = read_coeffs_csv(args.file)
    spec = SineSystemSpec(f)
    table = build_factor_table(max(spec.truncation, 2))
    verdict = riesz_check(spec, table)
    _emit_json_artifact(args, cfg, "riesz-check", verdict)
    return 0


def cmd_complete_check(args, cfg):
    f = read_coeffs_csv(args.file)
    spec = SineSystemSpec(f)
    table = build_factor_table(max(spec.truncation, 2))
    verdict = completeness_check(spec, table)
    _emit_json_artifact(args, cfg, "complete-check", verdict)
    return 0


def cmd_construct_413(args, cfg):
    tail_N = _size(args, 10**7)
    construction = construct_sign_change_series(args.alternations, tail_N)
    result = {
        "requested": construction.requested,
        "achieved": construction.achieved,
        "truncation": construction.truncation,
        "boundaries": construction.boundaries,
        "sigmas": construction.sigmas,
        "signs": construction.signs,
        "certificates": construction.certificates,
        "zero_brackets": construction.zero_brackets,
        "flags": construction.flags,
    }
    _emit_json_artifact(args, cfg, "construct-413", result)
    if args.coeffs_out is not None:
        emit_text(
            args.coeffs_out,
            coeffs_csv_text(construction.poly(), _echo(cfg)),
        )
    if "resource-cap" in construction.flags:
        print(
            "dirseries: construct-413: resource cap reached after "
            f"{construction.achieved} of {construction.requested} blocks",
            file=sys.stderr,
        )
        return 3
    return 0


def cmd_construct_55(args, cfg):
    P_max = _size(args, 10**4, args.p_max)
    truncation = (
        args.truncation
        if args.truncation is not None
        else min(cfg.truncation, 4096)
    )
    report = construct_vanishing_infimum_spec(P_max, truncation=truncation)
    head_len = min(32, report.phi_spec.truncation)
    result = {
        "prime_cutoff": report.prime_cutoff,
        "truncation": report.phi_spec.truncation,
        "prime_square_sums": report.prime_square_sums,
        "final_square_increment": report.final_square_increment,
        "sigma_grid": report.sigma_grid,
        "capital_values": report.capital_values,
        "completeness": report.completeness,
        "phi_coefficients_head": [
            report.phi_spec.coeffs.coeff(n) for n in range(1, head_len + 1)
        ],
        "flags": report.flags,
    }
    _emit_json_artifact(args, cfg, "construct-55", result)
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def build_parser() -> _Parser:
    parser = _Parser(
        prog="dirseries",
        description=(
            "Dirichlet-series toolkit: convolution algebra, polydisk "
            "lifts, character Monte Carlo, dilation systems, and "
            "certified constructions."
        ),
        epilog=(
            "Exit codes: 0 success, 2 invalid input, 3 resource cap, "
            "64 usage error."
        ),
    )
    common = _Parser(add_help=False)
    common.add_argument(
        "--config", metavar="PATH", help="key=value config file"
    )
    common.add_argument(
        "--seed", type=int, metavar="N", help="override master_seed"
    )
    common.add_argument(
        "--limit",
        type=int,
        metavar="N",
        help="override the subcommand's main size parameter",
    )
    common.add_argument(
        "--threads", type=int, default=1, metavar="T",
        help="worker threads for sharded experiments (default 1)",
    )
    common.add_argument(
        "--format", choices=("csv", "json"), help="artifact format"
    )
    common.add_argument(
        "--output", metavar="PATH", help="artifact path ('-' = stdout)"
    )

    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("convolve", cmd_convolve, "Dirichlet convolution of two coefficient CSVs")
    sp.add_argument("file", nargs=2, help="two coefficient CSV files")

    sp = add("invert", cmd_invert, "convolution reciprocal of a coefficient CSV")
    sp.add_argument("file", help="coefficient CSV file")

    sp = add("eval", cmd_eval, "evaluate the series at a complex point")
    sp.add_argument("file", help="coefficient CSV file")
    sp.add_argument("--s", required=True, help="complex point, e.g. '1.5+0.3j'")

    sp = add("norms", cmd_norms, "plain and divisor-weighted squared-summable norms")
    sp.add_argument("file", help="coefficient CSV file")

    sp = add("supnorm", cmd_supnorm, "polytorus sup-norm lower bound of the lift")
    sp.add_argument("file", help="coefficient CSV file")
    sp.add_argument("--starts", type=int, default=32, help="search starts (default 32)")
    sp.add_argument(
        "--resolution", type=int, help="use an exhaustive grid at this resolution"
    )

    sp = add("lift", cmd_lift, "multi-index polynomial form of the series")
    sp.add_argument("file", help="coefficient CSV file")

    sp = add("mc-growth", cmd_mc_growth, "partial-sum growth over random characters")
    sp.add_argument("--num-chars", type=int, default=100, help="characters to sample")
    sp.add_argument("--n-max", type=int, help="partial-sum length")
    sp.add_argument("--coeffs", help="coefficient CSV (default: all ones)")

    sp = add("mc-primes", cmd_mc_primes, "prime-supported sups vs the variance bound")
    sp.add_argument("--num-chars", type=int, default=500, help="characters to sample")
    sp.add_argument("--prime-limit", type=int, help="prime cutoff")
    sp.add_argument("--coeffs", help="prime coefficient CSV (default: a_p = 1/p)")

    sp = add("mc-zeta", cmd_mc_zeta, "exploratory twisted Euler-product scan")
    sp.add_argument("--num-chars", type=int, default=50, help="characters to sample")
    sp.add_argument("--p-max", type=int, help="Euler product prime cutoff")
    sp.add_argument("--sigma-min", type=float, default=0.6, help="left grid guard")
    sp.add_argument(
        "--grid",
        default="0.8,2.0,5,-10.0,10.0,9",
        help="sigma_lo,sigma_hi,num_sigma,t_lo,t_hi,num_t",
    )

    sp = add("carlson", cmd_carlson, "long-interval vertical mean square")
    sp.add_argument("file", help="coefficient CSV file")
    sp.add_argument("--sigma", type=float, required=True, help="abscissa (> 1/2)")
    sp.add_argument("--T", type=float, default=1e3, help="half-length (default 1e3)")

    sp = add("gram", cmd_gram, "Gram section and frame-bound estimates")
    sp.add_argument("file", help="coefficient CSV file")
    sp.add_argument("--size", type=int, help="section size J (default 16)")

    sp = add("riesz-check", cmd_riesz_check, "Riesz-basis decision on decidable classes")
    sp.add_argument("file", help="coefficient CSV file")

    sp = add(
        "complete-check", cmd_complete_check, "completeness decision on decidable classes"
    )
    sp.add_argument("file", help="coefficient CSV file")

    sp = add("construct-413", cmd_construct_413, "certified sign-alternation construction")
    sp.add_argument(
        "--alternations", type=int, default=3, help="certified blocks to build"
    )
    sp.add_argument(
        "--coeffs-out", metavar="PATH", help="also write the coefficients as CSV"
    )

    sp = add("construct-55", cmd_construct_55, "vanishing-infimum product construction")
    sp.add_argument("--p-max", type=int, help="prime data cutoff (default 1e4)")
    sp.add_argument("--truncation", type=int, help="materialized coefficient length")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads(args)
        file_values = (
            parse_config_file(args.config) if args.config is not None else None
        )
        cfg = make_config(
            file_values,
            master_seed=args.seed,
            out_format=args.format,
            out_path=args.output,
        )
        t0 = time.monotonic()
        code = args.func(args, cfg)
        elapsed = time.monotonic() - t0
        print(
            f"subcommand={args.subcommand} wall_clock_seconds={elapsed:.3f}",
            file=sys.stderr,
        )
        return code
    except ResourceCapError as exc:
        print(f"dirseries: resource cap: {exc}", file=sys.stderr)
        return 3
    except (DirseriesError, OSError, ValueError) as exc:
        print(f"dirseries: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
