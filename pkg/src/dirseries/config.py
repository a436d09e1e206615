"""Run configuration: defaults, flat key=value config files, flag overrides.

A config file holds one ``key=value`` pair per line (``#`` comments and
blank lines allowed).  Command-line flags override file values, which
override the built-in defaults.  The full configuration is echoed into
every output artifact so results are reproducible from the artifact alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError

_MAX_SEED = 2**64

# file key -> (attribute, parser)
_FILE_KEYS = {
    "master_seed": ("master_seed", int),
    "sieve_limit": ("sieve_limit", int),
    "truncation": ("truncation", int),
    "coeff_abs": ("coeff_abs", float),
    "product_rel": ("product_rel", float),
    "format": ("out_format", str),
    "path": ("out_path", str),
}


@dataclass(frozen=True)
class RunConfig:
    """Configuration shared by every subcommand.

    ``master_seed`` feeds all randomness (no ambient entropy anywhere);
    ``sieve_limit`` and ``truncation`` are the default size knobs;
    the tolerances bound coefficient comparisons and relative product
    checks; ``out_format``/``out_path`` pick the artifact encoding and
    destination ('-' = stdout).
    """

    master_seed: int = 0
    sieve_limit: int = 10**5
    truncation: int = 4096
    coeff_abs: float = 1e-10
    product_rel: float = 1e-3
    out_format: str = "csv"
    out_path: str = "-"

    def __post_init__(self):
        if not isinstance(self.master_seed, int) or isinstance(
            self.master_seed, bool
        ):
            raise InvalidArgumentError("master_seed must be an integer")
        if not 0 <= self.master_seed < _MAX_SEED:
            raise InvalidArgumentError(
                "master_seed must fit in 64 bits (0 <= seed < 2**64)"
            )
        for name in ("sieve_limit", "truncation"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise InvalidArgumentError(f"{name} must be an integer")
            if value < 1:
                raise InvalidArgumentError(f"{name} must be positive")
        for name in ("coeff_abs", "product_rel"):
            value = getattr(self, name)
            if not isinstance(value, float) or not math.isfinite(value):
                raise InvalidArgumentError(f"{name} must be a finite real")
            if not 0.0 < value <= 1e-2:
                raise InvalidArgumentError(
                    f"{name} must lie in (0, 1e-2], got {value}"
                )
        if self.out_format not in ("csv", "json"):
            raise InvalidArgumentError(
                f"format must be 'csv' or 'json', got {self.out_format!r}"
            )
        if not self.out_path:
            raise InvalidArgumentError("output path must be non-empty")

    def echo(self) -> dict:
        """Nested view of the configuration for artifact embedding."""
        return {
            "master_seed": self.master_seed,
            "sieve_limit": self.sieve_limit,
            "truncation": self.truncation,
            "tolerances": {
                "coeff_abs": self.coeff_abs,
                "product_rel": self.product_rel,
            },
            "output": {"format": self.out_format, "path": self.out_path},
        }


def parse_config_file(path: str) -> dict:
    """Read a flat key=value config file into attribute overrides."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read config {path}: {exc}") from None
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidArgumentError(
                f"config line {lineno}: expected key=value, got {line!r}"
            )
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _FILE_KEYS:
            raise InvalidArgumentError(
                f"config line {lineno}: unknown key {key!r}"
            )
        attr, parse = _FILE_KEYS[key]
        try:
            values[attr] = parse(value)
        except ValueError:
            raise InvalidArgumentError(
                f"config line {lineno}: cannot parse {value!r} for {key}"
            ) from None
    return values


def make_config(file_values: dict | None = None, **overrides) -> RunConfig:
    """Defaults, overlaid with file values, overlaid with explicit flags.

    ``overrides`` entries that are None are treated as absent.
    """
    merged = {}
    if file_values:
        merged.update(file_values)
    for key, value in overrides.items():
        if value is not None:
            merged[key] = value
    return RunConfig(**merged)
