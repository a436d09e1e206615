"""Artifact serialization and parsing.

Coefficient artifacts are CSV with one row per index (``n,re,im``, 1-based,
ascending), preceded by ``# key=value`` comment lines that echo the run
configuration and versions.  Verdicts and reports are JSON objects emitted
with sorted keys, two-space indentation, and a trailing newline, so equal
payloads are byte-identical.  Every emitter here has a parser that
round-trips its output to an equal in-memory object.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from .errors import InvalidArgumentError
from .series import DirichletPoly


def format_float(x: float) -> str:
    """Shortest decimal form that round-trips a double."""
    return f"{float(x):.17g}"


def to_jsonable(obj):
    """Recursively convert report objects to JSON-serializable structures.

    Complex numbers become ``[re, im]`` pairs, dataclasses become objects,
    exact rationals become strings, numpy scalars and arrays become native
    numbers and lists.
    """
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return [c.real, c.imag]
    if isinstance(obj, Fraction):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
        }
    if isinstance(obj, (dict, MappingProxyType)):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [to_jsonable(v) for v in obj]
    raise InvalidArgumentError(
        f"cannot serialize object of type {type(obj).__name__}"
    )


def flatten_echo(mapping, prefix: str = "") -> list[tuple[str, str]]:
    """Flatten a nested mapping to dotted ``(key, value)`` string pairs."""
    out = []
    for key in sorted(mapping):
        value = mapping[key]
        name = f"{prefix}{key}"
        if isinstance(value, (dict, MappingProxyType)):
            out.extend(flatten_echo(value, prefix=f"{name}."))
        else:
            out.append((name, str(value)))
    return out


def _echo_lines(echo) -> list[str]:
    if not echo:
        return []
    return [f"# {k}={v}" for k, v in flatten_echo(echo)]


def coeffs_csv_text(poly: DirichletPoly, echo=None) -> str:
    """CSV artifact for a coefficient sequence: ``n,re,im`` rows."""
    lines = _echo_lines(echo)
    lines.append("n,re,im")
    coeffs = poly.coeffs
    for n in range(1, poly.truncation + 1):
        c = coeffs[n]
        lines.append(f"{n},{format_float(c.real)},{format_float(c.imag)}")
    return "\n".join(lines) + "\n"


def parse_coeffs_csv(text: str) -> DirichletPoly:
    """Parse a coefficient CSV back to a series (comments ignored)."""
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts[0].lower() == "n":
            continue  # header row
        if len(parts) != 3:
            raise InvalidArgumentError(
                f"coefficient CSV line {lineno}: expected n,re,im"
            )
        try:
            n = int(parts[0])
            re = float(parts[1])
            im = float(parts[2])
        except ValueError as exc:
            raise InvalidArgumentError(
                f"coefficient CSV line {lineno}: {exc}"
            ) from None
        if n < 1:
            raise InvalidArgumentError(
                f"coefficient CSV line {lineno}: index must be >= 1"
            )
        if n in rows:
            raise InvalidArgumentError(
                f"coefficient CSV line {lineno}: duplicate index {n}"
            )
        rows[n] = complex(re, im)
    if not rows:
        raise InvalidArgumentError("coefficient CSV contains no rows")
    N = max(rows)
    arr = np.zeros(N, dtype=np.complex128)
    for n, c in rows.items():
        arr[n - 1] = c
    return DirichletPoly(arr)


def read_coeffs_csv(path: str) -> DirichletPoly:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_coeffs_csv(fh.read())
    except OSError as exc:
        raise InvalidArgumentError(f"cannot read {path}: {exc}") from None


def json_text(payload) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2) + "\n"


def parse_json(text: str):
    return json.loads(text)


def gram_csv_text(entries: np.ndarray, echo=None) -> str:
    """CSV artifact for a Gram section: ``j,k,re,im`` rows."""
    lines = _echo_lines(echo)
    lines.append("j,k,re,im")
    J = entries.shape[0]
    for j in range(1, J + 1):
        for k in range(1, J + 1):
            c = entries[j - 1, k - 1]
            lines.append(
                f"{j},{k},{format_float(c.real)},{format_float(c.imag)}"
            )
    return "\n".join(lines) + "\n"


def parse_gram_csv(text: str) -> np.ndarray:
    rows = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts[0].lower() == "j":
            continue
        if len(parts) != 4:
            raise InvalidArgumentError(
                f"Gram CSV line {lineno}: expected j,k,re,im"
            )
        j, k = int(parts[0]), int(parts[1])
        rows[(j, k)] = complex(float(parts[2]), float(parts[3]))
    if not rows:
        raise InvalidArgumentError("Gram CSV contains no rows")
    J = max(max(j, k) for j, k in rows)
    out = np.zeros((J, J), dtype=np.complex128)
    for (j, k), c in rows.items():
        out[j - 1, k - 1] = c
    return out


def table_csv_text(header: list[str], rows: list[list], echo=None) -> str:
    """Generic tabular artifact: a header row plus formatted value rows."""
    lines = _echo_lines(echo)
    lines.append(",".join(header))
    for row in rows:
        cells = []
        for v in row:
            if isinstance(v, (int, np.integer)):
                cells.append(str(int(v)))
            else:
                cells.append(format_float(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def parse_table_csv(text: str) -> tuple[list[str], list[list[float]]]:
    header = None
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if header is None:
            header = parts
            continue
        rows.append([float(p) for p in parts])
    if header is None:
        raise InvalidArgumentError("tabular CSV contains no header")
    return header, rows


def emit_text(path: str, text: str) -> None:
    """Write an artifact to a file, or to stdout when path is '-'."""
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
