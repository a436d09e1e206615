"""Backend selection for the hot kernels.

At import time the compiled extension (``dirseries._kernels``) is preferred;
if it is missing — or the environment variable ``DIRSERIES_PURE_PYTHON`` is
set to ``1``/``true``/``yes``/``on`` — the pure-numpy fallback
(``dirseries._kernels_py``) is used instead.  Both backends implement the
same contracts and return bit-for-bit identical results on finite inputs,
so everything downstream is backend-agnostic.

``BACKEND`` names the active backend (``"compiled"`` or ``"python"``).
"""

from __future__ import annotations

import os

from . import _kernels_py
from .errors import InvalidArgumentError


def _pure_python_forced() -> bool:
    value = os.environ.get("DIRSERIES_PURE_PYTHON", "")
    return value.strip().lower() in {"1", "true", "yes", "on"}


_impl = None
if not _pure_python_forced():
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = None

if _impl is not None:
    BACKEND = "compiled"
else:
    BACKEND = "python"
    _impl = _kernels_py

linear_sieve = _impl.linear_sieve
mult_extend = _impl.mult_extend
convolve = _impl.convolve
reciprocal = _impl.reciprocal


def available_backends() -> list[str]:
    """Names of the backends importable in this environment."""
    names = []
    try:
        from . import _kernels  # noqa: F401
    except ImportError:
        pass
    else:
        names.append("compiled")
    names.append("python")
    return names


def get_backend(name: str | None = None):
    """Return a kernel backend module by name (``None`` = the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "compiled":
        try:
            from . import _kernels
        except ImportError as exc:
            raise InvalidArgumentError(
                "the compiled kernel backend is not available in this "
                "installation"
            ) from exc
        return _kernels
    raise InvalidArgumentError(
        f"unknown kernel backend {name!r}; expected 'compiled' or 'python'"
    )
