"""Outward-rounded interval arithmetic used to verify numeric certificates.

Real intervals carry IEEE-754 double endpoints.  Every arithmetic result is
widened outward by one ulp step; results of transcendental calls are widened
by four steps, assuming the platform libm is accurate to within a couple of
ulp.  A true real result is therefore always contained in the reported
interval.  Complex intervals are axis-aligned rectangles built from two real
intervals.  Instances are treated as immutable.
"""

from __future__ import annotations

import math

from .errors import InvalidArgumentError

_INF = math.inf
_LIBM_STEPS = 4


def _steps_down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -_INF)
    return x


def _steps_up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, _INF)
    return x


def _as_rint(value):
    if isinstance(value, RInt):
        return value
    if isinstance(value, (int, float)):
        return RInt(value)
    raise InvalidArgumentError(
        f"cannot interpret {value!r} as a real interval"
    )


class RInt:
    """Closed real interval [lo, hi]."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo = float(lo)
        hi = float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise InvalidArgumentError("interval endpoints must not be NaN")
        if lo > hi:
            raise InvalidArgumentError(
                f"interval endpoints out of order: [{lo}, {hi}]"
            )
        self.lo = lo
        self.hi = hi

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= float(x) <= self.hi

    def hull(self, other) -> "RInt":
        other = _as_rint(other)
        return RInt(min(self.lo, other.lo), max(self.hi, other.hi))

    def __neg__(self) -> "RInt":
        return RInt(-self.hi, -self.lo)

    def __add__(self, other) -> "RInt":
        other = _as_rint(other)
        return RInt(
            _steps_down(self.lo + other.lo), _steps_up(self.hi + other.hi)
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RInt":
        return self + (-_as_rint(other))

    def __rsub__(self, other) -> "RInt":
        return _as_rint(other) + (-self)

    def __mul__(self, other) -> "RInt":
        other = _as_rint(other)
        corners = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        if any(math.isnan(c) for c in corners):
            raise InvalidArgumentError("interval multiplication overflowed")
        return RInt(_steps_down(min(corners)), _steps_up(max(corners)))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RInt":
        other = _as_rint(other)
        if other.lo <= 0.0 <= other.hi:
            raise InvalidArgumentError(
                "interval division by an interval containing zero"
            )
        corners = (
            self.lo / other.lo,
            self.lo / other.hi,
            self.hi / other.lo,
            self.hi / other.hi,
        )
        return RInt(_steps_down(min(corners)), _steps_up(max(corners)))

    def __rtruediv__(self, other) -> "RInt":
        return _as_rint(other) / self

    def abs(self) -> "RInt":
        if self.lo >= 0.0:
            return RInt(self.lo, self.hi)
        if self.hi <= 0.0:
            return -self
        return RInt(0.0, max(-self.lo, self.hi))

    def exp(self) -> "RInt":
        lo = max(0.0, _steps_down(math.exp(self.lo), _LIBM_STEPS))
        return RInt(lo, _steps_up(math.exp(self.hi), _LIBM_STEPS))

    def log(self) -> "RInt":
        if self.lo <= 0.0:
            raise InvalidArgumentError("interval log requires lo > 0")
        return RInt(
            _steps_down(math.log(self.lo), _LIBM_STEPS),
            _steps_up(math.log(self.hi), _LIBM_STEPS),
        )

    def sqrt(self) -> "RInt":
        if self.lo < 0.0:
            raise InvalidArgumentError("interval sqrt requires lo >= 0")
        lo = max(0.0, _steps_down(math.sqrt(self.lo), _LIBM_STEPS))
        return RInt(lo, _steps_up(math.sqrt(self.hi), _LIBM_STEPS))

    def pow_int(self, k: int) -> "RInt":
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise InvalidArgumentError(
                "pow_int expects a nonnegative integer exponent"
            )
        if k == 0:
            return RInt(1.0)
        if k % 2 == 0:
            base = self.abs()
        else:
            base = self
        result = RInt(1.0)
        power = base
        n = k
        while n:
            if n & 1:
                result = result * power
            n >>= 1
            if n:
                power = power * power
        if k % 2 == 0:
            return RInt(max(0.0, result.lo), result.hi)
        return result

    def __repr__(self) -> str:
        return f"RInt({self.lo!r}, {self.hi!r})"


class CInt:
    """Axis-aligned complex rectangle with interval components."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        if im is None and isinstance(re, complex):
            re, im = re.real, re.imag
        elif im is None:
            im = 0.0
        self.re = _as_rint(re)
        self.im = _as_rint(im)

    def __add__(self, other) -> "CInt":
        other = _as_cint(other)
        return CInt(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other) -> "CInt":
        other = _as_cint(other)
        return CInt(self.re - other.re, self.im - other.im)

    def __mul__(self, other) -> "CInt":
        other = _as_cint(other)
        return CInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def powi(self, k: int) -> "CInt":
        if not isinstance(k, int) or isinstance(k, bool) or k < 0:
            raise InvalidArgumentError(
                "powi expects a nonnegative integer exponent"
            )
        result = CInt(1.0, 0.0)
        power = self
        n = k
        while n:
            if n & 1:
                result = result * power
            n >>= 1
            if n:
                power = power * power
        return result

    def abs(self) -> RInt:
        a = self.re.abs()
        b = self.im.abs()
        square = a * a + b * b
        return RInt(max(0.0, square.lo), square.hi).sqrt()

    def __repr__(self) -> str:
        return f"CInt({self.re!r}, {self.im!r})"


def _as_cint(value):
    if isinstance(value, CInt):
        return value
    if isinstance(value, (int, float, complex)):
        return CInt(complex(value))
    if isinstance(value, RInt):
        return CInt(value, 0.0)
    raise InvalidArgumentError(
        f"cannot interpret {value!r} as a complex interval"
    )
