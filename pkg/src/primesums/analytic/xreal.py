"""Scalar extended-precision reals with an error radius."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .dd import DD, EPS

_ROUND = 4 * EPS  # per-operation relative rounding allowance


@dataclass(frozen=True)
class XReal:
    """A double-double value ``hi + lo`` known to lie within ``err`` of the truth."""

    hi: float
    lo: float = 0.0
    err: float = 0.0

    @classmethod
    def of(cls, x) -> "XReal":
        if isinstance(x, XReal):
            return x
        if isinstance(x, DD):
            return cls(float(x.hi), float(x.lo))
        if isinstance(x, float):
            return cls(x)
        if hasattr(x, "_mpf_"):
            with mpmath.workdps(40):
                return cls.from_mpf(mpmath.mpf(x), 0.0)
        q = Fraction(x)
        d = DD.from_fraction(q)
        return cls(float(d.hi), float(d.lo), abs(float(q - d.to_fraction())))

    @classmethod
    def from_mpf(cls, v, err) -> "XReal":
        """Wrap an mpmath value; the double-double rounding is added to ``err``."""
        hi = float(v)
        lo = float(v - hi)
        rounding = abs(float(v - mpmath.mpf(hi) - mpmath.mpf(lo)))
        # the float conversions above round to nearest; widen so the radius stays outward
        return cls(hi, lo, (float(err) + rounding) * (1 + 2.0**-50))

    # views

    @property
    def dd(self) -> DD:
        return DD(self.hi, self.lo)

    def __float__(self) -> float:
        return self.hi + self.lo

    def to_mpf(self):
        with mpmath.workdps(40):
            return mpmath.mpf(self.hi) + mpmath.mpf(self.lo)

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    @property
    def value(self) -> float:
        return float(self)

    def contains(self, v) -> bool:
        """True if the exact number ``v`` (int/Fraction/mpf) lies in the ball."""
        if isinstance(v, (int, Fraction)):
            return abs(Fraction(v) - self.to_fraction()) <= Fraction(self.err)
        with mpmath.workdps(60):
            return abs(mpmath.mpf(v) - self.to_mpf()) <= self.err

    def sign(self) -> int:
        """+1 / -1 when the sign is certain, 0 when the ball straddles zero."""
        v = self.hi + self.lo
        if v > self.err:
            return 1
        if v < -self.err:
            return -1
        return 0

    def __repr__(self) -> str:
        with mpmath.workdps(40):
            return f"XReal({mpmath.nstr(self.to_mpf(), 32)} ± {self.err:.3g})"

    def __str__(self) -> str:
        with mpmath.workdps(40):
            return f"{mpmath.nstr(self.to_mpf(), 31)} ± {self.err:.2e}"

    # arithmetic

    def _make(self, d: DD, err: float) -> "XReal":
        hi, lo = float(d.hi), float(d.lo)
        return XReal(hi, lo, err + abs(hi) * _ROUND)

    def __neg__(self) -> "XReal":
        return XReal(-self.hi, -self.lo, self.err)

    def __abs__(self) -> "XReal":
        return -self if (self.hi + self.lo) < 0 else self

    def __add__(self, other) -> "XReal":
        o = XReal.of(other)
        return self._make(self.dd + o.dd, self.err + o.err)

    __radd__ = __add__

    def __sub__(self, other) -> "XReal":
        return self + (-XReal.of(other))

    def __rsub__(self, other) -> "XReal":
        return XReal.of(other) + (-self)

    def __mul__(self, other) -> "XReal":
        o = XReal.of(other)
        a, b = abs(float(self)), abs(float(o))
        err = a * o.err + b * self.err + self.err * o.err
        return self._make(self.dd * o.dd, err)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "XReal":
        o = XReal.of(other)
        b = abs(float(o))
        if b <= o.err:
            raise ZeroDivisionError("divisor ball contains zero")
        q = self.dd / o.dd
        r = abs(float(q.hi))
        err = (self.err + r * o.err) / (b - o.err)
        return self._make(q, err)

    def __rtruediv__(self, other) -> "XReal":
        return XReal.of(other) / self

    def __pow__(self, k: int) -> "XReal":
        out = XReal(1.0)
        for _ in range(k):
            out = out * self
        return out

    # ordering on certified signs only

    def __gt__(self, other) -> bool:
        return (self - other).sign() > 0

    def __lt__(self, other) -> bool:
        return (self - other).sign() < 0


def xlog(x: XReal) -> XReal:
    """log of a positive ball: |d log| <= err / (x - err)."""
    v = float(x)
    if v - x.err <= 0:
        raise ValueError("log argument ball reaches zero")
    from .dd import log as dd_log

    d = dd_log(x.dd)
    return XReal(float(d.hi), float(d.lo), x.err / (v - x.err) + abs(float(d.hi)) * 8 * EPS + 8 * EPS)


def xexp(x: XReal) -> XReal:
    from .dd import exp as dd_exp

    d = dd_exp(x.dd)
    v = abs(float(d.hi))
    return XReal(float(d.hi), float(d.lo), v * math.expm1(x.err) + v * 16 * EPS)
