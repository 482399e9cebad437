"""Vectorised double-double arithmetic on numpy arrays.

A :class:`DD` holds two float64 arrays ``hi`` and ``lo`` with
``|lo| <= ulp(hi)/2``; the represented value is ``hi + lo`` (about 106
significant bits).  Error-free transforms follow Dekker/Knuth; there is no
fused multiply-add in Python 3.10, so products use Dekker splitting.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1
EPS = 2.0 ** -104  # unit roundoff of the format


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _f64(x):
    return np.asarray(x, dtype=np.float64)


class DD:
    """Array of double-double numbers."""

    __slots__ = ("hi", "lo")
    __array_priority__ = 1000  # make ndarray defer to our reflected operators

    def __init__(self, hi, lo=None):
        self.hi = _f64(hi)
        self.lo = np.zeros_like(self.hi) if lo is None else _f64(lo)

    # conversions

    @classmethod
    def from_int(cls, v) -> "DD":
        """Exact conversion of a Python int or an int64/object integer array."""
        if isinstance(v, (int, np.integer)):
            v = int(v)
            hi = float(v)
            return cls(hi, float(v - int(hi)))
        a = np.asarray(v)
        if a.dtype == object:
            hi = np.array([float(int(t)) for t in a.ravel()]).reshape(a.shape)
            lo = np.array([float(int(t) - int(h)) for t, h in zip(a.ravel(), hi.ravel())]).reshape(a.shape)
            return cls(hi, lo)
        a = a.astype(np.int64)
        hi = a.astype(np.float64)
        # |a| < 2**62 so hi fits back into int64 without overflow
        lo = (a - hi.astype(np.int64)).astype(np.float64)
        return cls(hi, lo)

    @classmethod
    def from_fraction(cls, q) -> "DD":
        q = Fraction(q)
        hi = float(q)
        return cls(hi, float(q - Fraction(hi)))

    @classmethod
    def coerce(cls, x) -> "DD":
        if isinstance(x, DD):
            return x
        if isinstance(x, (int, np.integer)):
            return cls.from_int(x)
        if isinstance(x, (Fraction, str)):
            return cls.from_fraction(Fraction(x))
        return cls(x)  # floats / float arrays are exact doubles

    def to_float(self):
        return self.hi + self.lo

    def to_fraction(self) -> Fraction:
        """Exact value of a scalar DD."""
        return Fraction(float(self.hi)) + Fraction(float(self.lo))

    def __getitem__(self, idx) -> "DD":
        return DD(self.hi[idx], self.lo[idx])

    @property
    def shape(self):
        return self.hi.shape

    def __len__(self):
        return len(self.hi)

    def __repr__(self) -> str:
        return f"DD(hi={self.hi!r}, lo={self.lo!r})"

    # arithmetic

    def __neg__(self) -> "DD":
        return DD(-self.hi, -self.lo)

    def __abs__(self) -> "DD":
        neg = (self.hi < 0) | ((self.hi == 0) & (self.lo < 0))
        return DD(np.where(neg, -self.hi, self.hi), np.where(neg, -self.lo, self.lo))

    def __add__(self, other) -> "DD":
        b = DD.coerce(other)
        s, e = _two_sum(self.hi, b.hi)
        t, f = _two_sum(self.lo, b.lo)
        e = e + t
        s, e = _quick_two_sum(s, e)
        e = e + f
        s, e = _quick_two_sum(s, e)
        return DD(s, e)

    __radd__ = __add__

    def __sub__(self, other) -> "DD":
        return self + (-DD.coerce(other))

    def __rsub__(self, other) -> "DD":
        return DD.coerce(other) + (-self)

    def __mul__(self, other) -> "DD":
        b = DD.coerce(other)
        p, e = _two_prod(self.hi, b.hi)
        e = e + (self.hi * b.lo + self.lo * b.hi)
        p, e = _quick_two_sum(p, e)
        return DD(p, e)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "DD":
        b = DD.coerce(other)
        q1 = self.hi / b.hi
        r = self - b * q1
        q2 = r.hi / b.hi
        r = r - b * q2
        q3 = r.hi / b.hi
        q1, q2 = _quick_two_sum(q1, q2)
        return DD(q1, q2) + q3

    def __rtruediv__(self, other) -> "DD":
        return DD.coerce(other) / self

    def __pow__(self, k: int) -> "DD":
        if not isinstance(k, (int, np.integer)) or k < 0:
            raise ValueError("DD supports non-negative integer powers only")
        out = DD(np.ones_like(self.hi))
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def ldexp(self, k) -> "DD":
        return DD(np.ldexp(self.hi, k), np.ldexp(self.lo, k))

    # comparisons give plain boolean arrays

    def sign(self):
        return np.where(self.hi != 0, np.sign(self.hi), np.sign(self.lo))

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __lt__(self, other):
        return (self - other).sign() < 0


@lru_cache(maxsize=None)
def const(q) -> DD:
    """Cached double-double constant from a decimal string or Fraction."""
    return DD.from_fraction(Fraction(q))


LN2 = DD(0.6931471805599453, 2.3190468138462996e-17)
_INV_FACT = [DD.from_fraction(Fraction(1, _k)) for _k in (1, 1, 2, 6, 24, 120, 720, 5040, 40320,
                                                           362880, 3628800, 39916800, 479001600,
                                                           6227020800)]
_EXP_SQUARINGS = 8


def exp(a) -> DD:
    """exp of a DD array (argument reduction by ln 2 and 2**-8, Taylor, squaring)."""
    a = DD.coerce(a)
    k = np.rint(a.hi / LN2.hi)
    r = (a - LN2 * k).ldexp(-_EXP_SQUARINGS)
    # expm1(r) by Horner on 1/j!
    e = _INV_FACT[13]
    for j in range(12, 0, -1):
        e = e * r + _INV_FACT[j]
    e = e * r
    for _ in range(_EXP_SQUARINGS):
        e = e * (e + 2.0)  # expm1(2r) = expm1(r) * (expm1(r) + 2)
    return (e + 1.0).ldexp(k.astype(np.int64))


def log(a) -> DD:
    """Natural log of a positive DD array: float seed plus one Newton step."""
    a = DD.coerce(a)
    if np.any(a.hi <= 0):
        raise ValueError("log of non-positive double-double")
    y = np.log(a.hi)
    t = a * exp(DD(-y)) - 1.0
    # log1p(t) = t - t^2/2 + O(t^3); |t| ~ 1e-16
    return DD(y) + (t - t * t * 0.5)


def li_series(log_x: DD, gamma: DD, tol: float = 1e-35, max_terms: int = 500):
    """li(x) = gamma + log log x + sum_{k>=1} log^k x / (k k!), vectorised.

    Takes ``log x`` (> 0) rather than x so that li(x^2) can be evaluated from
    ``2 log x`` without forming x^2.  Returns ``(value, n_terms, tail)`` with
    ``tail`` a float bound on the omitted terms.
    """
    L = DD.coerce(log_x)
    if np.any(L.hi <= 0):
        raise ValueError("li series needs log x > 0")
    lmax = float(np.max(L.hi))
    term = L  # L^k / k!
    total = L  # k = 1 term: L / 1
    k = 1
    while True:
        k += 1
        term = term * L / float(k)
        contrib = term / float(k)
        total = total + contrib
        ratio = np.max(np.abs(contrib.hi) / np.abs(total.hi))
        # beyond k > 2 L the terms shrink geometrically by at least 1/2
        if (k > 2.0 * lmax and ratio < tol) or k >= max_terms:
            break
    tail = np.abs(contrib.hi)
    return gamma + log(L) + total, k, tail
