"""Numeric backends for evaluating bound formulas at many points.

A bound formula is written once against a backend ``B`` and a lazy variable
bag ``v``; the same code then runs in three tiers:

* ``FloatBackend``  - numpy float64, used as a fast screen;
* ``DDBackend``     - vectorised double-double, the default arbiter;
* ``MPBackend``     - mpmath big floats, one point at a time, for disputes.

Each backend carries ``rel_tol``: the radius assigned to a margin is
``rel_tol * (|lhs| + |rhs|)``, far above the worst rounding of the formulas
in the catalog (at most a few dozen operations, no catastrophic cancellation
beyond a factor ~10).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import special

from . import dd
from .dd import DD
from .functions import BIGFLOAT_DPS, li_dd_array, li_series_mp


class FloatBackend:
    name = "float64"
    rel_tol = 1e-11

    def num(self, ints):
        return np.asarray(ints).astype(np.float64)

    def real(self, xs):
        return np.asarray(xs, dtype=np.float64)

    @staticmethod
    @lru_cache(maxsize=None)
    def c(q) -> float:
        return float(Fraction(q))

    log = staticmethod(np.log)
    exp = staticmethod(np.exp)

    @staticmethod
    def li_of_log(L):
        return special.expi(L)

    @staticmethod
    def to_float(v):
        return np.asarray(v, dtype=np.float64)


class DDBackend:
    name = "double-double"
    rel_tol = 1e-26

    def num(self, ints):
        return DD.from_int(np.asarray(ints))

    def real(self, xs):
        # reals reach the kernel as Fractions (object array) or floats
        a = np.asarray(xs)
        if a.dtype == object:
            his, los = [], []
            for q in a.ravel():
                d = DD.from_fraction(Fraction(q))
                his.append(float(d.hi))
                los.append(float(d.lo))
            return DD(np.array(his).reshape(a.shape), np.array(los).reshape(a.shape))
        return DD(a.astype(np.float64))

    @staticmethod
    def c(q) -> DD:
        return dd.const(q)

    log = staticmethod(dd.log)
    exp = staticmethod(dd.exp)
    li_of_log = staticmethod(li_dd_array)

    @staticmethod
    def to_float(v):
        return DD.coerce(v).to_float()


class MPBackend:
    """Scalar mpmath backend; callers loop over points."""

    name = "bigfloat"
    rel_tol = 1e-50
    dps = BIGFLOAT_DPS

    def num(self, i):
        return mpmath.mpf(int(i))

    def real(self, x):
        q = Fraction(x)
        return mpmath.mpf(q.numerator) / q.denominator

    @staticmethod
    def c(q):
        q = Fraction(q)
        return mpmath.mpf(q.numerator) / q.denominator

    log = staticmethod(mpmath.log)
    exp = staticmethod(mpmath.exp)

    @staticmethod
    def li_of_log(L):
        return li_series_mp(L, tol_digits=BIGFLOAT_DPS)[0]

    @staticmethod
    def to_float(v):
        return float(v)


FLOAT = FloatBackend()
DOUBLE_DOUBLE = DDBackend()
BIGFLOAT = MPBackend()


class Vars:
    """Lazy bag of formula inputs; derived logarithms are computed on first use.

    Base names: ``n``, ``p``, ``S`` (prime-index entries) or ``x`` (real
    entries).  Derived: ``L = log n``, ``LL = log log n``, ``z = log p``,
    ``lx = log x``.
    """

    _DERIVED = {"L": "n", "LL": "L", "z": "p", "lx": "x"}

    def __init__(self, backend, **base):
        self.B = backend
        self.__dict__.update(base)

    def __getattr__(self, name):
        src = self._DERIVED.get(name)
        if src is None:
            raise AttributeError(name)
        val = self.B.log(getattr(self, src))
        self.__dict__[name] = val
        return val
