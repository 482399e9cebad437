"""Logarithmic integral and the helper functions used by the expansions."""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from ..errors import DomainError
from . import dd
from .dd import DD, EPS
from .xreal import XReal, xlog

EULER_GAMMA = "0.57721566490153286060651209008240243104215933593992"
BIGFLOAT_DPS = 60

_GAMMA_DD = dd.const(EULER_GAMMA)
_GAMMA_ERR = abs(float(Fraction(EULER_GAMMA) - _GAMMA_DD.to_fraction())) + 1e-50


def _check_mode(mode: str) -> None:
    if mode not in ("dd", "bigfloat"):
        raise ValueError(f"precision mode must be 'dd' or 'bigfloat', got {mode!r}")


def li_series_mp(L, tol_digits: int = BIGFLOAT_DPS):
    """li from log x in mpmath: gamma + log L + sum L^k/(k k!). Returns (value, tail)."""
    L = mpmath.mpf(L)
    term = L
    total = L
    k = 1
    eps = mpmath.mpf(10) ** (-tol_digits)
    while True:
        k += 1
        term = term * L / k
        contrib = term / k
        total += contrib
        if k > 2 * L and contrib < eps * total:
            break
    return mpmath.euler + mpmath.log(L) + total, contrib


def _li_from_log(L: XReal, x_over_log: float, mode: str) -> XReal:
    """li given log x as a ball; ``x_over_log`` is dli/dL = x/log x for error propagation."""
    if mode == "bigfloat":
        with mpmath.workdps(BIGFLOAT_DPS):
            v, tail = li_series_mp(L.to_mpf())
            err = tail + abs(v) * mpmath.mpf(10) ** (-(BIGFLOAT_DPS - 5))
            return XReal.from_mpf(v, float(err) + L.err * x_over_log)
    value, k, tail = dd.li_series(L.dd, _GAMMA_DD)
    v = abs(float(value.hi[()]))
    err = float(tail) + k * v * 8 * EPS + _GAMMA_ERR + L.err * x_over_log * (1 + 1e-12)
    return XReal(float(value.hi[()]), float(value.lo[()]), err)


def _as_ball(x) -> XReal:
    return XReal.of(x)


def li(x, mode: str = "dd") -> XReal:
    """Logarithmic integral (principal value) for real x >= 2."""
    _check_mode(mode)
    X = _as_ball(x)
    if float(X) - X.err < 2:
        raise DomainError(f"li is only provided for x >= 2, got {float(X)}")
    if mode == "bigfloat":
        with mpmath.workdps(BIGFLOAT_DPS):
            L = mpmath.log(X.to_mpf())
            xl = float(X) / float(L)
            return _li_from_log(XReal.from_mpf(L, X.err / (float(X) - X.err)), xl, mode)
    L = xlog(X)
    return _li_from_log(L, float(X) / float(L), mode)


def li_square(x, mode: str = "dd") -> XReal:
    """li(x^2) for x >= 2, evaluated from 2 log x (x^2 is never formed)."""
    _check_mode(mode)
    X = _as_ball(x)
    if float(X) - X.err < 2:
        raise DomainError(f"li_square is only provided for x >= 2, got {float(X)}")
    if mode == "bigfloat":
        with mpmath.workdps(BIGFLOAT_DPS):
            L = 2 * mpmath.log(X.to_mpf())
            xl = float(X) ** 2 / float(L)
            return _li_from_log(XReal.from_mpf(L, 2 * X.err / (float(X) - X.err)), xl, mode)
    L = xlog(X) * 2
    return _li_from_log(L, float(X) ** 2 / float(L), mode)


def li_truncation_coefficients(n_terms: int, square: bool = False) -> list[Fraction]:
    """Coefficients c_j of the truncated expansion sum_j c_j * X / log^j x.

    With ``square=False``, X = x and c_j = (j-1)!.  With ``square=True`` the
    expansion of li(x^2) is rewritten in powers of log x: X = x^2 and
    c_j = (j-1)! / 2^j.
    """
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    return [Fraction(math.factorial(j - 1), 2 ** j if square else 1) for j in range(1, n_terms + 1)]


def li_truncation(x, n_terms: int, mode: str = "dd") -> XReal:
    """Truncated asymptotic expansion sum_{j=1}^{n} (j-1)! x / log^j x (x > 1)."""
    _check_mode(mode)
    X = _as_ball(x)
    if float(X) <= 1:
        raise DomainError("li_truncation needs x > 1")
    if n_terms < 1:
        raise DomainError("n_terms must be >= 1")
    if mode == "bigfloat":
        with mpmath.workdps(BIGFLOAT_DPS):
            xv = X.to_mpf()
            L = mpmath.log(xv)
            s = mpmath.fsum(mpmath.factorial(j - 1) * xv / L ** j for j in range(1, n_terms + 1))
            return XReal.from_mpf(s, abs(s) * 1e-50 + X.err * n_terms * float(s / xv) * 4)
    L = xlog(X)
    total = XReal(0.0)
    inv = X / L
    for j in range(1, n_terms + 1):
        total = total + inv * math.factorial(j - 1)
        inv = inv / L
    return total


def helper_h_g_c(n, m: int, mode: str = "dd") -> tuple[XReal, XReal, XReal]:
    """(h_m(n), g(n), c_m(n)) for real n >= 3.

    h_m(n) = sum_{j=1}^m (j-1)!/(2^j log^j n),
    g(n)   = log n + log log n - 3/2,
    c_m(n) = n (log log n)^{m+1} / log^{m+1} n.
    """
    _check_mode(mode)
    if m < 0:
        raise DomainError("order m must be >= 0")
    N = _as_ball(n)
    if float(N) < 3:
        raise DomainError(f"helpers need n >= 3, got {float(N)}")
    if mode == "bigfloat":
        with mpmath.workdps(BIGFLOAT_DPS):
            nv = N.to_mpf()
            L = mpmath.log(nv)
            LL = mpmath.log(L)
            h = mpmath.fsum(mpmath.factorial(j - 1) / (2 ** j * L ** j) for j in range(1, m + 1))
            g = L + LL - mpmath.mpf(3) / 2
            c = nv * LL ** (m + 1) / L ** (m + 1)
            tol = mpmath.mpf(10) ** (-(BIGFLOAT_DPS - 5))
            return (XReal.from_mpf(h, abs(h) * tol), XReal.from_mpf(g, abs(g) * tol),
                    XReal.from_mpf(c, abs(c) * tol))
    L = xlog(N)
    LL = xlog(L)
    h = XReal(0.0)
    for j in range(1, m + 1):
        h = h + XReal.of(Fraction(math.factorial(j - 1), 2 ** j)) / L ** j
    g = L + LL - XReal.of(Fraction(3, 2))
    c = N * LL ** (m + 1) / L ** (m + 1)
    return h, g, c


def li_dd_array(log_x: np.ndarray | DD) -> DD:
    """Vectorised li from log x (double-double), used by the bound kernel."""
    value, _, _ = dd.li_series(DD.coerce(log_x), _GAMMA_DD)
    return value
