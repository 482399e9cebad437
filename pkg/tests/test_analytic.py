import math
import random
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from primesums.analytic import DD, XReal, helper_h_g_c, li, li_square, li_truncation, li_truncation_coefficients
from primesums.analytic.xreal import xexp, xlog
from primesums.errors import DomainError

mpmath.mp.dps = 40


# ---- quadrature oracle (independent of the series used by the library) ----

def li2_by_principal_value():
    # PV int_0^2 dt/log t = int_0^2 (1/log t - 1/(t-1)) dt, since PV int_0^2 dt/(t-1) = 0
    with mpmath.workdps(40):
        f = lambda t: 1 / mpmath.log(t) - 1 / (t - 1) if t != 1 else mpmath.mpf(1) / 2
        return mpmath.quad(f, [0, mpmath.mpf("0.5"), 1, 2])


LI2 = li2_by_principal_value()


def li_quadrature(x):
    with mpmath.workdps(40):
        x = mpmath.mpf(x)
        pts = [mpmath.mpf(2)]
        while pts[-1] * 8 < x:
            pts.append(pts[-1] * 8)
        pts.append(x)
        return LI2 + mpmath.quad(lambda t: 1 / mpmath.log(t), pts)


def test_principal_value_offset():
    assert abs(LI2 - mpmath.mpf("1.04516378011749278484458888919461")) < mpmath.mpf(10) ** -25


def test_li_at_2():
    v = li(2)
    assert abs(float(v) - 1.04516) <= 1e-5
    assert v.contains(LI2)


@pytest.mark.parametrize("x", [10**2, 10**4, 10**6, 10**9])
@pytest.mark.parametrize("mode", ["dd", "bigfloat"])
def test_li_matches_quadrature(x, mode):
    q = li_quadrature(x)
    v = li(x, mode=mode)
    assert abs(v.to_mpf() - q) / q <= 1e-12


def test_li_square_at_1e18_via_quadrature():
    q = li_quadrature(mpmath.mpf(10) ** 18)
    v = li_square(10**9)
    assert abs(v.to_mpf() - q) / q <= 1e-12


def test_li_at_e_and_square_at_2():
    with mpmath.workdps(40):
        assert li(Fraction(2718281828459045, 10**15)).to_mpf() == pytest.approx(
            float(li_quadrature(mpmath.mpf(2718281828459045) / 10**15)), rel=1e-14)
    a, b = li_square(2), li(4)
    assert abs(float(a) - float(b)) <= a.err + b.err + 1e-28


def test_li_domain():
    with pytest.raises(DomainError):
        li(Fraction(3, 2))
    with pytest.raises(DomainError):
        li_square(1)


def test_li_monotone_and_square_dominates():
    xs = [2 + k * 0.37 for k in range(40)] + [10**k for k in range(1, 12)]
    vals = [float(li(Fraction(x))) for x in sorted(xs)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    for x in (3, 10, 1000, 10**7):
        assert li_square(x) > li(x)


@pytest.mark.parametrize("x", [2, 10, 1234567, 10**12])
def test_li_radius_is_sound(x):
    # the dd radius must contain the 60-digit value
    v = li(x)
    w = li(x, mode="bigfloat")
    assert v.contains(w.to_mpf())
    assert v.err < 1e-20 * float(v)


def _pairs(seed, k=100):
    rng = random.Random(seed)
    out = []
    for _ in range(k):
        a = 2 + rng.random() * 50
        x = a + rng.random() * 10 ** rng.uniform(0, 4)
        out.append((Fraction(a).limit_denominator(1000), Fraction(x).limit_denominator(1000)))
    return out


def test_integral_identity_t_over_log():
    # int_a^x t/log t dt = li(x^2) - li(a^2)
    for a, x in _pairs(1):
        with mpmath.workdps(30):
            q = mpmath.quad(lambda t: t / mpmath.log(t), [mpmath.mpf(a.numerator) / a.denominator,
                                                           mpmath.mpf(x.numerator) / x.denominator])
        rhs = li_square(x) - li_square(a)
        assert abs(float(q) - float(rhs)) <= rhs.err + 1e-18 * abs(float(q))


def test_integral_identity_t_over_log_squared():
    # int_a^x t/log^2 t dt = 2 li(x^2) - 2 li(a^2) - x^2/log x + a^2/log a
    for a, x in _pairs(2):
        with mpmath.workdps(30):
            A = mpmath.mpf(a.numerator) / a.denominator
            Xv = mpmath.mpf(x.numerator) / x.denominator
            q = mpmath.quad(lambda t: t / mpmath.log(t) ** 2, [A, Xv])
        X, Aa = XReal.of(x), XReal.of(a)
        rhs = 2 * (li_square(x) - li_square(a)) - X * X / xlog(X) + Aa * Aa / xlog(Aa)
        assert abs(float(q) - float(rhs)) <= rhs.err + 1e-18 * abs(float(q))


def test_truncation_coefficients_for_li_square():
    c = li_truncation_coefficients(8, square=True)
    shown = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), Fraction(3, 8), Fraction(3, 4), Fraction(15, 8),
             Fraction(45, 8)]
    assert c[:7] == shown
    assert c[7] == Fraction(315, 16)
    # the eighth coefficient as displayed in the source is 5/4 of the expansion's value
    assert Fraction(1575, 64) / c[7] == Fraction(5, 4)


def test_truncation_values():
    e = Fraction(2718281828459045235360287, 10**24)
    assert float(li_truncation(e, 1)) == pytest.approx(float(e), rel=1e-20)
    x = 10**6
    gap = float(li(x)) - float(li_truncation(x, 3))
    scale = x / math.log(x) ** 4
    # remainder is of the size of the next term, 3! x/log^4 x
    assert 0 < gap / scale < 12


def test_helpers():
    n = mpmath.e ** mpmath.e
    with mpmath.workdps(40):
        nq = Fraction(str(mpmath.nstr(n, 35)))
    h, g, c = helper_h_g_c(nq, 1)
    assert float(g) == pytest.approx(math.e - 0.5, rel=1e-14)
    assert float(h) == pytest.approx(1 / (2 * math.e), rel=1e-14)
    assert float(c) == pytest.approx(float(n) / math.e**2, rel=1e-14)
    h0, _, _ = helper_h_g_c(100, 0)
    assert float(h0) == 0
    with pytest.raises(DomainError):
        helper_h_g_c(2, 1)
    hd, gd, cd = helper_h_g_c(10**6, 2)
    hb, gb, cb = helper_h_g_c(10**6, 2, mode="bigfloat")
    with mpmath.workdps(50):
        L = mpmath.log(10**6)
        LL = mpmath.log(L)
        assert hd.contains(1 / (2 * L) + 1 / (4 * L**2)) and hb.contains(1 / (2 * L) + 1 / (4 * L**2))
        assert gd.contains(L + LL - mpmath.mpf(3) / 2)
        assert cd.contains(10**6 * LL**3 / L**3)


# ---- double-double kernel against exact rationals ----

finite = st.floats(min_value=-1e12, max_value=1e12, allow_nan=False, allow_infinity=False)


def _dd_exact(d: DD) -> Fraction:
    return Fraction(float(d.hi)) + Fraction(float(d.lo))


@given(finite, finite, finite, finite)
def test_dd_add_mul_are_accurate(a, b, c, d):
    x = DD(np.float64(a)) + DD(np.float64(b))
    y = DD(np.float64(c)) + DD(np.float64(d))
    X, Y = Fraction(a) + Fraction(b), Fraction(c) + Fraction(d)
    s = _dd_exact(x + y)
    assert abs(s - (_dd_exact(x) + _dd_exact(y))) <= abs(s) * Fraction(1, 2**100) + Fraction(1, 2**1000)
    p = _dd_exact(x * y)
    exact = _dd_exact(x) * _dd_exact(y)
    assert abs(p - exact) <= abs(exact) * Fraction(1, 2**100) + Fraction(1, 2**1000)


@given(st.integers(min_value=-(2**62) + 1, max_value=2**62 - 1))
def test_dd_from_int_exact(v):
    assert _dd_exact(DD.from_int(v)) == v
    assert _dd_exact(DD.from_int(np.array([v], dtype=np.int64))[0]) == v


@settings(max_examples=60)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=10**9, max_denominator=10**6))
def test_xreal_log_exp_contain_truth(q):
    x = XReal.of(q)
    with mpmath.workdps(50):
        t = mpmath.mpf(q.numerator) / q.denominator
        assert xlog(x).contains(mpmath.log(t))
        if q < 600:
            assert xexp(x).contains(mpmath.exp(t))


@settings(max_examples=60)
@given(st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4),
       st.fractions(min_value=-10**6, max_value=10**6, max_denominator=10**4))
def test_xreal_arithmetic_contains_truth(a, b):
    A, B = XReal.of(a), XReal.of(b)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b != 0:
        assert (A / B).contains(a / b)
