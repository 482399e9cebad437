"""Catalog of explicit inequalities on p_n, sum p_k, B_n, pi(x) and S(x).

Each entry pairs two BoundExpr sides with a comparison sense.  A BoundExpr
is a function ``f(B, v)`` written once against a numeric backend ``B``
(float64, double-double or mpmath) and a lazy variable bag ``v``:

* prime-index entries (``variable == "n"``) see ``v.n, v.p, v.S, v.twoB``
  and the derived ``v.L = log n``, ``v.LL = log log n``, ``v.z = log p_n``;
* step-function entries (``variable == "x"``) see ``v.x``, the exact step
  value ``v.T`` (S(x) or pi(x)) and ``v.lx = log x``;
* continuous entries (``variable == "real"``) see ``v.x`` only.

The margin of an entry is oriented so that the inequality holds exactly
when the margin respects the sense: positive for strict senses,
non-negative for ``>=`` / ``<=``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from difflib import get_close_matches
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping

import mpmath
import numpy as np

from .analytic.backends import BIGFLOAT, DOUBLE_DOUBLE, FLOAT, Vars
from .analytic.xreal import XReal
from .errors import DomainError, UnknownInequalityError
from .exactq import RatPolynomial

STRICT = {">": True, "<": True, ">=": False, "<=": False}
LOWER_SENSES = (">", ">=")  # lhs is bounded from below


@dataclass(frozen=True)
class BoundExpr:
    description: str
    fn: Callable = field(compare=False, repr=False)

    def __call__(self, B, v):
        return self.fn(B, v)


@dataclass(frozen=True)
class InequalityEntry:
    id: str
    citation: str
    statement: str
    variable: str  # "n", "x" or "real"
    sense: str
    claimed_threshold: int | Fraction | None
    eval_domain_min: int | Fraction
    lhs: BoundExpr
    rhs: BoundExpr
    step: str | None = None  # "S" or "pi" for x-entries
    exact: Callable | None = field(default=None, compare=False, repr=False)
    full_scale_only: bool = False
    refuted: bool = False
    upper_limit: str | None = None
    params: Mapping = field(default_factory=dict)
    notes: str = ""

    @property
    def strict(self) -> bool:
        return STRICT[self.sense]

    @property
    def is_lower(self) -> bool:
        """True when the inequality bounds its left-hand side from below."""
        return self.sense in LOWER_SENSES

    def oriented(self, lhs, rhs):
        return lhs - rhs if self.is_lower else rhs - lhs

    def to_json(self) -> dict:
        def num(q):
            if q is None:
                return None
            q = Fraction(q)
            return int(q) if q.denominator == 1 else str(q)

        return {"id": self.id, "citation": self.citation, "statement": self.statement,
                "variable": self.variable, "sense": self.sense,
                "claimed_threshold": num(self.claimed_threshold),
                "eval_domain_min": num(self.eval_domain_min), "step": self.step,
                "exact_integer": self.exact is not None, "full_scale_only": self.full_scale_only,
                "refuted": self.refuted, "upper_limit": self.upper_limit,
                "params": dict(self.params), "notes": self.notes}


# ---------------------------------------------------------------------------
# formula helpers (backend-generic)
# ---------------------------------------------------------------------------


def _inv_log_series(B, X, l, coeffs, first: int = 1):
    """X * sum_j coeffs[j] / l^(first + j), by Horner in 1/l."""
    inv = 1 / l
    acc = B.c(coeffs[-1])
    for c in reversed(coeffs[:-1]):
        acc = acc * inv + B.c(c)
    return X * acc * inv ** first


def _sq(v_x):
    return v_x * v_x


def _B_main(B, v):
    """n^2/4 + n^2/(4 log n)."""
    n2 = _sq(v.n)
    return n2 / 4 + n2 / (4 * v.L)


def _sum_main(B, v, tail):
    """n^2/2 (log n + log log n + tail)."""
    return _sq(v.n) / 2 * (v.L + v.LL + tail)


def _half(B, x):
    return x / 2


def r_poly() -> RatPolynomial:
    """r(x) = 35.4 x^3 + 213.9 x^2 + 1478.78 x + 30199.015."""
    return RatPolynomial(["30199.015", "1478.78", "213.9", "35.4"])


_R = r_poly()


def _rho(B, v):
    L, z, LL = v.L, v.z, v.LL
    L2, z2 = L * L, z * z
    z3 = z2 * z
    return (B.c("2.1") * L2 / (4 * z2)
            + (z2 * L2 + B.c("16.3") * L2 - z3 * L + z3 * LL) / (4 * z3))


def _kappa(B, v):
    L, z, LL = v.L, v.z, v.LL
    L2, z2 = L * L, z * z
    r = _R.horner(z, const=B.c)
    return ((z * L2 + B.c("4.9") * L2 - z2 * L + z2 * LL) / (4 * z2)
            + r * L2 / (8 * z2 * z2 * z2))


THETA_COEFFS = [Fraction("43.6") / 8, Fraction("90.9") / 4, Fraction("927.5") / 8,
                Fraction("5620.5") / 8, Fraction("79075.5") / 16]
OMEGA_COEFFS = [Fraction("46.4") / 8, Fraction("95.1") / 4, Fraction("962.5") / 8,
                Fraction("5809.5") / 8, Fraction(59424, 8)]
THETA_OMEGA_POWERS = (4, 5, 6, 7, 8)


def _theta(B, v):
    return _inv_log_series(B, _sq(v.p), v.z, THETA_COEFFS, first=4)


def _omega(B, v):
    return _inv_log_series(B, _sq(v.p), v.z, OMEGA_COEFFS, first=4)


def _np_minus_sum_main(B, v):
    """p^2/(2z) + 3p^2/(4z^2) + 7p^2/(4z^3)."""
    return _inv_log_series(B, _sq(v.p), v.z, [Fraction(1, 2), Fraction(3, 4), Fraction(7, 4)])


# ---------------------------------------------------------------------------
# entry constructors
# ---------------------------------------------------------------------------

_LHS_B = BoundExpr("B_n = n p_n / 2 - sum_{k<=n} p_k", lambda B, v: v.twoB / 2)
_LHS_SUM = BoundExpr("sum_{k<=n} p_k", lambda B, v: v.S)
_LHS_P = BoundExpr("p_n", lambda B, v: v.p)
_LHS_S = BoundExpr("S(x) = sum_{p<=x} p", lambda B, v: v.T)
_LHS_PI = BoundExpr("pi(x)", lambda B, v: v.T)


def _n_entry(id, citation, statement, sense, threshold, lhs, rhs_desc, rhs_fn, domain=2, **kw):
    return InequalityEntry(id, citation, statement, "n", sense, threshold, domain, lhs,
                           BoundExpr(rhs_desc, rhs_fn), **kw)


def _x_entry(id, citation, statement, sense, threshold, step, rhs_desc, rhs_fn, domain=2, **kw):
    lhs = _LHS_S if step == "S" else _LHS_PI
    return InequalityEntry(id, citation, statement, "x", sense, threshold, domain, lhs,
                           BoundExpr(rhs_desc, rhs_fn), step=step, **kw)


def _series_entry(id, citation, statement, sense, threshold, coeffs, power=2, **kw):
    """S(x) or pi(x) against  x^power * sum_j coeffs[j] / log^(j+1) x."""
    step = "S" if power == 2 else "pi"

    def f(B, v):
        X = _sq(v.x) if power == 2 else v.x
        return _inv_log_series(B, X, v.lx, coeffs)

    return _x_entry(id, citation, statement, sense, threshold, step, statement.split(" ", 2)[-1], f, **kw)


def _pi_denominator_entry(id, citation, statement, sense, threshold, a, **kw):
    """pi(x) against x / (log x - 1 - a[0]/log x - a[1]/log^2 x - ...)."""

    def f(B, v):
        l = v.lx
        tail = _inv_log_series(B, 1, l, a)
        return v.x / (l - 1 - tail)

    return _x_entry(id, citation, statement, sense, threshold, "pi", statement.split(" ", 2)[-1], f,
                    domain=threshold, **kw)


def _li_relative_entry(id, citation, statement, sense, threshold, coeffs, sign):
    """S(x) against li(x^2) + sign * x^2 * sum_j coeffs[j] / log^(j+4) x."""

    def f(B, v):
        li2 = B.li_of_log(2 * v.lx)
        corr = _inv_log_series(B, _sq(v.x), v.lx, coeffs, first=4)
        return li2 + corr if sign > 0 else li2 - corr

    return _x_entry(id, citation, statement, sense, threshold, "S", statement.split(" ", 2)[-1], f)


def _exact(fn):
    """Wrap an integer margin function of (n, p, S, twoB)."""
    return fn


# literature attributions (no page references)
_MANDL = "Mandl's inequality (conjectured by Mandl, proved by Dusart)"
_SUN = "Sun (2012)"
_HASSANI = "Hassani (2013)"
_MR = "Massias and Robin (1996)"
_MNR = "Massias, Nicolas and Robin (1989)"
_DUSART = "Dusart"
_RS = "Rosser and Schoenfeld (1962)"
_AXLER_PI = "Axler (2016), explicit bounds for pi(x)"
_AXLER_SUM = "Axler (2015), bounds for n p_n - sum p_k"
_NEW = "explicit estimate derived from the T_s / V_s expansions"
_SINHA = "Sinha (2010), conjectured lower bound for B_n"


def eq_6_3_entry(eps: Fraction | str | float = Fraction(1, 2)) -> InequalityEntry:
    """S(x) < x^2/(2 log x) + x^2/(4 log^2 x) + x^2/(4 log^3 x) + (3+eps) x^2/(8 log^4 x)."""
    eps = Fraction(eps) if not isinstance(eps, float) else Fraction(str(eps))
    coeffs = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 4), (3 + eps) / 8]
    return _series_entry("eq_6_3_family", "asymptotic consequence of S(x) ~ li(x^2)",
                         f"S(x) < x^2/(2l) + x^2/(4l^2) + x^2/(4l^3) + (3+{eps})x^2/(8l^4)", "<",
                         None, coeffs, params={"eps": str(eps)},
                         notes="holds for x beyond some x0(eps); no threshold is claimed")


def _build_catalog() -> dict[str, InequalityEntry]:
    F = Fraction
    E: list[InequalityEntry] = []

    # --- B_n, exact integer forms -------------------------------------------------
    E.append(_n_entry("mandl", _MANDL, "n p_n / 2 >= sum_{k<=n} p_k for n >= 9", ">=", 9,
                      BoundExpr("n p_n / 2", lambda B, v: v.n * v.p / 2),
                      "sum_{k<=n} p_k", lambda B, v: v.S, domain=1,
                      exact=_exact(lambda n, p, S, twoB: twoB)))
    E.append(_n_entry("sun_quarter", _SUN, "B_n > n^2/4 for n >= 417", ">", 417, _LHS_B,
                      "n^2/4", lambda B, v: _sq(v.n) / 4, domain=1,
                      exact=_exact(lambda n, p, S, twoB: 2 * twoB - n * n)))
    E.append(_n_entry("hassani_twelfth", _HASSANI, "B_n > n^2/12 for n >= 10", ">", 10, _LHS_B,
                      "n^2/12", lambda B, v: _sq(v.n) / 12, domain=1,
                      exact=_exact(lambda n, p, S, twoB: 6 * twoB - n * n)))
    E.append(_n_entry("hassani_upper", _HASSANI, "B_n < 9n^2/4 for n >= 2", "<", 2, _LHS_B,
                      "9n^2/4", lambda B, v: 9 * _sq(v.n) / 4, domain=1,
                      exact=_exact(lambda n, p, S, twoB: 9 * n * n - 2 * twoB)))

    # --- B_n, analytic forms -------------------------------------------------------
    E.append(_n_entry("cor_4_8", _NEW, "B_n > n^2/4 + n^2/(4L) - n^2(LL - 2.1)/(4L^2) for n >= 348247",
                      ">", 348247, _LHS_B, "n^2/4 + n^2/(4L) - n^2(LL - 2.1)/(4L^2)",
                      lambda B, v: _B_main(B, v) - _sq(v.n) * (v.LL - B.c("2.1")) / (4 * v.L * v.L)))
    E.append(_n_entry("cor_4_10", _NEW, "B_n < n^2/4 + n^2/(4L) - n^2(LL - 5.22)/(4L^2) for n >= 26220",
                      "<", 26220, _LHS_B, "n^2/4 + n^2/(4L) - n^2(LL - 5.22)/(4L^2)",
                      lambda B, v: _B_main(B, v) - _sq(v.n) * (v.LL - B.c("5.22")) / (4 * v.L * v.L)))
    E.append(_n_entry("thm_4_7", _NEW,
                      "B_n > n^2/4 + n^2/(4L) - n^2 LL/(4L^2) + rho(n) n^2/L^2 for n >= 842857",
                      ">", 842857, _LHS_B, "n^2/4 + n^2/(4L) - n^2 LL/(4L^2) + rho(n) n^2/L^2",
                      lambda B, v: _B_main(B, v) + _sq(v.n) * (_rho(B, v) - v.LL / 4) / (v.L * v.L)))
    E.append(_n_entry("thm_4_9", _NEW,
                      "B_n < n^2/4 + n^2/(4L) - n^2 LL/(4L^2) + kappa(n) n^2/L^2 for n >= 2",
                      "<", 2, _LHS_B, "n^2/4 + n^2/(4L) - n^2 LL/(4L^2) + kappa(n) n^2/L^2",
                      lambda B, v: _B_main(B, v) + _sq(v.n) * (_kappa(B, v) - v.LL / 4) / (v.L * v.L)))
    E.append(_n_entry("sinha_4_18", _SINHA,
                      "B_n > n^2/4 + n^2/(2L) - n^2 LL/(4L^2) claimed for n >= 835", ">", 835, _LHS_B,
                      "n^2/4 + n^2/(2L) - n^2 LL/(4L^2)",
                      lambda B, v: _sq(v.n) / 4 + _sq(v.n) / (2 * v.L) - _sq(v.n) * v.LL / (4 * v.L * v.L),
                      refuted=True, notes="false already at n = 835; kept as a known counterexample"))

    # --- p_n and log p_n ---------------------------------------------------------
    E.append(_n_entry("lemma_4_5", "consequence of p_n < n(log n + log log n)",
                      "log n >= 0.75 log p_n for n >= 255", ">=", 255,
                      BoundExpr("log n", lambda B, v: v.L), "0.75 log p_n",
                      lambda B, v: B.c("0.75") * v.z, domain=1))
    E.append(_n_entry("lemma_4_6", "auxiliary inequality between n, p_n and log p_n",
                      "927 p^2 z + 5620 p^2 > 756 n p z^2 + 117 n^2 z^3 for n >= 1", ">", 1,
                      BoundExpr("927 p^2 z + 5620 p^2", lambda B, v: _sq(v.p) * (927 * v.z + 5620)),
                      "756 n p z^2 + 117 n^2 z^3",
                      lambda B, v: v.n * v.z * v.z * (756 * v.p + 117 * v.n * v.z), domain=1))
    E.append(_n_entry("eq_4_5", _DUSART, "p_n > n(log p_n - 1.1) for n >= 6077 (p_n >= 60184)", ">",
                      6077, _LHS_P, "n(log p_n - 1.1)", lambda B, v: v.n * (v.z - B.c("1.1")), domain=1))
    E.append(_n_entry("lemma_4_4", "Dusart (2010)",
                      "p_n <= n(L + LL - 1 + (LL - 2)/L) for n >= 688383", "<=", 688383, _LHS_P,
                      "n(L + LL - 1 + (LL - 2)/L)",
                      lambda B, v: v.n * (v.L + v.LL - 1 + (v.LL - 2) / v.L)))
    E.append(_n_entry("rosser_lower_pn", _RS, "p_n > n log n for n >= 1", ">", 1, _LHS_P, "n log n",
                      lambda B, v: v.n * v.L, domain=1))
    E.append(_n_entry("dusart_lower_pn", _DUSART, "p_n >= n(L + LL - 1) for n >= 2", ">=", 2, _LHS_P,
                      "n(L + LL - 1)", lambda B, v: v.n * (v.L + v.LL - 1)))
    E.append(_n_entry("rs_upper_pn", _RS, "p_n < n(L + LL) for n >= 6", "<", 6, _LHS_P, "n(L + LL)",
                      lambda B, v: v.n * (v.L + v.LL)))

    # --- sum of the first n primes ---------------------------------------------
    def second_order(const):
        def tail(B, v):
            LL, L = v.LL, v.L
            return (-B.c(F(3, 2)) + (LL - B.c(F(5, 2))) / L
                    - (LL * LL - 7 * LL + B.c(const)) / (2 * L * L))
        return tail

    t_5_2 = second_order("12.373")
    t_5_5 = second_order("17.067")
    E.append(_n_entry("cor_5_2", _NEW,
                      "sum p_k < n^2/2 (L + LL - 3/2 + (LL - 5/2)/L - (LL^2 - 7LL + 12.373)/(2L^2)) "
                      "for n >= 355147", "<", 355147, _LHS_SUM,
                      "n^2/2 (L + LL - 3/2 + (LL - 5/2)/L - (LL^2 - 7LL + 12.373)/(2L^2))",
                      lambda B, v: _sum_main(B, v, t_5_2(B, v))))
    E.append(_n_entry("cor_5_3", _NEW, "sum p_k < n^2/2 (L + LL - 3/2 + (LL - 5/2)/L) for n >= 115149",
                      "<", 115149, _LHS_SUM, "n^2/2 (L + LL - 3/2 + (LL - 5/2)/L)",
                      lambda B, v: _sum_main(B, v, -B.c(F(3, 2)) + (v.LL - B.c(F(5, 2))) / v.L)))
    E.append(_n_entry("cor_5_5", _NEW,
                      "sum p_k > n^2/2 (L + LL - 3/2 + (LL - 5/2)/L - (LL^2 - 7LL + 17.067)/(2L^2)) "
                      "for n >= 2", ">", 2, _LHS_SUM,
                      "n^2/2 (L + LL - 3/2 + (LL - 5/2)/L - (LL^2 - 7LL + 17.067)/(2L^2))",
                      lambda B, v: _sum_main(B, v, t_5_5(B, v))))
    E.append(_n_entry("mr_upper_1805", _MR, "sum p_k <= n^2/2 (L + LL - 3/2 + 1.805 LL/L) for n >= 18",
                      "<=", 18, _LHS_SUM, "n^2/2 (L + LL - 3/2 + 1.805 LL/L)",
                      lambda B, v: _sum_main(B, v, -B.c(F(3, 2)) + B.c("1.805") * v.LL / v.L)))
    E.append(_n_entry("mr_upper_1463", _MR, "sum p_k <= n^2/2 (L + LL - 1.463) for n >= 779", "<=", 779,
                      _LHS_SUM, "n^2/2 (L + LL - 1.463)", lambda B, v: _sum_main(B, v, -B.c("1.463"))))
    E.append(_n_entry("mnr_upper_1866", _MNR,
                      "sum p_k <= n^2/2 (L + LL - 3/2 + 1.866 LL/L) for n >= 3688", "<=", 3688, _LHS_SUM,
                      "n^2/2 (L + LL - 3/2 + 1.866 LL/L)",
                      lambda B, v: _sum_main(B, v, -B.c(F(3, 2)) + B.c("1.866") * v.LL / v.L)))
    E.append(_n_entry("mnr_upper_14416", _MNR, "sum p_k <= n^2/2 (L + LL - 1.4416) for n >= 3688", "<=",
                      3688, _LHS_SUM, "n^2/2 (L + LL - 1.4416)",
                      lambda B, v: _sum_main(B, v, -B.c("1.4416"))))
    E.append(_n_entry("eq_1_4_sum", f"{_MR}; unconditional via {_DUSART}",
                      "sum p_k <= n^2/2 (L + LL - 3/2 + (LL - 2.29)/L) for n >= 10134", "<=", 10134,
                      _LHS_SUM, "n^2/2 (L + LL - 3/2 + (LL - 2.29)/L)",
                      lambda B, v: _sum_main(B, v, -B.c(F(3, 2)) + (v.LL - B.c("2.29")) / v.L)))
    E.append(_n_entry("eq_1_5_sum", f"{_MR}; unconditional via {_DUSART}",
                      "sum p_k >= n^2/2 (L + LL - 3/2) for n >= 305494", ">=", 305494, _LHS_SUM,
                      "n^2/2 (L + LL - 3/2)", lambda B, v: _sum_main(B, v, -B.c(F(3, 2))),
                      upper_limit="e^530",
                      notes="originally stated for 305494 <= n <= e^530; only the lower threshold is checked"))
    E.append(_n_entry("mr_lower_15034", _MR, "sum p_k >= n^2/2 (L + LL - 1.5034) for n >= 127042", ">=",
                      127042, _LHS_SUM, "n^2/2 (L + LL - 1.5034)",
                      lambda B, v: _sum_main(B, v, -B.c("1.5034"))))
    E.append(_n_entry("mr_lower_3568", _MR, "sum p_k >= n^2/2 (L + LL - 3/2 - 3.568/L) for n >= 2", ">=", 2,
                      _LHS_SUM, "n^2/2 (L + LL - 3/2 - 3.568/L)",
                      lambda B, v: _sum_main(B, v, -B.c(F(3, 2)) - B.c("3.568") / v.L)))
    E.append(_n_entry("lemma_6_3", _AXLER_SUM,
                      "n p_n - sum p_k >= p^2/(2z) + 3p^2/(4z^2) + 7p^2/(4z^3) + Theta(n) for n >= 52703656",
                      ">=", 52703656, BoundExpr("n p_n - sum p_k", lambda B, v: v.n * v.p - v.S),
                      "p^2/(2z) + 3p^2/(4z^2) + 7p^2/(4z^3) + Theta(n)",
                      lambda B, v: _np_minus_sum_main(B, v) + _theta(B, v), domain=1,
                      full_scale_only=True))

    # --- pi(x) ---------------------------------------------------------------------
    for k, (thr, a) in enumerate([(F("21.95"), ["1", "3.35", "12.65", "89.6"]),
                                  (F("14.36"), ["1", "3.35", "15.43"]),
                                  (F("9.25"), ["1", "3.83"]),
                                  (F("5.43"), ["1.17"])], start=1):
        den = " - ".join(f"{c}/l^{j}" for j, c in enumerate(a, start=1))
        E.append(_pi_denominator_entry(f"pi_upper_4_{k}", _AXLER_PI,
                                       f"pi(x) < x/(l - 1 - {den}) for x >= {thr}", "<", thr, a))
    columns = [(["2.65", "13.35", "70.3", "455.6275", "3404.4225"], 1332479531, True),
               (["2.65", "13.35", "70.3", "69", "0"], 909050897, True),
               (["2.65", "13.35", "5", "0", "0"], 374123969, True),
               (["2.65", "4.6", "0", "0", "0"], 38168363, False),
               (["0", "0", "0", "0", "0"], 468049, False)]
    for k, (a, x0, big) in enumerate(columns, start=1):
        coeffs = ["1"] + a
        den = " - ".join(f"{c}/l^{j}" for j, c in enumerate(coeffs, start=1) if c != "0")
        E.append(_pi_denominator_entry(f"pi_lower_4_2_c{k}", _AXLER_PI,
                                       f"pi(x) > x/(l - 1 - {den}) for x >= {x0}", ">", x0, coeffs,
                                       full_scale_only=big, params={"column": k}))
    E.append(_x_entry("pi_lower_rs", _RS, "pi(x) > x/l for x >= 17", ">", 17, "pi", "x/l",
                      lambda B, v: v.x / v.lx))
    E.append(_series_entry("pi_upper_6_1", _AXLER_PI,
                           "pi(x) < x/l + x/l^2 + 2x/l^3 + 6.35x/l^4 + 24.35x/l^5 + 121.75x/l^6 "
                           "+ 730.5x/l^7 + 6801.4x/l^8 for x > 1", "<", 2,
                           ["1", "1", "2", "6.35", "24.35", "121.75", "730.5", "6801.4"], power=1,
                           notes="stated for every real x > 1; checked from x = 2"))
    E.append(_series_entry("pi_lower_6_2", _AXLER_PI,
                           "pi(x) > x/l + x/l^2 + 2x/l^3 + 5.65x/l^4 + 23.65x/l^5 + 118.25x/l^6 "
                           "+ 709.5x/l^7 + 4966.5x/l^8 for x >= 1332450001", ">", 1332450001,
                           ["1", "1", "2", "5.65", "23.65", "118.25", "709.5", "4966.5"], power=1,
                           full_scale_only=True))

    # --- S(x) ----------------------------------------------------------------------
    E.append(_series_entry("thm_6_7", _NEW,
                           "S(x) < x^2/(2l) + x^2/(4l^2) + x^2/(4l^3) + 7.2x^2/(8l^4) + 6.5x^2/(4l^5) "
                           "+ 46.5x^2/(8l^6) + 223.5x^2/(8l^7) + 14873.45x^2/(8l^8) for x >= 355992",
                           "<", 355992,
                           [F(1, 2), F(1, 4), F(1, 4), F("7.2") / 8, F("6.5") / 4, F("46.5") / 8,
                            F("223.5") / 8, F("14873.45") / 8]))
    E.append(_li_relative_entry("cor_6_8", _NEW,
                                "S(x) < li(x^2) + 0.525x^2/l^4 + 0.875x^2/l^5 + 3.9375x^2/l^6 "
                                "+ 22.3125x^2/l^7 + 1839.49375x^2/l^8 for x >= 355992", "<", 355992,
                                ["0.525", "0.875", "3.9375", "22.3125", "1839.49375"], +1))
    E.append(_series_entry("prop_6_9", _NEW,
                           "S(x) > x^2/(2l) + x^2/(4l^2) + x^2/(4l^3) - 3x^2/(20l^4) - x^2/(8l^5) "
                           "- 33x^2/(16l^6) - 267x^2/(16l^7) - 315065x^2/(128l^8) for x >= 65405363",
                           ">", 65405363,
                           [F(1, 2), F(1, 4), F(1, 4), F(-3, 20), F(-1, 8), F(-33, 16), F(-267, 16),
                            F(-315065, 128)]))
    E.append(_series_entry("cor_6_10", _NEW, "S(x) > x^2/(2l) + x^2/(4l^2) for x >= 302971", ">", 302971,
                           [F(1, 2), F(1, 4)]))
    E.append(_li_relative_entry("cor_6_11", _NEW,
                                "S(x) > li(x^2) - 0.525x^2/l^4 - 0.875x^2/l^5 - 3.9375x^2/l^6 "
                                "- 22.3125x^2/l^7 - 2486.0546875x^2/l^8 for x >= 65405363", ">", 65405363,
                                ["0.525", "0.875", "3.9375", "22.3125", "2486.0546875"], -1))
    E.append(_series_entry("massias_6_7", "Massias", "S(x) >= x^2/(2l) + 9x^2/(52l^2) + x^2/(4l^3) "
                           "for x >= 11813", ">=", 11813, [F(1, 2), F(9, 52), F(1, 4)]))
    E.append(_series_entry("mnr_6_x", _MNR, "S(x) >= x^2/(2l) + 0.477x^2/(2l^2) for x >= 70001", ">=", 70001,
                           [F(1, 2), F("0.477") / 2],
                           notes="same inequality as mr_6_8; the sieve finds 100 failing integers in "
                                 "[70001, 70840] and an onset of 70841"))
    E.append(_x_entry("mnr_6_x_exp", _MNR, "S(x) >= x^2/(2l) exp(0.475/l) for x >= 4256233", ">=", 4256233,
                      "S", "x^2/(2l) exp(0.475/l)",
                      lambda B, v: _sq(v.x) / (2 * v.lx) * B.exp(B.c("0.475") / v.lx)))
    E.append(_series_entry("mr_6_8", _MR, "S(x) >= x^2/(2l) + 0.954x^2/(4l^2) for x >= 70841", ">=", 70841,
                           [F(1, 2), F("0.954") / 4]))
    E.append(_series_entry("mr_S_upper", _MR, "S(x) <= x^2/(2l) + 3x^2/(10l^2) for x >= 24281", "<=", 24281,
                           [F(1, 2), F(3, 10)]))
    E.append(eq_6_3_entry())

    # --- li(x^2), continuous ---------------------------------------------------------
    li_coeffs = [F(1, 2), F(1, 4), F(1, 4), F(3, 8), F(3, 4), F(15, 8), F(45, 8), F(1575, 64)]
    E.append(InequalityEntry(
        "li_upper_6_10", "Axler (2015), upper bound for li(x^2)",
        "li(x^2) <= x^2/(2l) + x^2/(4l^2) + x^2/(4l^3) + 3x^2/(8l^4) + 3x^2/(4l^5) + 15x^2/(8l^6) "
        "+ 45x^2/(8l^7) + 1575x^2/(64l^8) for x >= 10^9", "real", "<=", 10 ** 9, 2,
        BoundExpr("li(x^2)", lambda B, v: B.li_of_log(2 * v.lx)),
        BoundExpr("truncated li(x^2) expansion with last coefficient 1575/64",
                  lambda B, v: _inv_log_series(B, _sq(v.x), v.lx, li_coeffs))))

    return {e.id: e for e in E}


CATALOG: dict[str, InequalityEntry] = _build_catalog()

# ids that must be present (drift guard used by the tests and the CLI)
CATALOG_IDS: tuple[str, ...] = tuple(CATALOG)


def get_entry(ident: str, **params) -> InequalityEntry:
    if ident == "eq_6_3_family" and "eps" in params:
        return eq_6_3_entry(params["eps"])
    try:
        return CATALOG[ident]
    except KeyError:
        raise UnknownInequalityError(ident, get_close_matches(ident, CATALOG_IDS, n=3, cutoff=0.5)) from None


def catalog_json() -> list[dict]:
    return [e.to_json() for e in CATALOG.values()]


def dump_catalog(path: str | Path) -> None:
    Path(path).write_text(json.dumps(catalog_json(), indent=2) + "\n")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


HOLDS, FAILS, INDETERMINATE = "holds", "fails", "indeterminate"


@dataclass(frozen=True)
class Verdict:
    status: str
    margin: XReal
    tier: str

    def __bool__(self) -> bool:
        return self.status == HOLDS


@dataclass(frozen=True)
class PointData:
    """Exact prime data at a point: (n, p_n, sum) or (x, pi(x), S(x))."""

    n: int | None = None
    p_n: int | None = None
    S: int | None = None
    pi: int | None = None


def point_data(entry: InequalityEntry, point) -> PointData:
    """Fetch the exact data an entry needs at ``point`` from the sieve."""
    from . import primes

    if entry.variable == "n":
        st = primes.state_at_index(int(point))
        return PointData(n=st.n, p_n=st.p_n, S=st.sum)
    if entry.variable == "x":
        st = primes.state_at_x(math.floor(Fraction(point)))
        return PointData(S=st.sum, pi=st.n)
    return PointData()


def make_vars(entry: InequalityEntry, B, point, data) -> Vars:
    """Variable bag in backend B; ``point``/``data`` fields may be scalars or arrays."""
    if entry.variable == "n":
        n, p, S = data["n"], data["p"], data["S"]
        return Vars(B, n=B.num(n), p=B.num(p), S=B.num(S), twoB=B.num(data["twoB"]))
    if isinstance(point, np.ndarray) and point.dtype != object:
        x = B.num(point)
    elif isinstance(point, (int, np.integer)):
        x = B.num(point)
    else:
        x = B.real(point)
    if entry.variable == "x":
        return Vars(B, x=x, T=B.num(data["T"]))
    return Vars(B, x=x)


def sides(entry: InequalityEntry, B, point, data):
    v = make_vars(entry, B, point, data)
    return entry.lhs(B, v), entry.rhs(B, v)


def _mp_margin(entry, point, data) -> XReal:
    with mpmath.workdps(BIGFLOAT.dps):
        lhs, rhs = sides(entry, BIGFLOAT, point, data)
        m = entry.oriented(lhs, rhs)
        err = BIGFLOAT.rel_tol * (abs(lhs) + abs(rhs))
        return XReal.from_mpf(m, float(err))


def _dd_margin(entry, point, data) -> XReal:
    arr = {k: np.asarray([val]) if not isinstance(val, np.ndarray) else val for k, val in data.items()}
    pt = np.asarray([point], dtype=object if isinstance(point, Fraction) else None)
    lhs, rhs = sides(entry, DOUBLE_DOUBLE, pt, arr)
    m = entry.oriented(lhs, rhs)
    from .analytic.dd import DD

    lhs, rhs, m = DD.coerce(lhs), DD.coerce(rhs), DD.coerce(m)
    scale = abs(float(np.ravel(lhs.hi)[0])) + abs(float(np.ravel(rhs.hi)[0]))
    return XReal(float(np.ravel(m.hi)[0]), float(np.ravel(m.lo)[0]), DOUBLE_DOUBLE.rel_tol * scale)


def classify(margin: XReal, strict: bool) -> str:
    v = float(margin)
    if v - margin.err > 0 or (not strict and v - margin.err >= 0):
        return HOLDS
    if v + margin.err < 0 or (strict and v + margin.err <= 0):
        return FAILS
    return INDETERMINATE


def exact_margin(entry: InequalityEntry, data) -> int:
    n, p, S = data["n"], data["p"], data["S"]
    return entry.exact(n, p, S, data["twoB"])


def _data_dict(entry: InequalityEntry, point, ctx: PointData) -> dict:
    if entry.variable == "n":
        if ctx is None or ctx.n is None or ctx.p_n is None or ctx.S is None:
            raise ValueError(f"{entry.id}: context must supply n, p_n and the prefix sum")
        if ctx.n != int(point):
            raise ValueError(f"{entry.id}: context is for n = {ctx.n}, not {point}")
        return {"n": ctx.n, "p": ctx.p_n, "S": ctx.S, "twoB": ctx.n * ctx.p_n - 2 * ctx.S}
    if entry.variable == "x":
        T = ctx.S if entry.step == "S" else ctx.pi
        if ctx is None or T is None:
            raise ValueError(f"{entry.id}: context must supply {entry.step}(x)")
        return {"T": T}
    return {}


def evaluate(entry: InequalityEntry, point, ctx: PointData | None, mode: str = "dd") -> Verdict:
    """Classify one point.  ``mode`` is "dd" (double-double, escalating) or "bigfloat"."""
    if mode not in ("dd", "bigfloat"):
        raise ValueError(f"precision mode must be 'dd' or 'bigfloat', got {mode!r}")
    if Fraction(point) < Fraction(entry.eval_domain_min):
        raise DomainError(f"{entry.id} is evaluated only from {entry.eval_domain_min}, got {point}")
    if entry.variable != "real" and ctx is None:
        raise ValueError(f"{entry.id}: prime context required")
    data = _data_dict(entry, point, ctx)
    if entry.variable == "n":
        point = int(point)
    elif isinstance(point, float):
        point = Fraction(point)
    if entry.exact is not None:
        m = exact_margin(entry, data)
        status = HOLDS if (m > 0 or (m == 0 and not entry.strict)) else FAILS
        return Verdict(status, XReal.of(m), "exact")
    if mode == "dd":
        margin = _dd_margin(entry, point, data)
        status = classify(margin, entry.strict)
        if status != INDETERMINATE:
            return Verdict(status, margin, "double-double")
    margin = _mp_margin(entry, point, data)
    return Verdict(classify(margin, entry.strict), margin, "bigfloat")


def evaluate_at(ident: str, point, mode: str = "dd") -> Verdict:
    """Convenience: evaluate a catalog entry, fetching prime data from the sieve."""
    entry = get_entry(ident)
    return evaluate(entry, point, point_data(entry, point), mode)


# ---------------------------------------------------------------------------
# auxiliary functions
# ---------------------------------------------------------------------------


def _scalar(fn, n, p, mode: str) -> XReal:
    if mode == "bigfloat":
        with mpmath.workdps(BIGFLOAT.dps):
            v = Vars(BIGFLOAT, n=BIGFLOAT.num(n), p=BIGFLOAT.num(p))
            val = fn(BIGFLOAT, v)
            return XReal.from_mpf(val, float(abs(val) * mpmath.mpf(10) ** -45))
    v = Vars(DOUBLE_DOUBLE, n=DOUBLE_DOUBLE.num(np.asarray([n])), p=DOUBLE_DOUBLE.num(np.asarray([p])))
    val = fn(DOUBLE_DOUBLE, v)
    hi, lo = float(val.hi[0]), float(val.lo[0])
    return XReal(hi, lo, abs(hi) * 1e-25)


def theta_omega(n: int, p_n: int, which: str, mode: str = "dd") -> XReal:
    """Theta(n) or Omega(n): sums of c_k p_n^2 / log^k p_n for k = 4..8."""
    if p_n < 2:
        raise DomainError("theta_omega needs p_n >= 2")
    fn = {"theta": _theta, "Θ": _theta, "omega": _omega, "Ω": _omega}.get(which.lower() if which.isascii() else which)
    if fn is None:
        raise ValueError(f"which must be 'theta' or 'omega', got {which!r}")
    return _scalar(fn, n, p_n, mode)


def rho_kappa(n: int, p_n: int, which: str, mode: str = "dd") -> XReal:
    """rho(n) or kappa(n) from n and p_n."""
    if n < 3:
        raise DomainError("rho_kappa needs n >= 3")
    fn = {"rho": _rho, "ρ": _rho, "kappa": _kappa, "κ": _kappa}.get(which.lower() if which.isascii() else which)
    if fn is None:
        raise ValueError(f"which must be 'rho' or 'kappa', got {which!r}")
    return _scalar(fn, n, p_n, mode)


def rho_kappa_array(n: np.ndarray, p: np.ndarray, which: str):
    """Vectorised rho/kappa in double-double; returns (values as DD, rel error)."""
    fn = _rho if which == "rho" else _kappa
    v = Vars(DOUBLE_DOUBLE, n=DOUBLE_DOUBLE.num(n), p=DOUBLE_DOUBLE.num(p))
    return fn(DOUBLE_DOUBLE, v), DOUBLE_DOUBLE.rel_tol


# ---------------------------------------------------------------------------
# shape of the continuous side of x-entries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Shape:
    """f decreases on [domain, turn] and increases on [turn, inf) (turn = domain if monotone)."""

    turn: Fraction
    unimodal_from: Fraction  # verification below this point is refused


_SHAPES: dict[tuple, Shape] = {}


def continuous_side(entry: InequalityEntry):
    """f(x) as an mpmath function (the non-step side of an x-entry)."""
    side = entry.rhs

    def f(x):
        v = Vars(BIGFLOAT, x=mpmath.mpf(x))
        return side(BIGFLOAT, v)

    return f


def shape(entry: InequalityEntry, top: float = 1e15, points: int = 700) -> Shape:
    """Locate the last turning point of f by a derivative sign scan and bisection."""
    key = (entry.id, tuple(sorted(entry.params.items())))
    if key in _SHAPES:
        return _SHAPES[key]
    lo = Fraction(entry.eval_domain_min)
    f = continuous_side(entry)
    with mpmath.workdps(40):
        grid = [mpmath.mpf(lo.numerator) / lo.denominator * mpmath.power(top / float(lo), mpmath.mpf(k) / points)
                for k in range(points + 1)]
        grid[0] = grid[0] * (1 + mpmath.mpf(10) ** -30) if lo == int(lo) else grid[0]
        d = [mpmath.diff(f, x) for x in grid]
        neg = [k for k, dv in enumerate(d) if dv <= 0]
        if not neg:
            res = Shape(lo, lo)
        else:
            k = neg[-1]
            a, b = grid[k], grid[min(k + 1, points)]
            for _ in range(200):
                mid = (a + b) / 2
                if mpmath.diff(f, mid) <= 0:
                    a = mid
                else:
                    b = mid
                if b - a < mpmath.mpf(10) ** -12 * b:
                    break
            turn = Fraction(str(mpmath.nstr(b, 25)))
            # unimodal if f' <= 0 on every grid point before the turn
            pos_before = [j for j in range(k) if d[j] > 0]
            unimodal_from = lo if not pos_before else turn
            res = Shape(turn, unimodal_from)
    _SHAPES[key] = res
    return res
