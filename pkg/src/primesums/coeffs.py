"""Integration-by-parts coefficients and the expansion polynomials R_s, T_s, V_s.

The integers b(s,i,j,r) come from the recurrence

    b(s,i,0,0) = 1
    b(s,i,j,j) = b(s,i,j-1,j-1) * (j-1-i)                      (j >= 1)
    b(s,i,j,0) = b(s,i,j-1,0) * (s+j-1)                         (j >= 1)
    b(s,i,j,r) = b(s,i,j-1,r) * (s+j-1) + b(s,i,j-1,r-1) * (r-1-i)   (j > r >= 1)

and describe  integral x (log log x)^i / log^s x dx  as a sum over
j of  b(s,i,j,r) x^2 (log log x)^(i-r) / (2^(j+1) log^(s+j) x).

Grouping the resulting expansion of sum_{k<=n} p_k by total power
w = s + j of 1/log n gives

    T_w(x) = (-1)^(w+1) w [ -(w-1)!/2^w
             + sum_{s=1}^{w} (-1)^(s+1)/s 2^(s-w) sum_i a(i,s) sum_r b(s,i,w-s,r) x^(i-r) ]

and for the Mandl residual B_n (2 <= w):

    V_w(x) = (-1)^(w+1) w [ (w-1)!/2^w
             + sum_{s=1}^{w-1} (-1)^s/s 2^(s-w) sum_i a(i,s) sum_r b(s,i,w-s,r) x^(i-r) ].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DomainError
from .exactq import RatPolynomial, rat

# ---------------------------------------------------------------------------
# b(s, i, j, r)
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _b_row(s: int, i: int, j: int) -> tuple[int, ...]:
    """(b(s,i,j,0), ..., b(s,i,j,j))."""
    if j == 0:
        return (1,)
    prev = _b_row(s, i, j - 1)
    row = [prev[0] * (s + j - 1)]
    for r in range(1, j):
        row.append(prev[r] * (s + j - 1) + prev[r - 1] * (r - 1 - i))
    row.append(prev[j - 1] * (j - 1 - i))
    return tuple(row)


def b_coefficient(s: int, i: int, j: int, r: int) -> int:
    """Integer coefficient b(s,i,j,r); memoised per (s,i,j) row."""
    if s < 1 or i < 0 or j < 0 or r < 0:
        raise DomainError(f"b({s},{i},{j},{r}): need s >= 1 and i, j, r >= 0")
    if r > j:
        raise DomainError(f"b({s},{i},{j},{r}): r must not exceed j")
    return _b_row(s, i, j)[r]


@dataclass(frozen=True)
class BTable:
    """Precomputed b(s,i,j,r) for 1<=s<=s_max, 0<=i<=i_max, 0<=r<=j<=j_max."""

    s_max: int
    i_max: int
    j_max: int
    entries: Mapping[tuple[int, int, int, int], int] = field(repr=False)

    @classmethod
    def build(cls, s_max: int, i_max: int, j_max: int) -> "BTable":
        entries = {}
        for s in range(1, s_max + 1):
            for i in range(i_max + 1):
                for j in range(j_max + 1):
                    for r, v in enumerate(_b_row(s, i, j)):
                        entries[(s, i, j, r)] = v
        return cls(s_max, i_max, j_max, entries)

    @classmethod
    def for_order(cls, m: int) -> "BTable":
        return cls.build(max(m, 1), max(m, 1), max(m - 1, 0))

    def covers(self, s_max: int, i_max: int, j_max: int) -> bool:
        return s_max <= self.s_max and i_max <= self.i_max and j_max <= self.j_max

    def __call__(self, s: int, i: int, j: int, r: int) -> int:
        try:
            return self.entries[(s, i, j, r)]
        except KeyError:
            raise DomainError(f"b({s},{i},{j},{r}) is outside this table") from None


# ---------------------------------------------------------------------------
# Cipolla coefficients a(i, s)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CipollaTable:
    """Rational a(i,s), 0 <= i <= s <= m, of the expansion of p_n in 1/log n."""

    m: int
    a: Mapping[tuple[int, int], Fraction]

    def __post_init__(self):
        if self.m < 1:
            raise DomainError("Cipolla table order must be >= 1")
        for s in range(1, self.m + 1):
            for i in range(s + 1):
                if (i, s) not in self.a:
                    raise DomainError(f"Cipolla table is missing a({i},{s})")
            if self.a[(s, s)] != 1:
                raise DomainError(f"a({s},{s}) must be 1, got {self.a[(s, s)]}")

    def __call__(self, i: int, s: int) -> Fraction:
        if not (0 <= i <= s <= self.m):
            raise DomainError(f"a({i},{s}) outside table of order {self.m}")
        return self.a[(i, s)]

    def to_json(self) -> dict:
        items = [{"i": i, "s": s, "num": q.numerator, "den": q.denominator}
                 for (i, s), q in sorted(self.a.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
        return {"m": self.m, "a": items}

    @classmethod
    def from_json(cls, doc: Mapping) -> "CipollaTable":
        a = {(int(d["i"]), int(d["s"])): Fraction(int(d["num"]), int(d["den"])) for d in doc["a"]}
        return cls(int(doc["m"]), a)

    @classmethod
    def load(cls, path: str | Path) -> "CipollaTable":
        return cls.from_json(json.loads(Path(path).read_text()))

    def dump(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=2) + "\n")


# second-order values used for R_1, R_2 (Cipolla 1902)
CIPOLLA_M2 = CipollaTable(2, {
    (0, 1): Fraction(-2), (1, 1): Fraction(1),
    (0, 2): Fraction(11), (1, 2): Fraction(-6), (2, 2): Fraction(1),
})


# ---------------------------------------------------------------------------
# Polynomial families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PolynomialFamily:
    kind: str  # "R", "T" or "V"
    m: int
    polys: Mapping[int, RatPolynomial]

    def __getitem__(self, s: int) -> RatPolynomial:
        try:
            return self.polys[s]
        except KeyError:
            raise DomainError(f"{self.kind}_{s} not in family of order {self.m}") from None

    def indices(self) -> list[int]:
        return sorted(self.polys)

    def check(self) -> None:
        """Assert the degree / leading-coefficient structure of the family."""
        for s, p in self.polys.items():
            if self.kind in ("R", "T"):
                if p.degree != s or not p.is_monic():
                    raise AssertionError(f"{self.kind}_{s} = {p} is not monic of degree {s}")
            elif self.kind == "V":
                if p.degree != s - 1 or p.leading <= 0:
                    raise AssertionError(f"V_{s} = {p} lacks degree {s - 1} / positive lead")

    def to_json(self) -> list[dict]:
        return [{"family": self.kind, "s": s, "coeffs": self.polys[s].to_json_coeffs()}
                for s in self.indices()]


def _inner_sum(ct: CipollaTable, bt: BTable, s: int, j: int) -> RatPolynomial:
    """sum_i a(i,s) sum_{r<=min(i,j)} b(s,i,j,r) x^(i-r)."""
    coeffs = [Fraction(0)] * (s + 1)
    for i in range(s + 1):
        a = ct(i, s)
        if not a:
            continue
        for r in range(min(i, j) + 1):
            coeffs[i - r] += a * bt(s, i, j, r)
    return RatPolynomial(coeffs)


def _require_b(bt: BTable | None, s_max: int, j_max: int) -> BTable:
    if bt is None:
        return BTable.build(max(s_max, 1), max(s_max, 1), max(j_max, 0))
    if not bt.covers(s_max, s_max, j_max):
        raise DomainError(f"b-table covers s<={bt.s_max}, i<={bt.i_max}, j<={bt.j_max}; "
                          f"need s,i<={s_max}, j<={j_max}")
    return bt


def assemble_R(ct: CipollaTable) -> PolynomialFamily:
    """R_s(x) = sum_i a(i,s) x^i for s = 1..m."""
    polys = {s: RatPolynomial(ct(i, s) for i in range(s + 1)) for s in range(1, ct.m + 1)}
    return PolynomialFamily("R", ct.m, polys)


def assemble_T(ct: CipollaTable, bt: BTable | None = None, m: int | None = None) -> PolynomialFamily:
    """T_1..T_m of the expansion of sum_{k<=n} p_k."""
    m = ct.m if m is None else m
    if m < 1:
        raise DomainError("order m must be >= 1")
    if ct.m < m:
        raise DomainError(f"Cipolla table of order {ct.m} cannot give T_{m}")
    bt = _require_b(bt, m, m - 1)
    polys = {}
    for w in range(1, m + 1):
        acc = RatPolynomial.constant(-Fraction(math.factorial(w - 1), 2 ** w))
        for s in range(1, w + 1):
            weight = Fraction((-1) ** (s + 1), s) * Fraction(2) ** (s - w)
            acc = acc + _inner_sum(ct, bt, s, w - s).scale(weight)
        polys[w] = acc.scale((-1) ** (w + 1) * w)
    return PolynomialFamily("T", m, polys)


def assemble_V(ct: CipollaTable, bt: BTable | None = None, m: int | None = None) -> PolynomialFamily:
    """V_2..V_m of the expansion of B_n = n p_n / 2 - sum_{k<=n} p_k.

    V_w only involves a(i,s) with s <= w-1, so a table of order m-1 suffices.
    """
    m = ct.m if m is None else m
    if m < 2:
        raise DomainError("V_s is defined for s >= 2; need m >= 2")
    if ct.m < m - 1:
        raise DomainError(f"Cipolla table of order {ct.m} cannot give V_{m}")
    bt = _require_b(bt, m - 1, m - 1)
    polys = {}
    for w in range(2, m + 1):
        acc = RatPolynomial.constant(Fraction(math.factorial(w - 1), 2 ** w))
        for s in range(1, w):
            weight = Fraction((-1) ** s, s) * Fraction(2) ** (s - w)
            acc = acc + _inner_sum(ct, bt, s, w - s).scale(weight)
        polys[w] = acc.scale((-1) ** (w + 1) * w)
    return PolynomialFamily("V", m, polys)


# ---------------------------------------------------------------------------
# Integration coefficients and bound composition
# ---------------------------------------------------------------------------


def t_ij(a: Sequence, i: int, j: int) -> Fraction:
    """t_{i,j} = (j-1)! sum_{l=j}^{i} 2^(l-j) a_{l+1} / l!   with a = (a_2, ..., a_m)."""
    m = len(a) + 1
    if j < 1 or i < j or i > m - 1:
        raise DomainError(f"t_({i},{j}) needs 1 <= j <= i <= m-1 = {m - 1}")
    coeff = [rat(c) if not isinstance(c, Fraction) else c for c in a]
    total = sum((Fraction(2 ** (l - j) * coeff[l - 1], math.factorial(l)) for l in range(j, i + 1)),
                Fraction(0))
    return math.factorial(j - 1) * total


def compose_sum_bound(R_polys: PolynomialFamily, V_polys: PolynomialFamily | None,
                      tail_R: RatPolynomial, tail_V: RatPolynomial, m: int) -> list[RatPolynomial]:
    """Per-weight polynomials P_1..P_m of a composed bound

        sum p_k  vs  n^2/2 (log n + log log n - 3/2 + sum_w (-1)^(w+1) P_w(log log n) / (w log^w n))

    built from an explicit p_n bound with last polynomial ``tail_R`` and an
    explicit B_n bound with last polynomial ``tail_V``.
    """
    if m < 2:
        raise DomainError("composition needs m >= 2")
    if tail_R.degree != m or tail_V.degree != m - 1:
        raise DomainError(f"tails must have degrees {m} and {m - 1}, "
                          f"got {tail_R.degree} and {tail_V.degree}")
    out = [R_polys[1] - Fraction(1, 2)]
    for s in range(2, m):
        if V_polys is None:
            raise DomainError("V family required for m > 2")
        out.append(R_polys[s] - V_polys[s])
    out.append(tail_R - tail_V)
    return out
