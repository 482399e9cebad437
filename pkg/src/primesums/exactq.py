"""Exact rational arithmetic and univariate polynomials over Q.

Rationals are :class:`fractions.Fraction` (always reduced, positive
denominator).  :class:`RatPolynomial` is a small immutable wrapper around a
tuple of Fractions indexed by degree.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, str, Fraction]


def rat(value: RationalLike) -> Fraction:
    """Coerce an int, decimal string ("12.373", "29/2") or Fraction exactly.

    Floats are rejected: a binary float almost never equals the decimal
    constant it was typed from.
    """
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a decimal string or Fraction")
    return Fraction(value)


class RatPolynomial:
    """Polynomial with exact rational coefficients, ``coeffs[k]`` multiplies x**k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # construction helpers

    @classmethod
    def monomial(cls, degree: int, coeff: RationalLike = 1) -> "RatPolynomial":
        return cls([0] * degree + [coeff])

    @classmethod
    def x(cls) -> "RatPolynomial":
        return cls([0, 1])

    @classmethod
    def constant(cls, c: RationalLike) -> "RatPolynomial":
        return cls([c])

    # structure

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # arithmetic

    def __add__(self, other) -> "RatPolynomial":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return RatPolynomial(self[k] + other[k] for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "RatPolynomial":
        return RatPolynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "RatPolynomial":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RatPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "RatPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return RatPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RatPolynomial(out)

    __rmul__ = __mul__

    def scale(self, c: RationalLike) -> "RatPolynomial":
        c = rat(c)
        return RatPolynomial(c * a for a in self.coeffs)

    def derivative(self) -> "RatPolynomial":
        return RatPolynomial(k * c for k, c in enumerate(self.coeffs) if k)

    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __call__(self, x):
        """Exact Horner evaluation for int/Fraction arguments."""
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def horner(self, x, const=lambda c: c):
        """Horner evaluation in an arbitrary numeric type.

        ``const`` lifts each Fraction coefficient into the arithmetic of ``x``
        (e.g. a double-double or mpmath constant).
        """
        if not self.coeffs:
            return x * 0
        acc = const(self.coeffs[-1])
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + const(c)
        return acc

    # display / serialisation

    def __repr__(self) -> str:
        return f"RatPolynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if k == 0:
                body = str(a)
            else:
                mono = "x" if k == 1 else f"x^{k}"
                body = mono if a == 1 else f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json_coeffs(self) -> list[dict]:
        return [{"num": c.numerator, "den": c.denominator} for c in self.coeffs]

    @classmethod
    def from_json_coeffs(cls, items: Sequence[dict]) -> "RatPolynomial":
        return cls(Fraction(int(d["num"]), int(d["den"])) for d in items)


def _as_poly(obj):
    if isinstance(obj, RatPolynomial):
        return obj
    if isinstance(obj, (int, Fraction)):
        return RatPolynomial([obj])
    return NotImplemented


def rat_poly_arith(a: RatPolynomial, b: RatPolynomial | None, op: str,
                   factor: RationalLike | None = None) -> RatPolynomial:
    """Dispatch form of the polynomial operations: add, sub, mul or scale."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "scale":
        return a.scale(factor)
    raise ValueError(f"unknown polynomial op {op!r}")


def rat_eval(p: RatPolynomial, x):
    """Evaluate ``p`` at an extended-precision point, returning an XReal.

    ``x`` may be an int/Fraction/str (converted to double-double) or an
    :class:`~primesums.analytic.xreal.XReal` carrying its own error radius.
    """
    from .analytic.xreal import XReal

    if not isinstance(x, XReal):
        x = XReal.of(x)
    return p.horner(x, const=XReal.of)
