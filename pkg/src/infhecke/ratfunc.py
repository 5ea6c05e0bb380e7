from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Union

from flint import fmpq, fmpq_poly

from .cyclotomic import fraction_from_json, fraction_to_json


def _poly(coeffs: Iterable) -> fmpq_poly:
    out = []
    for c in coeffs:
        if isinstance(c, Fraction):
            out.append(fmpq(c.numerator, c.denominator))
        else:
            out.append(c)
    return fmpq_poly(out)


def _poly_coeffs(p: fmpq_poly) -> list[Fraction]:
    return [Fraction(int(c.p), int(c.q)) for c in p.coeffs()]


class RationalFunction:
    """Element of Q(q) as num/den with den monic and gcd(num, den) = 1."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        num = num if isinstance(num, fmpq_poly) else _poly(num if isinstance(num, (list, tuple)) else [num])
        den = fmpq_poly([1]) if den is None else (den if isinstance(den, fmpq_poly) else _poly(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            den = fmpq_poly([1])
        else:
            g = num.gcd(den)
            if g.degree() > 0:
                num, den = num / g, den / g
            lead = den.leading_coefficient()
            num, den = num / lead, den / lead
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def q(cls) -> RationalFunction:
        return cls(fmpq_poly([0, 1]))

    @classmethod
    def const(cls, c) -> RationalFunction:
        return cls(fmpq_poly([c if not isinstance(c, Fraction) else fmpq(c.numerator, c.denominator)]))

    @classmethod
    def laurent(cls, terms: dict[int, object]) -> RationalFunction:
        """Sum of c * q^k over {k: c}, negative k allowed."""
        low = min(min(terms), 0)
        coeffs = [Fraction(0)] * (max(terms) - low + 1)
        for k, c in terms.items():
            coeffs[k - low] += Fraction(c)
        den = [0] * (-low) + [1]
        return cls(_poly(coeffs), _poly(den))

    def _coerce(self, o) -> RationalFunction:
        if isinstance(o, RationalFunction):
            return o
        if isinstance(o, (int, Fraction)):
            return RationalFunction.const(o)
        return NotImplemented

    def __add__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, o):
        return self._coerce(o) - self

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __mul__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, o):
        return self._coerce(o) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(self.den**(-k), self.num**(-k))
        return RationalFunction(self.num**k, self.den**k)

    def __eq__(self, o):
        o = self._coerce(o)
        if o is NotImplemented:
            return o
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __repr__(self):
        if self.den.degree() == 0:
            return f"RationalFunction({self.num.str(var='q')})"
        return f"RationalFunction(({self.num.str(var='q')})/({self.den.str(var='q')}))"

    __str__ = __repr__

    def valuation_at_one(self) -> int:
        """Order of vanishing at q = 1 (negative for a pole)."""
        if self.is_zero():
            raise ValueError("valuation of zero")
        lin = fmpq_poly([-1, 1])
        v = 0
        num, den = self.num, self.den
        while num(1) == 0:
            num = num / lin
            v += 1
        while den(1) == 0:
            den = den / lin
            v -= 1
        return v

    def at_one(self) -> Fraction:
        d = self.den(1)
        if d == 0:
            raise ZeroDivisionError("pole at q = 1")
        v = self.num(1) / d
        return Fraction(int(v.p), int(v.q))

    def evaluate(self, z: complex) -> complex:
        return _horner(_poly_coeffs(self.num), z) / _horner(_poly_coeffs(self.den), z)

    def to_json(self) -> dict:
        return {"num": [fraction_to_json(c) for c in _poly_coeffs(self.num)],
                "den": [fraction_to_json(c) for c in _poly_coeffs(self.den)]}

    @classmethod
    def from_json(cls, doc: dict) -> RationalFunction:
        num = [fraction_from_json(c) for c in doc["num"]]
        den = [fraction_from_json(c) for c in doc.get("den", [["1", "1"]])]
        return cls(_poly(num), _poly(den))


def _horner(coeffs: list[Fraction], z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + float(c)
    return acc


def _reverse(p: fmpq_poly) -> tuple[fmpq_poly, int]:
    coeffs = p.coeffs()
    return fmpq_poly(list(reversed(coeffs))), len(coeffs) - 1


def bar_involution(f: RationalFunction) -> RationalFunction:
    """The automorphism q -> 1/q of Q(q)."""
    if f.is_zero():
        return f
    nrev, dn = _reverse(f.num)
    drev, dd = _reverse(f.den)
    shift = dd - dn  # f(1/q) = q^(dd-dn) nrev/drev
    if shift >= 0:
        return RationalFunction(nrev * fmpq_poly([0] * shift + [1]), drev)
    return RationalFunction(nrev, drev * fmpq_poly([0] * (-shift) + [1]))


RF = Union[RationalFunction, int, Fraction]
