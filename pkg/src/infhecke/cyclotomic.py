"""Exact scalars: rationals, cyclotomic fields and prime-field images.

A :class:`CyclotomicNumber` of conductor ``n`` is stored by its coordinates in
the power basis ``1, z, ..., z^(phi(n)-1)`` of ``Q(z)``, ``z = exp(2 i pi / n)``,
reduced modulo the ``n``-th cyclotomic polynomial.  Coordinates are canonical,
so equality is coordinate equality.

>>> z = CyclotomicNumber.zeta(3)
>>> z + z * z
CyclotomicNumber(3, [-1, 0])
>>> reduce_mod_p(z, 7, PrimeResidue(7, 2))
PrimeResidue(modulus=7, value=2)
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

from flint import fmpq_poly

Rational = Fraction
Scalar = Union[int, Fraction, "CyclotomicNumber"]


class BadPrime(ValueError):
    """The prime is not admissible for the requested reduction."""


def _divexact(num: list[int], den: tuple[int, ...]) -> list[int]:
    # den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for k in range(len(out) - 1, -1, -1):
        c = num[k + len(den) - 1]
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    assert not any(num[: len(den) - 1])
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, ascending."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def zeta_powers(n: int) -> tuple[tuple[int, ...], ...]:
    """Power-basis coordinates of z^k for k = 0..n-1."""
    phi = euler_phi(n)
    cyc = cyclotomic_polynomial(n)
    cur = [1] + [0] * (phi - 1)
    out = []
    for _ in range(n):
        out.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * cyc[j] for j, c in enumerate(cur)]
    return tuple(out)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if hasattr(x, "p") and hasattr(x, "q"):  # flint fmpq
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"not a rational: {x!r}")


class CyclotomicNumber:
    __slots__ = ("n", "coeffs", "_hash")

    def __init__(self, n: int, coeffs: Iterable):
        coeffs = tuple(_as_fraction(c) for c in coeffs)
        if len(coeffs) != euler_phi(n):
            raise ValueError(f"expected {euler_phi(n)} coordinates for conductor {n}")
        self.n = n
        self.coeffs = coeffs
        self._hash = None

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> CyclotomicNumber:
        return cls(n, zeta_powers(n)[k % n])

    @classmethod
    def from_rational(cls, n: int, x) -> CyclotomicNumber:
        return cls(n, [_as_fraction(x)] + [0] * (euler_phi(n) - 1))

    @classmethod
    def from_exponents(cls, n: int, terms: dict[int, object]) -> CyclotomicNumber:
        """Sum of c * z^k over the given {k: c}."""
        acc = [Fraction(0)] * euler_phi(n)
        pw = zeta_powers(n)
        for k, c in terms.items():
            c = _as_fraction(c)
            for j, v in enumerate(pw[k % n]):
                if v:
                    acc[j] += c * v
        return cls(n, acc)

    def _coerce(self, other) -> CyclotomicNumber:
        if isinstance(other, CyclotomicNumber):
            if other.n != self.n:
                raise ValueError(f"conductor mismatch: {self.n} vs {other.n}")
            return other
        return CyclotomicNumber.from_rational(self.n, other)

    def __add__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.n, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return CyclotomicNumber(self.n, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return CyclotomicNumber(self.n, [-a for a in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, CyclotomicNumber):
            c = _as_fraction(other)
            return CyclotomicNumber(self.n, [a * c for a in self.coeffs])
        o = self._coerce(other)
        phi = len(self.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = prod[:phi]
        pw = zeta_powers(self.n)
        for k in range(phi, 2 * phi - 1):
            c = prod[k]
            if c:
                for j, v in enumerate(pw[k % self.n]):
                    if v:
                        out[j] += c * v
        return CyclotomicNumber(self.n, out)

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        a = fmpq_poly([_fmpq_pair(c) for c in self.coeffs])
        f = fmpq_poly(list(cyclotomic_polynomial(self.n)))
        g, s, _ = a.xgcd(f)
        s = s / g
        coeffs = [Fraction(0)] * len(self.coeffs)
        for k, c in enumerate(s.coeffs()):
            coeffs[k] = _as_fraction(c)
        inv = CyclotomicNumber(self.n, coeffs)
        assert (inv * self).is_one()
        return inv

    def __truediv__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self * self._coerce(other).inverse()
        c = _as_fraction(other)
        if c == 0:
            raise ZeroDivisionError("division by zero")
        return CyclotomicNumber(self.n, [a / c for a in self.coeffs])

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicNumber.from_rational(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.n == other.n and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.coeffs))
        return self._hash

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def galois(self, k: int) -> CyclotomicNumber:
        """Image under z -> z^k, gcd(k, n) = 1."""
        if math.gcd(k, self.n) != 1:
            raise ValueError("exponent must be a unit mod n")
        return CyclotomicNumber.from_exponents(self.n, {j * k: c for j, c in enumerate(self.coeffs)})

    def conjugate(self) -> CyclotomicNumber:
        return self.galois(-1 % self.n) if self.n > 2 else self

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.n)
        return sum(float(c) * z**k for k, c in enumerate(self.coeffs))

    def __repr__(self):
        return f"CyclotomicNumber({self.n}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(str(c) if k == 0 else f"({c})*z{self.n}^{k}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> dict:
        return cyclo_to_json(self)


def _fmpq_pair(c: Fraction):
    from flint import fmpq

    return fmpq(c.numerator, c.denominator)


def cyclo_arith(a: CyclotomicNumber, b: CyclotomicNumber | None, op: str) -> CyclotomicNumber:
    if op == "inv":
        return a.inverse()
    if b is None or a.n != b.n:
        raise ValueError("conductor mismatch; promote with embed() first")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def embed(a: CyclotomicNumber, m: int) -> CyclotomicNumber:
    """Image of a under z_n -> z_m^(m/n)."""
    if m % a.n:
        raise ValueError(f"conductor {a.n} does not divide {m}")
    step = m // a.n
    return CyclotomicNumber.from_exponents(m, {k * step: c for k, c in enumerate(a.coeffs) if c})


def as_cyclotomic(x: Scalar, n: int) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        return x if x.n == n else embed(x, n)
    return CyclotomicNumber.from_rational(n, x)


# ---------------------------------------------------------------- prime fields


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeResidue:
    modulus: int
    value: int

    def __post_init__(self):
        if not is_prime(self.modulus):
            raise ValueError(f"{self.modulus} is not prime")
        object.__setattr__(self, "value", self.value % self.modulus)

    def _other(self, o) -> int:
        if isinstance(o, PrimeResidue):
            if o.modulus != self.modulus:
                raise ValueError("modulus mismatch")
            return o.value
        return int(o)

    def __add__(self, o):
        return PrimeResidue(self.modulus, self.value + self._other(o))

    def __sub__(self, o):
        return PrimeResidue(self.modulus, self.value - self._other(o))

    def __mul__(self, o):
        return PrimeResidue(self.modulus, self.value * self._other(o))

    def __pow__(self, k: int):
        return PrimeResidue(self.modulus, pow(self.value, k, self.modulus))

    def inverse(self) -> PrimeResidue:
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero mod p")
        return PrimeResidue(self.modulus, pow(self.value, -1, self.modulus))

    def order(self) -> int:
        if self.value == 0:
            raise ValueError("zero has no multiplicative order")
        k, x = 1, self.value
        while x != 1:
            x = x * self.value % self.modulus
            k += 1
        return k


def root_of_unity_mod_p(n: int, p: int) -> PrimeResidue:
    """Smallest residue of exact multiplicative order n in F_p."""
    if (p - 1) % n:
        raise BadPrime(f"{p} is not 1 mod {n}")
    for x in range(1, p):
        if PrimeResidue(p, x).order() == n:
            return PrimeResidue(p, x)
    raise BadPrime(f"no element of order {n} mod {p}")


def admissible_primes(n: int, start: int = 11):
    """Primes p >= start with p = 1 mod n, in increasing order."""
    p = max(start, 2)
    while True:
        if is_prime(p) and (p - 1) % n == 0:
            yield p
        p += 1


def rational_mod_p(c: Fraction, p: int) -> int:
    if c.denominator % p == 0:
        raise BadPrime(f"denominator {c.denominator} vanishes mod {p}")
    return c.numerator * pow(c.denominator, -1, p) % p


def reduce_mod_p(a: Scalar, p: int, root: PrimeResidue) -> PrimeResidue:
    """Ring homomorphism Q(z_n) -> F_p sending z_n to root."""
    if root.modulus != p:
        raise ValueError("root lives in a different prime field")
    if not isinstance(a, CyclotomicNumber):
        return PrimeResidue(p, rational_mod_p(_as_fraction(a), p))
    n = a.n
    if (p - 1) % n:
        raise BadPrime(f"{p} is not 1 mod {n}")
    if pow(root.value, n, p) != 1 or (n > 1 and root.order() != n):
        raise BadPrime(f"{root.value} does not have order {n} mod {p}")
    acc, pw = 0, 1
    for c in a.coeffs:
        if c:
            acc += rational_mod_p(c, p) * pw
        pw = pw * root.value % p
    return PrimeResidue(p, acc)


# ---------------------------------------------------------------- serialization


def fraction_to_json(c: Fraction) -> list[str]:
    return [str(c.numerator), str(c.denominator)]


def fraction_from_json(pair) -> Fraction:
    num, den = pair
    return Fraction(int(num), int(den))


def cyclo_to_json(a: CyclotomicNumber) -> dict:
    return {"n": a.n, "c": [fraction_to_json(c) for c in a.coeffs]}


def cyclo_from_json(doc: dict) -> CyclotomicNumber:
    return CyclotomicNumber(int(doc["n"]), [fraction_from_json(c) for c in doc["c"]])
