"""Exact coefficient domains: prime fields GF(p) and the rationals.

Algorithms in this package work on "raw" coefficients and delegate the few
field-specific operations to a domain object.  For GF(p) a raw coefficient
is a Python ``int`` in ``[0, p)``; for QQ it is an ``int`` or a
:class:`fractions.Fraction`.  Keeping raw values (instead of wrapping every
coefficient in an object) keeps the dense linear algebra fast.

:class:`FieldElement` and the ``ff_*`` functions are the element-level API
for callers that want checked arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import gmpy2

from .errors import ModulusMismatch, NotCoprime, NotInvertible


class PrimeField:
    """The field Z/pZ for an odd prime p."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        p = int(p)
        if p <= 2 or not gmpy2.is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        self.p = p

    characteristic = property(lambda self: self.p)
    zero = 0
    one = 1

    def __repr__(self):
        return f"GF({self.p})"

    def __str__(self):
        return f"FF {self.p}"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __reduce__(self):
        return (PrimeField, (self.p,))

    def __call__(self, value) -> "FieldElement":
        return FieldElement(self.convert(value), self.p)

    def convert(self, x) -> int:
        """Embed an int, Fraction or FieldElement into this field."""
        if isinstance(x, FieldElement):
            if x.p != self.p:
                raise ModulusMismatch(f"element of GF({x.p}) used in GF({self.p})")
            return x.value
        if isinstance(x, Fraction):
            den = x.denominator % self.p
            if den == 0:
                raise NotInvertible(f"denominator {x.denominator} vanishes mod {self.p}")
            return x.numerator * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def normalize(self, x: int) -> int:
        return x % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise NotInvertible("0 has no inverse")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def to_int(self, a) -> int:
        return a

    def is_zero(self, a) -> bool:
        return a % self.p == 0


class RationalField:
    """The field QQ of rational numbers (singleton :data:`QQ`)."""

    characteristic = 0
    p = None
    zero = 0
    one = 1

    def __repr__(self):
        return "QQ"

    __str__ = __repr__

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __reduce__(self):
        return "QQ"

    def __call__(self, value) -> Fraction:
        return Fraction(value)

    def convert(self, x):
        if isinstance(x, FieldElement):
            raise ModulusMismatch("cannot embed a GF(p) element into QQ")
        if isinstance(x, int):
            return x
        return Fraction(x)

    def normalize(self, x):
        return x

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise NotInvertible("0 has no inverse")
        return Fraction(1) / a

    def div(self, a, b):
        return a * self.inv(b)

    def is_zero(self, a) -> bool:
        return a == 0


QQ = RationalField()


@dataclass(frozen=True)
class FieldElement:
    """Checked element of GF(p); operators refuse to mix moduli."""

    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement((self.value + b) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement((self.value - b) % self.p, self.p)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.value * b % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value % self.p, self.p)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise NotInvertible(f"0 has no inverse mod {self.p}")
        return FieldElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self * FieldElement(b, self.p).inverse()

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} mod {self.p}"


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def ff_neg(a: FieldElement) -> FieldElement:
    return -a


def ff_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


# --- primes -----------------------------------------------------------------

def primes_below(bound: int) -> Iterator[int]:
    """Yield the primes below ``bound`` in decreasing order (never 2)."""
    q = int(bound)
    while True:
        q = int(gmpy2.prev_prime(q))
        if q <= 2:
            return
        yield q


def prime_sequence(bits: int = 31) -> Iterator[int]:
    """Largest primes below ``2**bits``, descending."""
    return primes_below(1 << bits)


# --- Chinese remaindering and rational reconstruction ----------------------

@dataclass(frozen=True)
class CrtAccumulator:
    """An integer known modulo ``modulus`` (a product of distinct primes)."""

    residue: int = 0
    modulus: int = 1

    def __post_init__(self):
        if self.modulus < 1 or not 0 <= self.residue < self.modulus:
            raise ValueError("residue must lie in [0, modulus)")


def crt_combine(acc: CrtAccumulator, r, p: int | None = None) -> CrtAccumulator:
    """Fold the residue ``r`` modulo ``p`` into ``acc``.

    ``r`` may be a :class:`FieldElement` (then ``p`` is taken from it) or a
    plain integer together with ``p``.
    """
    if isinstance(r, FieldElement):
        if p is not None and p != r.p:
            raise ModulusMismatch("residue and modulus disagree")
        r, p = r.value, r.p
    if p is None:
        raise TypeError("modulus required for an integer residue")
    m = acc.modulus
    if math.gcd(m, p) != 1:
        raise NotCoprime(f"{p} is not coprime to the accumulated modulus")
    r %= p
    # x = residue + m*k with k = (r - residue)/m mod p
    k = (r - acc.residue) * pow(m, -1, p) % p
    return CrtAccumulator(acc.residue + m * k, m * p)


def rational_reconstruct(r: int, m: int, bound: int | None = None) -> Fraction | None:
    """Recover a/b from ``r = a/b mod m`` with balanced bounds.

    Returns the unique fraction with ``|a| <= N``, ``0 < b <= N`` where
    ``N = bound`` or, by default, ``floor(sqrt((m-1)/2))`` so that
    ``2*N*N < m``.  Returns ``None`` when no such fraction exists.
    """
    if not 0 <= r < m:
        raise ValueError("residue out of range")
    n = math.isqrt((m - 1) // 2) if bound is None else bound
    r0, r1 = m, r
    s0, s1 = 0, 1
    while r1 > n:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > n or math.gcd(r1, abs(s1)) != 1:
        return None
    if s1 < 0:
        r1, s1 = -r1, -s1
    return Fraction(r1, s1)


def symmetric_residue(r: int, m: int) -> int:
    """Representative of r mod m in (-m/2, m/2]."""
    r %= m
    return r - m if r > m // 2 else r
