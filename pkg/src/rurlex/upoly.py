"""Dense univariate polynomials over GF(p) or QQ.

A :class:`UPoly` stores its coefficients in ascending order,
``c[0] + c[1]*T + ... + c[d]*T^d`` with ``c[d] != 0``; the zero polynomial
has no coefficients.  Arithmetic is classical (quadratic); every gcd-like
result is made monic so that equality tests downstream are canonical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import (
    NotDivisible,
    NotInvertibleModF,
    UnsupportedCharacteristic,
    ZeroGcd,
)
from .fields import QQ


def _strip(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


class UPoly:
    __slots__ = ("coeffs", "field", "var")

    def __init__(self, coeffs: Sequence = (), field=QQ, var: str = "T", *, raw: bool = False):
        if raw:
            c = list(coeffs)
        else:
            c = [field.convert(x) for x in coeffs]
        self.coeffs = tuple(_strip(c))
        self.field = field
        self.var = var

    # -- construction helpers ------------------------------------------------

    @classmethod
    def _make(cls, coeffs: list, field, var="T") -> "UPoly":
        obj = cls.__new__(cls)
        obj.coeffs = tuple(_strip(coeffs))
        obj.field = field
        obj.var = var
        return obj

    @classmethod
    def zero(cls, field=QQ, var="T"):
        return cls._make([], field, var)

    @classmethod
    def one(cls, field=QQ, var="T"):
        return cls._make([1], field, var)

    @classmethod
    def monomial(cls, degree: int, field=QQ, coeff=1, var="T"):
        return cls._make([0] * degree + [field.convert(coeff)], field, var)

    @classmethod
    def from_roots(cls, roots, field=QQ, var="T"):
        """Monic polynomial prod (T - r)."""
        out = cls.one(field, var)
        for r in roots:
            out = out * cls(( -field.convert(r), 1), field, var)
        return out

    # -- basic accessors -----------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def __eq__(self, other):
        if isinstance(other, UPoly):
            return self.coeffs == other.coeffs and self.field == other.field
        if isinstance(other, (int, Fraction)):
            return self.coeffs == (tuple(self._c(other)) if other else ())
        return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.field))

    def __repr__(self):
        return f"UPoly({self}, {self.field!r})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = self.var if i == 1 else f"{self.var}^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    # -- arithmetic ----------------------------------------------------------

    def _c(self, x):
        return [self.field.convert(x)]

    def _coerce(self, other) -> "UPoly":
        if isinstance(other, UPoly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        return UPoly._make(self._c(other), self.field, self.var)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        norm = self.field.normalize
        c = list(a)
        for i, y in enumerate(b):
            c[i] = norm(c[i] + y)
        return UPoly._make(c, self.field, self.var)

    __radd__ = __add__

    def __neg__(self):
        norm = self.field.normalize
        return UPoly._make([norm(-x) for x in self.coeffs], self.field, self.var)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UPoly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UPoly.zero(self.field, self.var)
        c = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    c[i + j] += x * y
        norm = self.field.normalize
        return UPoly._make([norm(x) for x in c], self.field, self.var)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, s) -> "UPoly":
        s = self.field.convert(s)
        norm = self.field.normalize
        return UPoly._make([norm(s * x) for x in self.coeffs], self.field, self.var)

    def __pow__(self, e: int):
        out = UPoly.one(self.field, self.var)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def monic(self) -> "UPoly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def divmod(self, other: "UPoly"):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        norm = F.normalize
        r = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        inv_lc = F.inv(b[-1])
        if len(r) <= db:
            return UPoly.zero(F, self.var), self
        q = [0] * (len(r) - db)
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if c == 0:
                continue
            c = norm(c * inv_lc)
            q[k - db] = c
            off = k - db
            for j in range(db + 1):
                r[off + j] = norm(r[off + j] - c * b[j])
        return UPoly._make(q, F, self.var), UPoly._make(r[:db], F, self.var)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def derivative(self) -> "UPoly":
        norm = self.field.normalize
        return UPoly._make([norm(i * c) for i, c in enumerate(self.coeffs)][1:],
                           self.field, self.var)

    def __call__(self, x):
        """Horner evaluation at a raw field value."""
        norm = self.field.normalize
        acc = 0
        for c in reversed(self.coeffs):
            acc = norm(acc * x + c)
        return acc

    def to_list(self) -> list:
        return list(self.coeffs)


# --- module-level operations -------------------------------------------------

def derivative(f: UPoly) -> UPoly:
    return f.derivative()


def poly_rem(a: UPoly, f: UPoly) -> UPoly:
    return a % f


def poly_mul_mod(a: UPoly, b: UPoly, f: UPoly) -> UPoly:
    return (a * b) % f


def poly_gcd_monic(a: UPoly, b: UPoly) -> UPoly:
    """Monic gcd; ``gcd(a, 0) = monic(a)``."""
    if not a and not b:
        raise ZeroGcd("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a.monic()


def exact_div(a: UPoly, b: UPoly) -> UPoly:
    q, r = a.divmod(b)
    if r:
        raise NotDivisible(f"{b} does not divide {a}")
    return q


def ext_gcd(a: UPoly, b: UPoly):
    """Return (g, s, t) with ``s*a + t*b = g`` and g monic."""
    F = a.field
    r0, r1 = a, b
    s0, s1 = UPoly.one(F, a.var), UPoly.zero(F, a.var)
    t0, t1 = UPoly.zero(F, a.var), UPoly.one(F, a.var)
    while r1:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0:
        raise ZeroGcd("gcd(0, 0) is undefined")
    u = F.inv(r0.lc)
    return r0.scale(u), s0.scale(u), t0.scale(u)


def mod_inverse(g: UPoly, f: UPoly) -> UPoly:
    """Inverse of ``g`` modulo ``f`` (deg f >= 1)."""
    if f.degree < 1:
        raise ValueError("modulus must have positive degree")
    gr = g % f
    if not gr:
        raise NotInvertibleModF(f"{g} shares a root with {f}")
    h, s, _ = ext_gcd(gr, f)
    if not h.is_one():
        raise NotInvertibleModF(f"gcd({g}, {f}) = {h}")
    return s % f


def check_characteristic(field, bound: int, what: str = "degree"):
    """Require characteristic 0 or > bound."""
    ch = field.characteristic
    if ch and ch <= bound:
        raise UnsupportedCharacteristic(
            f"characteristic {ch} must exceed the {what} {bound}")


def squarefree_part(f: UPoly) -> UPoly:
    """Monic ``f / gcd(f, f')``, valid in characteristic 0 or > deg f."""
    if not f:
        raise ValueError("squarefree part of the zero polynomial")
    check_characteristic(f.field, f.degree)
    if f.degree <= 0:
        return UPoly.one(f.field, f.var)
    g = poly_gcd_monic(f, f.derivative())
    return exact_div(f.monic(), g)
