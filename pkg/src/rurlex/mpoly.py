"""Sparse multivariate polynomials, monomial orders and the system file format.

Monomials are exponent tuples, one entry per ring variable.  Variables are
ordered as declared: ``x1 > x2 > ... > xn``.  A polynomial is a dict from
monomial to a nonzero raw coefficient of the ring's field.

System files look like::

    vars: x, y
    field: QQ            # or: field: FF 65537
    x^2 + y^2 - 1
    x - 2*y

Polynomials use ``+ - * ^``, integer literals, parentheses and explicit
``*``.  As an extension, ``/`` by a nonzero constant is accepted so that
rational coefficients print and parse back losslessly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Sequence

import gmpy2

from .errors import ExponentOverflow, ParseError, ZeroPolynomial
from .fields import QQ, PrimeField

MAX_EXPONENT = 0xFFFF

Monomial = tuple


class MonomialOrder:
    """Lexicographic or degree-reverse-lexicographic order.

    ``perm`` lists variable indices from most to least significant; the
    default is declaration order.
    """

    KINDS = ("lex", "degrevlex")

    def __init__(self, kind: str = "degrevlex", perm: Sequence[int] | None = None):
        if kind not in self.KINDS:
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.perm = tuple(perm) if perm is not None else None
        if kind == "lex":
            self.key = self._lex_key
        else:
            self.key = self._drl_key

    def _permute(self, m):
        return m if self.perm is None else tuple(m[i] for i in self.perm)

    def _lex_key(self, m):
        return self._permute(m)

    def _drl_key(self, m):
        m = self._permute(m)
        return (sum(m), tuple(-e for e in reversed(m)))

    def compare(self, m1, m2) -> int:
        """-1, 0 or 1 as m1 is less than, equal to or greater than m2."""
        k1, k2 = self.key(m1), self.key(m2)
        return (k1 > k2) - (k1 < k2)

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.perm) == (other.kind, other.perm)

    def __hash__(self):
        return hash((self.kind, self.perm))

    def __repr__(self):
        return f"MonomialOrder({self.kind!r})" if self.perm is None else \
            f"MonomialOrder({self.kind!r}, {self.perm})"

    def __reduce__(self):
        return (MonomialOrder, (self.kind, self.perm))


LEX = MonomialOrder("lex")
DEGREVLEX = MonomialOrder("degrevlex")


def compare(m1, m2, order: MonomialOrder) -> int:
    return order.compare(m1, m2)


def mono_mul(a, b):
    c = tuple(x + y for x, y in zip(a, b))
    if max(c, default=0) > MAX_EXPONENT:
        raise ExponentOverflow(f"exponent exceeds {MAX_EXPONENT}")
    return c


def mono_divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(a, b):
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class PolyRing:
    """Context for polynomials: variable names, coefficient field, order."""

    def __init__(self, variables: Sequence[str], field=QQ, order: MonomialOrder = DEGREVLEX):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        self.nvars = len(self.variables)
        self.field = field
        self.order = order

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.variables, self.field, self.order) == \
            (other.variables, other.field, other.order)

    def __hash__(self):
        return hash((self.variables, self.field, self.order))

    def __repr__(self):
        return f"PolyRing({list(self.variables)}, {self.field!r}, {self.order!r})"

    def clone(self, field=None, order=None, variables=None) -> "PolyRing":
        return PolyRing(variables if variables is not None else self.variables,
                        field if field is not None else self.field,
                        order if order is not None else self.order)

    @property
    def one_monomial(self):
        return (0,) * self.nvars

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {self.one_monomial: self.field.convert(c)})

    def gen(self, i: int) -> "Polynomial":
        m = [0] * self.nvars
        m[i] = 1
        return Polynomial(self, {tuple(m): 1})

    @property
    def gens(self):
        return [self.gen(i) for i in range(self.nvars)]

    def from_terms(self, terms: Iterable) -> "Polynomial":
        """Build from (monomial, coefficient) pairs; repeated monomials add up."""
        F = self.field
        d = {}
        for m, c in terms:
            m = tuple(m)
            d[m] = d.get(m, 0) + F.convert(c)
        return Polynomial(self, {m: F.normalize(c) for m, c in d.items()})

    def parse(self, text: str, line: int | None = None) -> "Polynomial":
        return _Parser(self, text, line).parse()


class Polynomial:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = {m: c for m, c in terms.items() if c != 0}

    @classmethod
    def _raw(cls, ring, terms):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring.variables == other.ring.variables and \
                self.ring.field == other.ring.field and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == self.ring.constant(other) if other else not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def sorted_terms(self, order: MonomialOrder | None = None) -> list:
        """Terms from largest to smallest monomial."""
        key = (order or self.ring.order).key
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self, order: MonomialOrder | None = None):
        key = (order or self.ring.order).key
        return max(self.terms, key=key)

    def leading_coefficient(self, order: MonomialOrder | None = None):
        return self.terms[self.leading_monomial(order)]

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    # -- arithmetic ----------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        return self.ring.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        norm = self.ring.field.normalize
        d = dict(self.terms)
        for m, c in other.terms.items():
            v = norm(d.get(m, 0) + c)
            if v:
                d[m] = v
            else:
                d.pop(m, None)
        return Polynomial._raw(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.field.normalize
        return Polynomial._raw(self.ring, {m: norm(-c) for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        norm = self.ring.field.normalize
        d = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                d[m] = d.get(m, 0) + c1 * c2
        return Polynomial(self.ring, {m: norm(c) for m, c in d.items()})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = self.ring.one()
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, s) -> "Polynomial":
        s = self.ring.field.convert(s)
        norm = self.ring.field.normalize
        return Polynomial(self.ring, {m: norm(c * s) for m, c in self.terms.items()})

    def mul_term(self, mono, c) -> "Polynomial":
        norm = self.ring.field.normalize
        return Polynomial._raw(self.ring, {mono_mul(m, mono): norm(v * c) for m, v in self.terms.items()})

    def monic(self, order: MonomialOrder | None = None) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.leading_coefficient(order)))

    def evaluate(self, point: Sequence):
        """Value at a point given as raw field values."""
        F = self.ring.field
        acc = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v = v * x ** e
            acc += v
        return F.normalize(acc)

    def change_ring(self, ring: PolyRing) -> "Polynomial":
        """Map coefficients into ``ring`` (same number of variables)."""
        if ring.nvars != self.ring.nvars:
            raise ValueError("variable count mismatch")
        F = ring.field
        return Polynomial(ring, {m: F.convert(c) for m, c in self.terms.items()})

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_polynomial(self)


def _format_coeff(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial, order: MonomialOrder | None = None) -> str:
    if not p.terms:
        return "0"
    names = p.ring.variables
    out = []
    for m, c in p.sorted_terms(order):
        neg = False
        if p.ring.field.p is None and c < 0:
            neg, c = True, -c
        factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
        if c != 1 or not factors:
            factors.insert(0, _format_coeff(c))
        term = "*".join(factors)
        if out:
            out.append(("- " if neg else "+ ") + term)
        else:
            out.append(("-" if neg else "") + term)
    return " ".join(out)


def substitute_linear(ring: PolyRing, t: Sequence, name: str = "T"):
    """Generator ``T - sum t_i X_i`` of the augmented ideal ``I + <T - t>``.

    The fresh variable is appended last, i.e. it is the smallest variable
    for the lexicographic order.  Returns ``(augmented_ring, generator)``.
    """
    if len(t) != ring.nvars:
        raise ValueError("linear form length does not match the ring")
    aug = ring.clone(variables=ring.variables + (name,))
    F = ring.field
    terms = {}
    for i, ti in enumerate(t):
        c = F.normalize(-F.convert(ti))
        if c:
            m = [0] * aug.nvars
            m[i] = 1
            terms[tuple(m)] = c
    m = [0] * aug.nvars
    m[-1] = 1
    terms[tuple(m)] = 1
    return aug, Polynomial(aug, terms)


# --- parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


class _Parser:
    def __init__(self, ring: PolyRing, text: str, line: int | None):
        self.ring = ring
        self.text = text
        self.line = line
        self.tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m or m.end() == pos:
                col = pos + 1 + (len(stripped[pos:]) - len(stripped[pos:].lstrip()))
                raise ParseError(f"unexpected character {stripped[col - 1]!r}", line, col)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.tokens.append(("end", None, len(stripped) + 1))
        self.i = 0

    def _peek(self):
        return self.tokens[self.i]

    def _next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _error(self, msg, tok=None):
        tok = tok or self._peek()
        raise ParseError(msg, self.line, tok[2])

    def parse(self) -> Polynomial:
        p = self._expr()
        if self._peek()[0] != "end":
            self._error(f"unexpected token {self._peek()[1]!r}")
        return p

    def _expr(self):
        p = self._term()
        while self._peek()[1] in ("+", "-") and self._peek()[0] == "op":
            op = self._next()[1]
            q = self._term()
            p = p + q if op == "+" else p - q
        return p

    def _term(self):
        p = self._unary()
        while self._peek()[0] == "op" and self._peek()[1] in ("*", "/"):
            tok = self._next()
            q = self._unary()
            if tok[1] == "*":
                p = p * q
            else:
                if not q.is_constant() or not q:
                    self._error("division only by a nonzero constant", tok)
                p = p.scale(self.ring.field.inv(q.terms[self.ring.one_monomial]))
        return p

    def _unary(self):
        tok = self._peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self._next()
            p = self._unary()
            return -p if tok[1] == "-" else p
        return self._power()

    def _power(self):
        base = self._atom()
        if self._peek()[0] == "op" and self._peek()[1] == "^":
            self._next()
            tok = self._next()
            if tok[0] != "num":
                self._error("exponent must be a non-negative integer literal", tok)
            e = int(tok[1])
            if e > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {e} exceeds {MAX_EXPONENT}")
            return base ** e
        return base

    def _atom(self):
        tok = self._next()
        kind, val, col = tok
        if kind == "num":
            return self.ring.constant(int(val))
        if kind == "name":
            try:
                return self.ring.gen(self.ring.variables.index(val))
            except ValueError:
                raise ParseError(f"unknown variable {val!r}", self.line, col) from None
        if kind == "op" and val == "(":
            p = self._expr()
            close = self._next()
            if close[1] != ")":
                self._error("expected ')'", close)
            return p
        if kind == "end":
            raise ParseError("unexpected end of input", self.line, col)
        raise ParseError(f"unexpected token {val!r}", self.line, col)


@dataclass
class System:
    """A polynomial system read from a file (or built in code)."""

    ring: PolyRing
    polys: list
    name: str = ""
    source_lines: list = dc_field(default_factory=list, repr=False)

    @property
    def variables(self):
        return self.ring.variables

    @property
    def field(self):
        return self.ring.field

    @property
    def nvars(self):
        return self.ring.nvars

    def change_field(self, field) -> "System":
        ring = self.ring.clone(field=field)
        return System(ring, [p.change_ring(ring) for p in self.polys], self.name)

    def to_text(self) -> str:
        lines = [f"vars: {', '.join(self.variables)}", f"field: {self.field}"]
        lines += [format_polynomial(p) for p in self.polys]
        return "\n".join(lines) + "\n"


def _parse_field(desc: str, line: int):
    parts = desc.split()
    if parts == ["QQ"]:
        return QQ
    if len(parts) == 2 and parts[0] == "FF" and parts[1].isdigit():
        p = int(parts[1])
        if p <= 2 or not gmpy2.is_prime(p):
            raise ParseError(f"FF modulus {p} is not an odd prime", line, 1)
        return PrimeField(p)
    raise ParseError(f"bad field descriptor {desc!r} (expected 'QQ' or 'FF <p>')", line, 1)


def parse_system(text: str, name: str = "") -> System:
    """Parse the system file format described in the module docstring."""
    lines = text.splitlines()
    content = []
    for lineno, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0]
        if body.strip():
            content.append((lineno, body))
    if len(content) < 2:
        raise ParseError("expected 'vars:' and 'field:' header lines", 1, 1)
    (l1, vline), (l2, fline) = content[0], content[1]
    if not vline.strip().startswith("vars:"):
        raise ParseError("first line must be 'vars: x1, x2, ...'", l1, 1)
    names = [v.strip() for v in vline.split(":", 1)[1].split(",")]
    for v in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
            raise ParseError(f"bad variable name {v!r}", l1, 1)
    if len(set(names)) != len(names):
        raise ParseError("duplicate variable names", l1, 1)
    if not fline.strip().startswith("field:"):
        raise ParseError("second line must be 'field: QQ' or 'field: FF <p>'", l2, 1)
    field = _parse_field(fline.split(":", 1)[1].strip(), l2)
    ring = PolyRing(names, field)
    polys = []
    for lineno, body in content[2:]:
        p = ring.parse(body, lineno)
        if not p:
            raise ZeroPolynomial("polynomial is identically zero", lineno, 1)
        polys.append(p)
    if not polys:
        raise ParseError("no polynomials given", len(lines), 1)
    return System(ring, polys, name, lines)
