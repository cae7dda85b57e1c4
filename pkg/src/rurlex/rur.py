"""Reduced rational univariate representations over one field.

Pipeline for a linear form ``t = sum t_i X_i`` on a quotient structure:

1. ``M_T = sum t_i M_{X_i}`` and its minimal polynomial (Krylov echelon).
2. For each variable, the bivariate lex basis of ``I_T`` in ``K[T, X_i]``.
3. Optionally the bivariate separation test; then the parametrization
   ``h1 X_i + h0`` and the numerator ``f_i``.

The result satisfies ``X_i = f_i(T) / f0(T)`` at every root of the first
polynomial, with ``f0 = fbar' / deg(fbar)``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from typing import Iterator, Sequence

from .bivar import (
    bivariate_parametrization,
    param_to_rur_coordinate,
    rur_denominator,
    separation_test,
)
from .errors import (
    EmptyVariety,
    InternalInvariantViolation,
    StrategyExhausted,
    UnsupportedCharacteristic,
)
from .fglm import characteristic_polynomial, coordinate, minimal_polynomial
from .groebner import QuotientStructure
from .upoly import UPoly, check_characteristic, exact_div, squarefree_part


@dataclass
class ReducedRUR:
    """``first(T) = 0, X_i = coords[i](T) / f0(T)``.

    ``kind`` is ``"radical"`` (first = squarefree minimal polynomial of
    ``M_t``) or ``"full"`` (first = characteristic polynomial of ``M_t``).
    """

    first: UPoly
    f0: UPoly
    coords: list
    form: tuple
    field: object
    kind: str = "radical"
    minimal: UPoly | None = dc_field(default=None, compare=False, repr=False)
    dimension: int | None = dc_field(default=None, compare=False)

    @property
    def fbar(self) -> UPoly:
        """The squarefree first polynomial."""
        return self.first if self.kind == "radical" else squarefree_part(self.first)

    @property
    def delta(self) -> int | None:
        return self.minimal.degree if self.minimal is not None else None

    def polynomials(self) -> list:
        return [self.first, self.f0, *self.coords]

    def point_at(self, tau) -> tuple:
        """Coordinates ``f_i(tau) / f0(tau)`` at a root ``tau`` (raw value)."""
        F = self.field
        d = F.inv(self.f0(tau))
        return tuple(F.normalize(c(tau) * d) for c in self.coords)


@dataclass
class RurOutcome:
    """Result of the Las Vegas procedure: a RUR, or the first variable
    (1-based ``failed_index``) whose coordinate is not separated."""

    rur: ReducedRUR | None = None
    failed_index: int | None = None
    reason: str = ""

    @property
    def success(self) -> bool:
        return self.rur is not None

    def __bool__(self):
        return self.success


def _check_form(q: QuotientStructure, t: Sequence):
    if len(t) != q.nvars:
        raise ValueError(f"linear form has {len(t)} coefficients, expected {q.nvars}")
    F = q.field
    if all(F.convert(c) == 0 for c in t):
        raise ValueError("linear form is zero")
    if q.dimension == 0:
        raise EmptyVariety("the system has no solutions (unit ideal)")
    check_characteristic(F, q.dimension, "quotient dimension")


def _prepare(q: QuotientStructure, t: Sequence):
    _check_form(q, t)
    M_T = q.form_matrix(t)
    f, state = minimal_polynomial(M_T, q.field)
    fbar = squarefree_part(f)
    return M_T, f, state, fbar


def _assemble(q, t, f, fbar, coords, kind="radical") -> ReducedRUR:
    return ReducedRUR(fbar, rur_denominator(fbar), coords, tuple(t), q.field, kind,
                      minimal=f, dimension=q.dimension)


def radical_rur_candidate(q: QuotientStructure, t: Sequence) -> ReducedRUR:
    """Reduced RUR-candidate of the radical, without any separation check.

    Raises :class:`~rurlex.errors.NonSeparatingEvidence` when some ``h1`` is
    not invertible modulo ``fbar``.
    """
    M_T, f, state, fbar = _prepare(q, t)
    coords = []
    for M in q.matrices:
        basis = coordinate(M, state, f)
        param = bivariate_parametrization(basis)
        coords.append(param_to_rur_coordinate(fbar, param))
    return _assemble(q, t, f, fbar, coords)


def las_vegas_radical_rur(q: QuotientStructure, t: Sequence) -> RurOutcome:
    """Certified reduced RUR of the radical, or the first non-separated variable."""
    M_T, f, state, fbar = _prepare(q, t)
    coords = []
    for i, M in enumerate(q.matrices):
        basis = coordinate(M, state, f)
        if not separation_test(basis):
            name = q.ring.variables[i]
            return RurOutcome(failed_index=i + 1, reason=f"{name} not separated")
        param = bivariate_parametrization(basis)
        coords.append(param_to_rur_coordinate(fbar, param))
    return RurOutcome(_assemble(q, t, f, fbar, coords))


def full_ideal_rur(q: QuotientStructure, t: Sequence, radical: ReducedRUR) -> ReducedRUR:
    """Same coordinates and denominator, first polynomial replaced by the
    characteristic polynomial of ``M_t`` (roots counted with multiplicity)."""
    M_T = q.form_matrix(t)
    chi = characteristic_polynomial(M_T, q.field)
    if chi.degree != q.dimension:
        raise InternalInvariantViolation("characteristic polynomial degree differs from D")
    if radical.minimal is not None:
        exact_div(chi, radical.minimal)  # raises unless minpoly | charpoly
    if squarefree_part(chi) != radical.first:
        raise InternalInvariantViolation("charpoly and radical RUR have different roots")
    return replace(radical, first=chi, kind="full")


# --- separating form strategies ---------------------------------------------

def strategy_random(n: int, bound: int = 10, seed=None) -> tuple:
    """Uniform nonzero integers in ``[-bound, bound]``."""
    if bound < 1:
        raise ValueError("bound must be positive")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    choices = [c for c in range(-bound, bound + 1) if c]
    return tuple(rng.choice(choices) for _ in range(n))


def sequence_bound(n: int, D: int) -> int:
    return (n - 1) * D * (D - 1) // 2


def strategy_sequence(n: int, D: int) -> Iterator[tuple]:
    """Forms ``sum j^i X_i`` for ``j = 1 .. (n-1) D (D-1) / 2``.

    With one variable (or a single point) only ``X_1``-type forms are
    needed, so the first member is always produced.
    """
    if n == 1:
        yield (1,)
        return
    for j in range(1, max(sequence_bound(n, D), 1) + 1):
        yield tuple(j ** i for i in range(1, n + 1))


def certified_start(n: int) -> list:
    if n == 1:
        return [1]
    t = [0] * n
    t[-2], t[-1] = 1, -1
    return t


def strategy_certified(q: QuotientStructure, max_attempts: int | None = None,
                       start: Sequence | None = None) -> tuple:
    """Start from ``X_{n-1} - X_n`` and bump the coefficient of the first
    non-separated variable until the Las Vegas test succeeds.

    Returns ``(form, rur, attempts)``.
    """
    n = q.nvars
    D = q.dimension
    cap = max_attempts if max_attempts is not None else max(D * D * n, 1)
    t = list(start) if start is not None else certified_start(n)
    for attempt in range(1, cap + 1):
        out = las_vegas_radical_rur(q, t)
        if out.success:
            return tuple(t), out.rur, attempt
        t[out.failed_index - 1] += 1
        if all(q.field.convert(c) == 0 for c in t):
            t[out.failed_index - 1] += 1
    raise StrategyExhausted(f"no separating form after {cap} attempts")


def search_sequence(q: QuotientStructure) -> tuple:
    """First member of the sequence strategy accepted by the Las Vegas test."""
    n, D = q.nvars, q.dimension
    ch = q.field.characteristic
    if ch and ch <= sequence_bound(n, D):
        raise UnsupportedCharacteristic(
            f"the sequence strategy needs p > (n-1)D(D-1)/2 = {sequence_bound(n, D)}")
    for attempt, t in enumerate(strategy_sequence(n, D), 1):
        out = las_vegas_radical_rur(q, t)
        if out.success:
            return t, out.rur, attempt
    raise StrategyExhausted("no member of the sequence separates")


def search_random(q: QuotientStructure, bound: int = 10, seed=None,
                  max_attempts: int | None = None) -> tuple:
    """Random forms, each checked by the Las Vegas test."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    cap = max_attempts if max_attempts is not None else max(q.dimension * q.dimension * q.nvars, 1)
    for attempt in range(1, cap + 1):
        t = strategy_random(q.nvars, bound, rng)
        out = las_vegas_radical_rur(q, t)
        if out.success:
            return t, out.rur, attempt
    raise StrategyExhausted(f"no random separating form after {cap} attempts")


def find_separating_form(q: QuotientStructure, strategy: str = "certified",
                         bound: int = 10, seed=None) -> tuple:
    """Dispatch to a strategy; returns ``(form, radical_rur, attempts)``."""
    if strategy == "certified":
        return strategy_certified(q)
    if strategy == "sequence":
        return search_sequence(q)
    if strategy == "random":
        return search_random(q, bound, seed)
    raise ValueError(f"unknown strategy {strategy!r}")


# --- metrics ---------------------------------------------------------------

def matrix_sparsity(M: list) -> float:
    """Fraction of nonzero entries."""
    D = len(M)
    if not D:
        return 0.0
    return sum(1 for row in M for x in row if x) / (D * D)


def form_support(t: Sequence, field=None) -> tuple:
    """``(number of nonzero coefficients, n)``."""
    if field is not None:
        nz = sum(1 for c in t if field.convert(c))
    else:
        nz = sum(1 for c in t if c)
    return nz, len(t)


def coefficient_bitsize(c) -> float:
    """``log2 |numerator| + log2 denominator`` (0 for zero)."""
    c = Fraction(c)
    if c == 0:
        return 0.0
    return math.log2(abs(c.numerator)) + math.log2(c.denominator)


def rur_bitsize(rur: ReducedRUR) -> float:
    """Largest combined numerator/denominator size over all coefficients."""
    return max((coefficient_bitsize(c) for p in rur.polynomials() for c in p.coeffs), default=0.0)


def rur_integer_bitsize(rur: ReducedRUR) -> float:
    """Bitsize after clearing denominators polynomial by polynomial."""
    best = 0.0
    for p in rur.polynomials():
        if not p:
            continue
        cs = [Fraction(c) for c in p.coeffs]
        l = 1
        for c in cs:
            l = l * c.denominator // math.gcd(l, c.denominator)
        best = max(best, max(math.log2(abs(c * l)) for c in cs if c))
    return best


@dataclass
class Metrics:
    matrix_sparsity: float
    form_nonzeros: int
    nvars: int
    bitsize: float | None = None
    integer_bitsize: float | None = None

    @property
    def form_sparsity(self) -> str:
        return f"{self.form_nonzeros}/{self.nvars}"


def metrics(q: QuotientStructure, t: Sequence, rur: ReducedRUR | None = None) -> Metrics:
    nz, n = form_support(t, q.field)
    bits = ibits = None
    if rur is not None and rur.field.characteristic == 0:
        bits = rur_bitsize(rur)
        ibits = rur_integer_bitsize(rur)
    return Metrics(matrix_sparsity(q.form_matrix(t)), nz, n, bits, ibits)
