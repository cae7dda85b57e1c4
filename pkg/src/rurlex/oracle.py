"""Brute-force ground truth over small prime fields.

``enumerate_variety`` scans all of ``F_p^n`` with numpy and shares no code
with the solver.  ``split_system`` builds test systems whose zeros are known
in advance: the ideal is the intersection of local ideals
``<(X - a)^g : g not in S_a>`` for points ``a`` and downward closed exponent
sets ``S_a``.  It is computed by the Buchberger-Moeller algorithm on the
dual functionals ``f -> (1/b!) d^b f (a)``, ``b`` in ``S_a``.
"""

from __future__ import annotations

import heapq
import itertools
import random
from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetExceeded, NonSplitMinimalPolynomial
from .fglm import EchelonState
from .fields import PrimeField
from .mpoly import DEGREVLEX, PolyRing, Polynomial, System, mono_divides
from .upoly import UPoly

DEFAULT_BUDGET = 10 ** 7


@dataclass
class VarietyPoints:
    points: set = dc_field(default_factory=set)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))

    def __eq__(self, other):
        if isinstance(other, VarietyPoints):
            return self.points == other.points
        return self.points == set(other)


# --- exhaustive scan ---------------------------------------------------------

def _eval_grid(terms: dict, cols: list, p: int) -> np.ndarray:
    """Values of a polynomial at the points given column-wise."""
    acc = np.zeros(len(cols[0]), dtype=np.int64)
    powers = [dict() for _ in cols]

    def pw(i, e):
        if e not in powers[i]:
            powers[i][e] = np.ones_like(cols[i]) if e == 0 else pw(i, e - 1) * cols[i] % p
        return powers[i][e]

    for mono, c in terms.items():
        v = np.full(len(cols[0]), int(c) % p, dtype=np.int64)
        for i, e in enumerate(mono):
            if e:
                v = v * pw(i, e) % p
        acc = (acc + v) % p
    return acc


def _prefix_columns(idx: np.ndarray, k: int, p: int) -> list:
    """Digits of ``idx`` in base ``p``, most significant first (``k`` digits)."""
    cols = []
    rest = idx
    for _ in range(k):
        cols.append(rest % p)
        rest = rest // p
    cols.reverse()
    return cols


def _first_generator_zeros(g, prefix_cols: list, count: int, p: int) -> tuple:
    """All ``(prefix index, last coordinate)`` pairs where ``g`` vanishes.

    ``g`` is read as a polynomial in the last variable whose coefficients
    are evaluated on every prefix; one matrix product then evaluates it at
    all ``p`` values of the last coordinate.
    """
    by_power = {}
    for mono, c in g.terms.items():
        by_power.setdefault(mono[-1], {})[mono[:-1]] = c
    d = max(by_power)
    C = np.zeros((count, d + 1), dtype=np.int64)
    for e, terms in by_power.items():
        if prefix_cols:
            C[:, e] = _eval_grid(terms, prefix_cols, p)
        else:
            C[:, e] = int(terms[()]) % p
    xs = np.arange(p, dtype=np.int64)
    powers = np.ones((d + 1, p), dtype=np.int64)
    for e in range(1, d + 1):
        powers[e] = powers[e - 1] * xs % p
    vals = (C @ powers) % p
    return np.nonzero(vals == 0)


def enumerate_variety(system: System, p: int | None = None, budget: int = DEFAULT_BUDGET,
                      chunk: int = 1 << 20) -> VarietyPoints:
    """All points of ``F_p^n`` where every generator vanishes."""
    F = system.field if p is None else PrimeField(p)
    p = F.p
    if not p:
        raise ValueError("enumeration needs a prime field")
    n = system.nvars
    if p ** n > budget:
        raise BudgetExceeded(f"{p}^{n} points exceed the budget {budget}")
    polys = [g.change_ring(system.ring.clone(field=F)) if system.field != F else g
             for g in system.polys]
    polys = [g for g in polys if g.terms]
    if not polys:
        return VarietyPoints(set(itertools.product(range(p), repeat=n)))
    first, rest = polys[0], polys[1:]
    d = max(m[-1] for m in first.terms)
    exact = p * p * (d + 1) < 1 << 62
    found = set()
    nprefix = p ** (n - 1)
    step = max(1, chunk // p)
    for start in range(0, nprefix, step):
        idx = np.arange(start, min(nprefix, start + step), dtype=np.int64)
        pcols = _prefix_columns(idx, n - 1, p)
        if exact:
            rows, last = _first_generator_zeros(first, pcols, len(idx), p)
            cols = [c[rows] for c in pcols] + [last.astype(np.int64)]
            checks = rest
        else:
            reps = np.repeat(np.arange(len(idx)), p)
            cols = [c[reps] for c in pcols] + [np.tile(np.arange(p, dtype=np.int64), len(idx))]
            checks = polys
        alive = np.ones(len(cols[0]), dtype=bool)
        for g in checks:
            if not alive.any():
                break
            keep = np.flatnonzero(alive)
            vals = _eval_grid(g.terms, [c[keep] for c in cols], p)
            alive[keep[vals != 0]] = False
        for k in np.flatnonzero(alive):
            found.add(tuple(int(c[k]) for c in cols))
    return VarietyPoints(found)


def is_separating(t: Sequence, V: Iterable, p: int | None = None) -> bool:
    """True iff ``x -> sum t_i x_i`` is injective on ``V``."""
    seen = set()
    for pt in V:
        v = sum(a * b for a, b in zip(t, pt))
        if p:
            v %= p
        if v in seen:
            return False
        seen.add(v)
    return True


def collision(t: Sequence, V: Iterable, p: int | None = None):
    """A pair of distinct points with the same value of ``t``, or None."""
    seen = {}
    for pt in V:
        v = sum(a * b for a, b in zip(t, pt))
        if p:
            v %= p
        if v in seen:
            return seen[v], pt
        seen[v] = pt
    return None


def roots_in_field(f: UPoly) -> list:
    """Roots of ``f`` in its prime field by exhaustive evaluation."""
    p = f.field.p
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * xs + int(c)) % p
    return [int(x) for x in np.flatnonzero(acc == 0)]


def points_of_rur(rur, p: int | None = None) -> VarietyPoints:
    """Points ``(f_i(tau) / f0(tau))_i`` over the roots ``tau`` of ``fbar``."""
    fbar = rur.fbar
    if p is not None and fbar.field.p != p:
        raise ValueError("RUR is not over GF(p)")
    roots = roots_in_field(fbar)
    if len(roots) != fbar.degree:
        raise NonSplitMinimalPolynomial(
            f"fbar has degree {fbar.degree} but {len(roots)} roots in the field")
    return VarietyPoints({rur.point_at(tau) for tau in roots})


# --- systems with known zeros -------------------------------------------------

def hasse_value(mono: Sequence, a: Sequence, beta: Sequence, p: int) -> int:
    """``(1/beta!) d^beta x^mono`` at ``a`` (Hasse derivative)."""
    v = 1
    for e, ai, b in zip(mono, a, beta):
        if b > e:
            return 0
        v = v * comb(e, b) * pow(ai, e - b, p) % p
    return v


def local_ideal_generators(a: Sequence, staircase: Sequence) -> list:
    """Exponents ``g`` minimal outside a downward closed ``staircase``."""
    S = set(map(tuple, staircase))
    n = len(a)
    border = set()
    for s in S | {tuple([0] * n)}:
        for i in range(n):
            g = s[:i] + (s[i] + 1,) + s[i + 1:]
            if g not in S:
                border.add(g)
    return sorted(g for g in border
                  if not any(h != g and mono_divides(h, g) for h in border))


def is_downward_closed(staircase: Iterable) -> bool:
    S = set(map(tuple, staircase))
    for s in S:
        for i, e in enumerate(s):
            if e and s[:i] + (e - 1,) + s[i + 1:] not in S:
                return False
    return bool(S)


def random_staircase(n: int, size: int, rng: random.Random) -> list:
    """Random downward closed set of ``size`` exponent vectors."""
    S = [tuple([0] * n)]
    while len(S) < size:
        cand = set()
        for s in S:
            for i in range(n):
                g = s[:i] + (s[i] + 1,) + s[i + 1:]
                if g not in S and all(
                        g[:j] + (g[j] - 1,) + g[j + 1:] in S for j in range(n) if g[j]):
                    cand.add(g)
        S.append(rng.choice(sorted(cand)))
    return S


def buchberger_moeller(ring: PolyRing, functionals: Sequence) -> list:
    """Reduced degrevlex Groebner basis of the ideal of polynomials killed
    by every functional; each functional maps an exponent tuple to GF(p)."""
    F = ring.field
    n = ring.nvars
    key = DEGREVLEX.key
    state = EchelonState(len(functionals), F)
    staircase = []
    leads = []
    gens = []
    heap = [(key(tuple([0] * n)), tuple([0] * n))]
    seen = {tuple([0] * n)}
    while heap:
        _, m = heapq.heappop(heap)
        if any(mono_divides(l, m) for l in leads):
            continue
        vec = [F.normalize(L(m)) for L in functionals]
        dep = state.push(vec, m)
        if dep is None:
            staircase.append(m)
            for i in range(n):
                mm = m[:i] + (m[i] + 1,) + m[i + 1:]
                if mm not in seen:
                    seen.add(mm)
                    heapq.heappush(heap, (key(mm), mm))
            continue
        terms = {m: 1}
        for lab, c in zip(state.labels, dep):
            if c:
                terms[lab] = F.normalize(-c)
        leads.append(m)
        gens.append(Polynomial(ring, terms))
    return gens


@dataclass
class SplitSystem:
    system: System
    points: list
    staircases: list
    dimension: int

    @property
    def variety(self) -> VarietyPoints:
        return VarietyPoints(set(self.points))

    @property
    def radical(self) -> bool:
        return all(len(s) == 1 for s in self.staircases)


def _mix(gens: list, rng: random.Random, F) -> list:
    """Invertible unitriangular recombination of the generators."""
    out = []
    for i, g in enumerate(gens):
        h = g
        for j in range(i + 1, len(gens)):
            if rng.random() < 0.5:
                h = h + gens[j].scale(F.convert(rng.randrange(1, F.p)))
        out.append(h.scale(F.convert(rng.randrange(1, F.p))))
    return out


def split_system(n: int, p: int, npoints: int, rng: random.Random, max_mult: int = 1,
                 variables: Sequence[str] | None = None, mix: bool = True,
                 coordinate_range: int | None = None) -> SplitSystem:
    """Random system over GF(p) vanishing exactly at ``npoints`` known
    points, each with a random local structure of length ``<= max_mult``."""
    F = PrimeField(p)
    names = list(variables) if variables else [f"x{i + 1}" for i in range(n)]
    ring = PolyRing(names, F)
    hi = coordinate_range if coordinate_range else p
    pts = set()
    while len(pts) < npoints:
        pts.add(tuple(rng.randrange(hi) for _ in range(n)))
    pts = sorted(pts)
    stairs = [random_staircase(n, rng.randint(1, max_mult), rng) for _ in pts]
    funcs = []
    for a, S in zip(pts, stairs):
        for b in S:
            funcs.append(lambda m, a=a, b=b: hasse_value(m, a, b, p))
    gens = buchberger_moeller(ring, funcs)
    if mix:
        gens = _mix(gens, rng, F)
    D = sum(len(s) for s in stairs)
    return SplitSystem(System(ring, gens, f"split-{n}-{p}-{D}"), pts, stairs, D)


def colliding_form(P: Sequence, Q: Sequence, p: int, rng: random.Random) -> tuple:
    """Random nonzero form with ``t . (P - Q) = 0 mod p``."""
    d = [(a - b) % p for a, b in zip(P, Q)]
    k = next(i for i, x in enumerate(d) if x)
    while True:
        t = [rng.randrange(p) for _ in d]
        t[k] = 0
        s = sum(a * b for a, b in zip(t, d)) % p
        t[k] = -s * pow(d[k], -1, p) % p
        if any(t):
            return tuple(t)


def multiplicities_at(rur_full_first: UPoly, rur) -> dict:
    """Multiplicity of each root of ``fbar`` in the full first polynomial."""
    out = {}
    for tau in roots_in_field(rur.fbar):
        f = rur_full_first
        k = 0
        lin = UPoly([-tau, 1], f.field)
        while f.degree > 0 and not f(tau):
            f = f // lin
            k += 1
        out[rur.point_at(tau)] = k
    return out
