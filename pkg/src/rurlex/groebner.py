"""Buchberger's algorithm and the quotient algebra of a zero-dimensional ideal.

The engine works on the raw term dicts of :class:`~rurlex.mpoly.Polynomial`
with the normal selection strategy and the Gebauer-Moeller pair update
(Buchberger's product and chain criteria).  Its output feeds
:func:`quotient_basis` and :func:`multiplication_matrices`, which produce
the standard monomials and the matrices of multiplication by each variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InternalInvariantViolation, NotZeroDimensional, ResourceExceeded
from .fglm import as_field_matrix, matmul_mod, use_numpy
from .mpoly import (
    DEGREVLEX,
    MonomialOrder,
    Polynomial,
    PolyRing,
    System,
    mono_div,
    mono_divides,
    mono_lcm,
)


def _mul_mono(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _disjoint(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def _reduce(terms: dict, basis: list, key, norm) -> dict:
    """Full reduction of ``terms`` by monic ``(lm, terms)`` pairs."""
    p = dict(terms)
    rem = {}
    while p:
        m = max(p, key=key)
        c = p[m]
        for lm, g in basis:
            if mono_divides(lm, m):
                q = mono_div(m, lm)
                for gm, gc in g.items():
                    mm = _mul_mono(gm, q)
                    v = norm(p.get(mm, 0) - c * gc)
                    if v:
                        p[mm] = v
                    else:
                        p.pop(mm, None)
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def _monic(terms: dict, key, F):
    lm = max(terms, key=key)
    c = terms[lm]
    if c != 1:
        inv = F.inv(c)
        terms = {m: F.normalize(v * inv) for m, v in terms.items()}
    return lm, terms


@dataclass
class GroebnerBasis:
    ring: PolyRing
    polys: list
    order: MonomialOrder
    reduced: bool = True

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def leading_monomials(self) -> list:
        return [g.leading_monomial(self.order) for g in self.polys]

    def fingerprint(self) -> tuple:
        """Sorted leading monomials, used to compare modular images."""
        return tuple(sorted(self.leading_monomials()))

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant()


def normal_form(p: Polynomial, G: GroebnerBasis | Sequence[Polynomial], order: MonomialOrder | None = None) -> Polynomial:
    """Remainder of ``p`` on full division by ``G``."""
    if isinstance(G, GroebnerBasis):
        order = order or G.order
        polys = G.polys
    else:
        polys = list(G)
        order = order or p.ring.order
    F = p.ring.field
    basis = [_monic(dict(g.terms), order.key, F) for g in polys if g]
    return Polynomial(p.ring, _reduce(p.terms, basis, order.key, F.normalize))


def buchberger(F_polys: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
               pair_limit: int | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``F_polys``."""
    if not F_polys:
        raise ValueError("need at least one generator")
    ring = F_polys[0].ring.clone(order=order)
    F = ring.field
    key = order.key
    norm = F.normalize

    lms: list = []
    polys: list = []
    active: list = []
    pairs: list = []
    unit = False

    def update(h: int):
        nonlocal pairs, active
        lmh = lms[h]
        C = list(active)
        D = []
        while C:
            g1 = C.pop()
            l1 = mono_lcm(lmh, lms[g1])
            if _disjoint(lmh, lms[g1]) or not any(
                    mono_divides(mono_lcm(lmh, lms[g2]), l1) for g2 in C + D):
                D.append(g1)
        E = [(g, h) for g in D if not _disjoint(lmh, lms[g])]
        kept = []
        for g1, g2 in pairs:
            L = mono_lcm(lms[g1], lms[g2])
            if (not mono_divides(lmh, L) or mono_lcm(lms[g1], lmh) == L
                    or mono_lcm(lmh, lms[g2]) == L):
                kept.append((g1, g2))
        pairs = kept + E
        active = [g for g in active if not mono_divides(lmh, lms[g])] + [h]

    def add(terms: dict):
        nonlocal unit
        lm, t = _monic(terms, key, F)
        if not any(lm):
            unit = True
        lms.append(lm)
        polys.append(t)
        update(len(polys) - 1)

    def current():
        return [(lms[i], polys[i]) for i in active]

    for f in F_polys:
        if f.ring.variables != ring.variables or f.ring.field != F:
            raise ValueError("generators live in different rings")
        h = _reduce(f.terms, current(), key, norm)
        if h:
            add(h)
            if unit:
                break

    processed = 0
    while pairs and not unit:
        best = min(range(len(pairs)),
                   key=lambda k: key(mono_lcm(lms[pairs[k][0]], lms[pairs[k][1]])))
        i, j = pairs.pop(best)
        processed += 1
        if pair_limit is not None and processed > pair_limit:
            raise ResourceExceeded(f"more than {pair_limit} S-pairs processed")
        L = mono_lcm(lms[i], lms[j])
        qi, qj = mono_div(L, lms[i]), mono_div(L, lms[j])
        s = {}
        for m, c in polys[i].items():
            s[_mul_mono(m, qi)] = c
        for m, c in polys[j].items():
            mm = _mul_mono(m, qj)
            v = norm(s.get(mm, 0) - c)
            if v:
                s[mm] = v
            else:
                s.pop(mm, None)
        h = _reduce(s, current(), key, norm)
        if h:
            add(h)

    if unit:
        return GroebnerBasis(ring, [ring.one()], order, True)

    # interreduce the (already minimal) active set
    basis = current()
    reduced = []
    for k, (lm, g) in enumerate(basis):
        others = basis[:k] + basis[k + 1:]
        tail = {m: c for m, c in g.items() if m != lm}
        t = _reduce(tail, others, key, norm)
        t[lm] = 1
        reduced.append((lm, t))
    reduced.sort(key=lambda x: key(x[0]))
    return GroebnerBasis(ring, [Polynomial(ring, t) for _, t in reduced], order, True)


def is_groebner(G: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Check that every S-polynomial of ``G`` reduces to zero (no criteria)."""
    polys = [g for g in G if g]
    if not polys:
        return True
    F = polys[0].ring.field
    key = order.key
    basis = [_monic(dict(g.terms), key, F) for g in polys]
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            (la, ga), (lb, gb) = basis[a], basis[b]
            L = mono_lcm(la, lb)
            qa, qb = mono_div(L, la), mono_div(L, lb)
            s = {}
            for m, c in ga.items():
                mm = _mul_mono(m, qa)
                s[mm] = F.normalize(s.get(mm, 0) + c)
            for m, c in gb.items():
                mm = _mul_mono(m, qb)
                s[mm] = F.normalize(s.get(mm, 0) - c)
            s = {m: c for m, c in s.items() if c}
            if _reduce(s, basis, key, F.normalize):
                return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    lms = G.leading_monomials()
    for k, g in enumerate(G.polys):
        if g.leading_coefficient(G.order) != 1:
            return False
        for m in g.terms:
            for j, lm in enumerate(lms):
                if mono_divides(lm, m) and (j != k or m != lms[k]):
                    return False
    return True


def quotient_basis(G: GroebnerBasis) -> list:
    """Standard monomials of ``G``, sorted increasingly by the order."""
    lms = G.leading_monomials()
    n = G.ring.nvars
    if G.is_unit():
        return []
    for i in range(n):
        if not any(lm[i] > 0 and sum(lm) == lm[i] for lm in lms):
            raise NotZeroDimensional(
                f"no pure power of {G.ring.variables[i]} among the leading terms")
    one = (0,) * n
    seen = {one}
    stack = [one]
    while stack:
        m = stack.pop()
        for i in range(n):
            mm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if mm not in seen and not any(mono_divides(lm, mm) for lm in lms):
                seen.add(mm)
                stack.append(mm)
    return sorted(seen, key=G.order.key)


@dataclass
class QuotientStructure:
    """Monomial basis of ``K[X]/I`` and the multiplication matrices.

    ``matrices[i][r][c]`` is row ``r``, column ``c`` of the matrix of
    multiplication by the i-th variable; column ``c`` holds the coordinates
    of ``X_i * basis[c]``.
    """

    ring: PolyRing
    gb: GroebnerBasis
    basis: list
    matrices: tuple

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def field(self):
        return self.ring.field

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def form_matrix(self, t: Sequence) -> list:
        """Matrix of multiplication by the linear form ``sum t_i X_i``."""
        F = self.field
        D = self.dimension
        coeffs = [F.convert(c) for c in t]
        if len(coeffs) != self.nvars:
            raise ValueError("linear form length does not match the number of variables")
        norm = F.normalize
        out = [[0] * D for _ in range(D)]
        for c, M in zip(coeffs, self.matrices):
            if not c:
                continue
            for r in range(D):
                orow, mrow = out[r], M[r]
                for k in range(D):
                    if mrow[k]:
                        orow[k] = norm(orow[k] + c * mrow[k])
        return out

    def coordinates(self, p: Polynomial) -> list:
        """Coordinates of the normal form of ``p`` in the basis."""
        index = {m: k for k, m in enumerate(self.basis)}
        v = [0] * self.dimension
        for m, c in normal_form(p.change_ring(self.gb.ring), self.gb).terms.items():
            v[index[m]] = c
        return v


def multiplication_matrices(G: GroebnerBasis, basis: list | None = None,
                            check: bool = True) -> QuotientStructure:
    """Matrices of multiplication by each variable in the quotient algebra."""
    if basis is None:
        basis = quotient_basis(G)
    ring = G.ring
    F = ring.field
    key = G.order.key
    gb_pairs = [_monic(dict(g.terms), key, F) for g in G.polys]
    index = {m: k for k, m in enumerate(basis)}
    D = len(basis)
    n = ring.nvars
    cache: dict = {}
    columns = []  # columns[i][c] = sparse dict row -> value
    for i in range(n):
        cols = []
        for m in basis:
            mm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if mm in index:
                cols.append({index[mm]: 1})
                continue
            if mm not in cache:
                nf = _reduce({mm: 1}, gb_pairs, key, F.normalize)
                try:
                    cache[mm] = {index[t]: c for t, c in nf.items()}
                except KeyError:
                    raise InternalInvariantViolation("normal form left the staircase") from None
            cols.append(cache[mm])
        columns.append(cols)
    if check:
        _check_commuting(columns, F)
    mats = []
    for cols in columns:
        M = [[0] * D for _ in range(D)]
        for c, col in enumerate(cols):
            for r, v in col.items():
                M[r][c] = v
        mats.append(M)
    return QuotientStructure(ring, G, list(basis), tuple(mats))


def _sparse_product_column(A_cols, col: dict, norm) -> dict:
    out: dict = {}
    for l, v in col.items():
        for r, a in A_cols[l].items():
            out[r] = out.get(r, 0) + v * a
    return {r: x for r, x in ((r, norm(x)) for r, x in out.items()) if x}


def _check_commuting(columns, F):
    norm = F.normalize
    n = len(columns)
    for i in range(n):
        for j in range(i + 1, n):
            for col_i, col_j in zip(columns[i], columns[j]):
                # (M_i M_j) e_c versus (M_j M_i) e_c
                if _sparse_product_column(columns[i], col_j, norm) != \
                        _sparse_product_column(columns[j], col_i, norm):
                    raise InternalInvariantViolation(
                        f"multiplication matrices {i} and {j} do not commute")


def matrices_commute(A: list, B: list, F) -> bool:
    """Exact dense check ``AB == BA``."""
    if use_numpy(F):
        a, b = as_field_matrix(A, F), as_field_matrix(B, F)
        return bool((matmul_mod(a, b, F.p) == matmul_mod(b, a, F.p)).all())
    D = len(A)
    norm = F.normalize
    for r in range(D):
        for c in range(D):
            ab = norm(sum(A[r][k] * B[k][c] for k in range(D)))
            ba = norm(sum(B[r][k] * A[k][c] for k in range(D)))
            if ab != ba:
                return False
    return True


def quotient_structure(system: System | Sequence[Polynomial], order: MonomialOrder = DEGREVLEX,
                       pair_limit: int | None = None, check: bool = True) -> QuotientStructure:
    """Groebner basis, standard monomials and multiplication matrices in one go."""
    polys = system.polys if isinstance(system, System) else list(system)
    G = buchberger(polys, order, pair_limit)
    basis = quotient_basis(G)
    return multiplication_matrices(G, basis, check)
