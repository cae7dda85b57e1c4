"""Incremental echelon forms, minimal polynomials and bivariate lex bases.

Everything here works with dense matrices given as lists of rows over a
field from :mod:`rurlex.fields`.  Vectors are coordinates in the monomial
basis of the quotient algebra; the first basis element is always ``1``.

Monomials of ``K[T, X]`` are labelled ``(k, j)`` for ``X^k T^j``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from operator import mul
from typing import Sequence

import numpy as np

from .errors import InternalInvariantViolation
from .upoly import UPoly

# Primes below this bound use int64 numpy kernels: products of two residues
# fit in 63 bits, and splitting one factor into 16-bit halves keeps dot
# products of up to 2^16 terms exact.
FAST_PRIME_LIMIT = 1 << 31


def use_numpy(F) -> bool:
    return F.p is not None and F.p < FAST_PRIME_LIMIT


def _dot_mod(A: np.ndarray, x: np.ndarray, p: int) -> np.ndarray:
    """``A @ x mod p`` without int64 overflow."""
    lo = x & 0xFFFF
    hi = x >> 16
    return ((A @ lo) % p + ((A @ hi) % p) * 65536) % p


def _vecmat_mod(a: np.ndarray, M: np.ndarray, p: int) -> np.ndarray:
    """``a @ M mod p`` without int64 overflow."""
    lo = a & 0xFFFF
    hi = a >> 16
    return ((lo @ M) % p + ((hi @ M) % p) * 65536) % p


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``A @ B mod p`` without int64 overflow."""
    return _dot_mod(A, B, p)


def as_field_matrix(M, F):
    """numpy copy of ``M`` for small prime fields, ``M`` itself otherwise."""
    if use_numpy(F) and not isinstance(M, np.ndarray):
        return np.array(M, dtype=np.int64).reshape(len(M), len(M))
    return M


def matvec(M, v, F):
    """Dense product ``M v`` over the field ``F``."""
    if isinstance(M, np.ndarray):
        return _dot_mod(M, np.asarray(v, dtype=np.int64), F.p)
    p = F.p
    if p:
        return [sum(map(mul, row, v)) % p for row in M]
    return [sum(map(mul, row, v)) for row in M]


class EchelonState:
    """Row echelon form ``U`` of the vectors pushed so far, with the change
    of basis ``L`` (each row of ``U`` as a combination of labelled vectors).

    Only linearly independent vectors receive a label; ``labels`` is the
    ordered independent set ``B`` and ``vectors`` keeps their coordinates.

    Over small prime fields the constructor returns a numpy-backed
    :class:`ModularEchelonState` with the same interface.
    """

    def __new__(cls, dimension: int, field):
        if cls is EchelonState and use_numpy(field):
            return super().__new__(ModularEchelonState)
        return super().__new__(cls)

    def __init__(self, dimension: int, field):
        self.dimension = dimension
        self.field = field
        self.pivots: list = []      # pivot column of each row of U
        self.U: list = []           # rows normalized to 1 at their pivot
        self.L: list = []           # L[r][b] = coefficient of labels[b] in U[r]
        self.labels: list = []
        self.index: dict = {}       # label -> row of U where it was inserted
        self.vectors: dict = {}     # label -> coordinates

    def clone(self) -> "EchelonState":
        other = object.__new__(EchelonState)
        other.dimension = self.dimension
        other.field = self.field
        other.pivots = list(self.pivots)
        other.U = [list(r) for r in self.U]
        other.L = [list(r) for r in self.L]
        other.labels = list(self.labels)
        other.index = dict(self.index)
        other.vectors = dict(self.vectors)   # vectors are never mutated
        return other

    def __len__(self):
        return len(self.labels)

    def push(self, vector: Sequence, label):
        """Insert ``vector``.

        Returns ``None`` if it is independent of the labelled vectors (it is
        then labelled ``label``), otherwise the list ``c`` with
        ``vector = sum c[b] * vectors[labels[b]]``.
        """
        F = self.field
        p = F.p
        v = list(vector)
        nb = len(self.labels)
        comb = [0] * (nb + 1)
        comb[nb] = 1
        for piv, urow, lrow in zip(self.pivots, self.U, self.L):
            a = v[piv]
            if not a:
                continue
            if p:
                for k in range(piv, len(v)):
                    if urow[k]:
                        v[k] = (v[k] - a * urow[k]) % p
                for k, x in enumerate(lrow):
                    if x:
                        comb[k] = (comb[k] - a * x) % p
            else:
                for k in range(piv, len(v)):
                    if urow[k]:
                        v[k] = v[k] - a * urow[k]
                for k, x in enumerate(lrow):
                    if x:
                        comb[k] = comb[k] - a * x
        piv = next((k for k, x in enumerate(v) if x), None)
        if piv is None:
            # 0 = sum comb[b] w_b + 1 * vector
            return [F.normalize(-c) for c in comb[:nb]]
        s = F.inv(v[piv])
        if s != 1:
            v = [F.normalize(x * s) for x in v]
            comb = [F.normalize(x * s) for x in comb]
        self.pivots.append(piv)
        self.U.append(v)
        self.L.append(comb)
        self.index[label] = len(self.U) - 1
        self.labels.append(label)
        self.vectors[label] = list(vector)
        return None


class ModularEchelonState(EchelonState):
    """Reduced row echelon variant over GF(p), p < 2^31.

    Every pivot column is zero outside its row, so reducing a vector is a
    single product with the stacked rows of ``U``.
    """

    def __init__(self, dimension: int, field):
        self.dimension = dimension
        self.field = field
        self.p = field.p
        self.U = np.zeros((dimension, dimension), dtype=np.int64)
        self.L = np.zeros((dimension, dimension + 1), dtype=np.int64)
        self.pivots = []
        self.labels = []
        self.index = {}
        self.vectors = {}

    def clone(self) -> "ModularEchelonState":
        other = object.__new__(ModularEchelonState)
        other.dimension = self.dimension
        other.field = self.field
        other.p = self.p
        other.U = self.U.copy()
        other.L = self.L.copy()
        other.pivots = list(self.pivots)
        other.labels = list(self.labels)
        other.index = dict(self.index)
        other.vectors = dict(self.vectors)
        return other

    def push(self, vector, label):
        p = self.p
        vec = np.asarray(vector, dtype=np.int64) % p
        r = len(self.pivots)
        nb = len(self.labels)
        if r:
            a = vec[self.pivots]
            v = (vec - _vecmat_mod(a, self.U[:r], p)) % p
            comb = _vecmat_mod(a, self.L[:r], p)
        else:
            v = vec
            comb = np.zeros(self.dimension + 1, dtype=np.int64)
        nz = np.flatnonzero(v)
        if not len(nz):
            return [int(c) for c in comb[:nb]]
        piv = int(nz[0])
        s = pow(int(v[piv]), -1, p)
        u = v * s % p
        lrow = (-comb) % p
        lrow[nb] = (lrow[nb] + 1) % p
        lrow = lrow * s % p
        if r:
            col = self.U[:r, piv].copy()
            if col.any():
                self.U[:r] = (self.U[:r] - np.outer(col, u)) % p
                self.L[:r] = (self.L[:r] - np.outer(col, lrow)) % p
        self.U[r] = u
        self.L[r] = lrow
        self.pivots.append(piv)
        self.index[label] = r
        self.labels.append(label)
        self.vectors[label] = vec
        return None


def minimal_polynomial(M_T: list, field) -> tuple:
    """Minimal polynomial of ``M_T`` via the Krylov sequence of the first
    basis vector; returns ``(f, state)`` with ``state.labels`` equal to
    ``[(0,0), (0,1), ..., (0, deg f - 1)]``.
    """
    D = len(M_T)
    M_T = as_field_matrix(M_T, field)
    state = EchelonState(D, field)
    v = [0] * D
    if D:
        v[0] = 1
    state.push(v, (0, 0))
    i = 0
    while True:
        v = matvec(M_T, v, field)
        dep = state.push(v, (0, i + 1))
        if dep is not None:
            # T^{i+1} = sum dep[j] T^j
            coeffs = [field.normalize(-c) for c in dep] + [1]
            f = UPoly(coeffs, field, raw=True)
            if f.degree != len(state.labels):
                raise InternalInvariantViolation("minimal polynomial degree mismatch")
            return f, state
        i += 1


@dataclass
class BivariateLexBasis:
    """Reduced lex (X > T) Groebner basis ``{f(T)} + {g_k}`` of an ideal of
    ``K[T, X]``; ``gks[k]`` lists ``a_{k,0}, ..., a_{k,k}`` (polynomials in T).
    X-degrees without an element are simply missing.
    """

    f: UPoly
    gks: dict = dc_field(default_factory=dict)
    delta: int = 0
    bigD: int = 0

    @property
    def field(self):
        return self.f.field

    @property
    def m(self) -> int:
        return max(self.gks, default=0)

    def coeff(self, k: int, i: int) -> UPoly:
        """``a_{k,i}``; zero when ``g_k`` is absent."""
        g = self.gks.get(k)
        if g is None or i >= len(g):
            return UPoly.zero(self.field)
        return g[i]

    def multidegrees(self) -> list:
        return [(self.gks[k][k].degree, k) for k in sorted(self.gks)]

    def check(self):
        """Raise unless the structural invariants of a reduced lex basis hold."""
        if self.f.degree != self.delta:
            raise InternalInvariantViolation("deg f differs from delta")
        if len(self.gks) > 2 * (self.bigD - self.delta) + 1:
            raise InternalInvariantViolation(
                f"{len(self.gks)} elements exceed 2(D - delta) + 1 = {2 * (self.bigD - self.delta) + 1}")
        prev_t = self.delta
        prev_x = 0
        for k in sorted(self.gks):
            g = self.gks[k]
            if len(g) != k + 1 or not g[k]:
                raise InternalInvariantViolation(f"g_{k} has no X^{k} coefficient")
            dt = g[k].degree
            if not (k > prev_x and dt < prev_t):
                raise InternalInvariantViolation("multidegrees are not strictly monotone")
            prev_t, prev_x = dt, k

    def evaluate(self, M_T: list, M_X: list, field) -> list:
        """Vectors ``g(M_T, M_X) * 1`` for ``f`` and each ``g_k`` (all zero for
        members of the ideal)."""
        D = len(M_T)
        one = [0] * D
        if D:
            one[0] = 1
        # tx[(k, j)] = X^k T^j * 1
        cache = {(0, 0): one}

        def vec(k, j):
            if (k, j) not in cache:
                if j > 0:
                    cache[(k, j)] = matvec(M_T, vec(k, j - 1), field)
                else:
                    cache[(k, j)] = matvec(M_X, vec(k - 1, 0), field)
            return cache[(k, j)]

        def poly_vec(parts):
            acc = [0] * D
            for k, a in parts:
                for j, c in enumerate(a.coeffs):
                    if c:
                        w = vec(k, j)
                        acc = [field.normalize(x + c * y) for x, y in zip(acc, w)]
            return acc

        out = [poly_vec([(0, self.f)])]
        for k in sorted(self.gks):
            out.append(poly_vec(list(enumerate(self.gks[k]))))
        return out


def coordinate(M_X: list, state: EchelonState, f: UPoly) -> BivariateLexBasis:
    """Bivariate reduced lex basis of ``I_T`` intersected with ``K[T, X]``.

    ``state`` comes from :func:`minimal_polynomial` on the same basis and is
    not modified.  Monomials ``X^k T^j`` are scanned for ``k = 1, 2, ...``
    and ``j < delta_k``; the first dependency at ``(k, j)`` gives ``g_k``
    with leading monomial ``X^k T^j`` and shrinks the scan to ``j`` columns.
    """
    field = state.field
    M_X = as_field_matrix(M_X, field)
    state = state.clone()
    delta0 = len(state.labels)
    D = state.dimension
    prev = [state.vectors[(0, j)] for j in range(delta0)]
    gks = {}
    k = 0
    width = delta0
    while width > 0:
        k += 1
        cur = []
        new_width = width
        for j in range(width):
            v = matvec(M_X, prev[j], field)
            dep = state.push(v, (k, j))
            if dep is None:
                cur.append(v)
                continue
            # X^k T^j - sum dep[b] * labels[b]
            a = [[0] * (delta0 + 1) for _ in range(k + 1)]
            a[k][j] = 1
            for (kk, jj), c in zip(state.labels, dep):
                if c:
                    a[kk][jj] = field.normalize(a[kk][jj] - c)
            gks[k] = [UPoly(row, field, raw=True) for row in a]
            new_width = j
            break
        prev = cur
        width = new_width
        if k > D + 1:
            raise InternalInvariantViolation("coordinate scan does not terminate")
    basis = BivariateLexBasis(f, gks, delta0, D)
    basis.check()
    return basis


def _hessenberg_mod(M, p: int) -> np.ndarray:
    H = np.array(M, dtype=np.int64).reshape(len(M), len(M)) % p
    n = len(H)
    for m in range(1, n - 1):
        nz = np.flatnonzero(H[m:, m - 1])
        if not len(nz):
            continue
        i = m + int(nz[0])
        if i != m:
            H[[i, m]] = H[[m, i]]
            H[:, [i, m]] = H[:, [m, i]]
        inv = pow(int(H[m, m - 1]), -1, p)
        u = H[m + 1:, m - 1] * inv % p
        if not u.any():
            continue
        # the row operations for different j commute, so apply them at once
        H[m + 1:] = (H[m + 1:] - np.outer(u, H[m])) % p
        H[:, m] = (H[:, m] + _dot_mod(H[:, m + 1:], u, p)) % p
    return H


def _charpoly_hessenberg_mod(H: np.ndarray, p: int) -> list:
    n = len(H)
    P = [np.zeros(n + 1, dtype=np.int64) for _ in range(n + 1)]
    P[0][0] = 1
    for m in range(1, n + 1):
        prev = P[m - 1]
        pm = np.zeros(n + 1, dtype=np.int64)
        pm[1:] = prev[:-1]
        pm = (pm - int(H[m - 1, m - 1]) * prev) % p
        t = 1
        for i in range(1, m):
            t = t * int(H[m - i, m - i - 1]) % p
            if not t:
                break
            c = t * int(H[m - i - 1, m - 1]) % p
            if c:
                pm = (pm - c * P[m - i - 1]) % p
        P[m] = pm
    return [int(c) for c in P[n]]


def hessenberg(M: list, field) -> list:
    """Upper Hessenberg matrix similar to ``M`` (exact elimination)."""
    if use_numpy(field):
        return _hessenberg_mod(M, field.p).tolist()
    F = field
    norm = F.normalize
    H = [list(r) for r in M]
    n = len(H)
    for m in range(1, n - 1):
        i = next((r for r in range(m, n) if H[r][m - 1]), None)
        if i is None:
            continue
        if i != m:
            H[i], H[m] = H[m], H[i]
            for row in H:
                row[i], row[m] = row[m], row[i]
        inv = F.inv(H[m][m - 1])
        for j in range(m + 1, n):
            u = norm(H[j][m - 1] * inv)
            if not u:
                continue
            rj, rm = H[j], H[m]
            for c in range(n):
                if rm[c]:
                    rj[c] = norm(rj[c] - u * rm[c])
            for row in H:
                if row[j]:
                    row[m] = norm(row[m] + u * row[j])
    return H


def characteristic_polynomial(M: list, field) -> UPoly:
    """``det(T*I - M)`` through a Hessenberg form and the standard recurrence."""
    if use_numpy(field):
        coeffs = _charpoly_hessenberg_mod(_hessenberg_mod(M, field.p), field.p)
        chi = UPoly(coeffs, field, raw=True)
        if chi.degree != len(M) or chi.lc != 1:
            raise InternalInvariantViolation("characteristic polynomial is not monic of degree D")
        return chi
    H = hessenberg(M, field)
    n = len(H)
    P = [UPoly.one(field)]
    T = UPoly.monomial(1, field)
    for m in range(1, n + 1):
        pm = (T - H[m - 1][m - 1]) * P[m - 1]
        t = 1
        for i in range(1, m):
            t = field.normalize(t * H[m - i][m - i - 1])
            if not t:
                break
            c = field.normalize(t * H[m - i - 1][m - 1])
            if c:
                pm = pm - P[m - i - 1].scale(c)
        P.append(pm)
    chi = P[n]
    if chi.degree != n or chi.lc != 1:
        raise InternalInvariantViolation("characteristic polynomial is not monic of degree D")
    return chi
