"""Reading parametrizations off bivariate lexicographic Groebner bases.

Given the reduced lex basis ``{f(T), g_k(T, X)}`` of an ideal ``J`` of
``K[T, X]`` with ``g_k = sum_i a_{k,i}(T) X^i``, the chain

    h_0 = squarefree(f),  h_k = gcd(h_{k-1}, a_{k,k}),  f_k = h_{k-1} / h_k

splits the roots of ``f`` by the X-multiplicity of the point above them.
When ``T`` separates ``V(J)``, the point above a root of ``f_k`` is the root
of ``k a_{k,k} X + a_{k,k-1}``, which glues into one parametrization
``h1(T) X + h0(T)`` modulo ``h_0``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalInvariantViolation, NonSeparatingEvidence, NotInvertibleModF
from .fglm import BivariateLexBasis
from .upoly import (
    UPoly,
    check_characteristic,
    exact_div,
    mod_inverse,
    poly_gcd_monic,
    squarefree_part,
)


@dataclass
class GcdChain:
    h: list     # h_0, ..., h_m
    fks: list   # f_1, ..., f_m  (fks[k-1] is f_k)

    def f(self, k: int) -> UPoly:
        return self.fks[k - 1]


@dataclass
class CoordinateParametrization:
    """``fbar(T) = 0, h1(T) X + h0(T) = 0``."""

    fbar: UPoly
    h1: UPoly
    h0: UPoly
    chain: GcdChain


def gcd_chain(basis: BivariateLexBasis) -> GcdChain:
    h0 = squarefree_part(basis.f)
    hs = [h0]
    fks = []
    for k in range(1, basis.m + 1):
        lead = basis.coeff(k, k)
        hk = poly_gcd_monic(hs[-1], lead) if lead else hs[-1]
        fks.append(exact_div(hs[-1], hk))
        hs.append(hk)
    return GcdChain(hs, fks)


def check_chain(chain: GcdChain):
    """The f_k are monic, squarefree, pairwise coprime and multiply to h_0."""
    h0 = chain.h[0]
    prod = UPoly.one(h0.field)
    for fk in chain.fks:
        if fk.lc != 1:
            raise InternalInvariantViolation("chain factor is not monic")
        prod = prod * fk
    if prod != h0:
        raise InternalInvariantViolation("product of the chain factors differs from h_0")
    if chain.h[-1] != UPoly.one(h0.field) and h0.degree > 0:
        raise InternalInvariantViolation("gcd chain does not end at 1")


def bivariate_parametrization(basis: BivariateLexBasis) -> CoordinateParametrization:
    """Parametrization candidate ``h1 X + h0`` modulo ``squarefree(f)``.

    The k-th contribution is weighted by ``f_1 ... f_{k-1}`` (the running
    product is updated after the contribution is added).
    """
    F = basis.field
    check_characteristic(F, basis.m, "largest X-degree")
    chain = gcd_chain(basis)
    check_chain(chain)
    h0bar = chain.h[0]
    rho = UPoly.one(F)
    h1 = UPoly.zero(F)
    h0 = UPoly.zero(F)
    for k in range(1, basis.m + 1):
        if k in basis.gks:
            h1 = (h1 + (basis.coeff(k, k) * rho).scale(k)) % h0bar
            h0 = (h0 + basis.coeff(k, k - 1) * rho) % h0bar
        rho = (rho * chain.f(k)) % h0bar
    return CoordinateParametrization(h0bar, h1, h0, chain)


def separation_test(basis: BivariateLexBasis) -> bool:
    """True iff ``T`` separates the zeros of the bivariate ideal.

    Checks ``(k-i)/(i+1) * k * a_{k,k} a_{k,i} == a_{k,i+1} a_{k,k-1}``
    modulo ``f_k`` for every present ``k`` and ``i < k``.
    """
    F = basis.field
    check_characteristic(F, max(basis.bigD, basis.m), "quotient dimension")
    chain = gcd_chain(basis)
    for k in sorted(basis.gks):
        fk = chain.f(k)
        if fk.degree < 1:
            continue
        akk = basis.coeff(k, k)
        akk1 = basis.coeff(k, k - 1)
        for i in range(k):
            scale = F.div(F.convert((k - i) * k), F.convert(i + 1))
            lhs = (akk * basis.coeff(k, i)).scale(scale) % fk
            rhs = (basis.coeff(k, i + 1) * akk1) % fk
            if lhs != rhs:
                return False
    return True


def param_to_rur_coordinate(fbar: UPoly, param: CoordinateParametrization) -> UPoly:
    """Numerator ``-1/deg(fbar) * h0 * h1^{-1} * fbar' mod fbar``.

    Together with ``f0 = fbar' / deg(fbar)`` it gives ``X = f_X / f0`` at the
    roots of ``fbar``.
    """
    F = fbar.field
    if fbar.degree < 1:
        return UPoly.zero(F)
    try:
        inv = mod_inverse(param.h1, fbar)
    except NotInvertibleModF as exc:
        raise NonSeparatingEvidence(str(exc)) from exc
    s = F.neg(F.inv(F.convert(fbar.degree)))
    return ((param.h0 * inv) % fbar * fbar.derivative()).scale(s) % fbar


def rur_denominator(fbar: UPoly) -> UPoly:
    """``f0 = fbar' / deg(fbar)``, monic when fbar is."""
    F = fbar.field
    if fbar.degree < 1:
        return UPoly.one(F)
    return fbar.derivative().scale(F.inv(F.convert(fbar.degree)))


def multiplicity_decomposition(chain: GcdChain) -> list:
    """Nontrivial ``(k, f_k)``: roots of ``f_k`` carry X-multiplicity ``k``."""
    return [(k, fk) for k, fk in enumerate(chain.fks, 1) if fk.degree > 0]
