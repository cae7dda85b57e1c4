import random
from fractions import Fraction

import pytest
import sympy

from rurlex.errors import NotZeroDimensional, ResourceExceeded
from rurlex.fields import QQ, PrimeField
from rurlex.groebner import (
    buchberger,
    is_groebner,
    is_reduced,
    matrices_commute,
    multiplication_matrices,
    normal_form,
    quotient_basis,
    quotient_structure,
)
from rurlex.mpoly import DEGREVLEX, LEX, MonomialOrder, PolyRing

from conftest import structure_from, system_from

R = PolyRing(["x", "y"], QQ)


def polys(*texts, ring=R):
    return [ring.parse(t) for t in texts]


def test_lex_example():
    G = buchberger(polys("x^2 - 1", "y - x"), MonomialOrder("lex", perm=[1, 0]))
    assert set(G.polys) == set(polys("y - x", "x^2 - 1"))
    assert is_reduced(G)


def test_unit_ideal():
    G = buchberger(polys("1"))
    assert G.is_unit()
    assert quotient_basis(G) == []
    G = buchberger(polys("x - 1", "x - 2"))
    assert G.is_unit()


def test_monomial_ideal_is_its_own_basis():
    F = polys("x^2", "x*y", "y^2")
    G = buchberger(F, DEGREVLEX)
    assert set(G.polys) == set(F)


def test_quotient_basis_examples():
    assert quotient_basis(buchberger(polys("x^2", "x*y", "y^2"))) == [(0, 0), (0, 1), (1, 0)]
    assert quotient_basis(buchberger(polys("x - 1", "y - 2"))) == [(0, 0)]
    with pytest.raises(NotZeroDimensional):
        quotient_basis(buchberger(polys("x^2 - 1")))


def test_multiplication_matrix_examples():
    R1 = PolyRing(["x"], QQ)
    q = multiplication_matrices(buchberger([R1.parse("x^2 - 1")]))
    assert q.basis == [(0,), (1,)]
    assert q.matrices[0] == [[0, 1], [1, 0]]
    q = multiplication_matrices(buchberger([R1.parse("x")]))
    assert q.matrices[0] == [[0]]
    q = structure_from(["x^2", "x*y", "y^2"])
    i1, ix, iy = (q.basis.index(m) for m in [(0, 0), (1, 0), (0, 1)])
    Mx = q.matrices[0]
    assert [Mx[r][i1] for r in range(3)] == [1 if r == ix else 0 for r in range(3)]
    assert all(Mx[r][ix] == 0 and Mx[r][iy] == 0 for r in range(3))


def test_pair_limit():
    F = polys("x^3 - y^2 + 1", "y^3 - x*y + 2", "x^2*y - 3")
    with pytest.raises(ResourceExceeded):
        buchberger(F, pair_limit=1)


def to_sympy(ps, gens):
    return [p.evaluate(gens) for p in ps]


SYSTEMS = [
    ["x^2 + y^2 - 5", "x*y - 2"],
    ["x^3 - 2*x*y", "x^2*y - 2*y^2 + x"],
    ["x^2 - 2*y^2 + 3", "x*y^2 - y - 1"],
    ["x^2*y - 1", "x*y^2 - x - 1"],
]


@pytest.mark.parametrize("lines", SYSTEMS)
@pytest.mark.parametrize("kind", ["lex", "degrevlex"])
def test_reduced_basis_matches_sympy(lines, kind):
    X, Y = sympy.symbols("x y")
    F = polys(*lines)
    G = buchberger(F, MonomialOrder(kind))
    sorder = "grevlex" if kind == "degrevlex" else "lex"
    ref = sympy.groebner([p.evaluate([X, Y]) for p in F], X, Y, order=sorder)
    mine = {sympy.expand(p.evaluate([X, Y])) for p in G.polys}
    assert mine == {sympy.expand(g / sympy.Poly(g, X, Y).LC(order=sorder)) for g in ref.exprs}
    assert is_groebner(G.polys, G.order)
    assert is_reduced(G)


def random_poly(ring, rng, deg=3, nterms=4):
    n = ring.nvars
    F = ring.field
    terms = {}
    for _ in range(nterms):
        m = [0] * n
        for _ in range(rng.randint(0, deg)):
            m[rng.randrange(n)] += 1
        terms[tuple(m)] = F.convert(rng.randint(-9, 9))
    return ring.from_terms(terms.items())


@pytest.mark.parametrize("seed", range(8))
def test_normal_form_of_ideal_members(seed):
    rng = random.Random(seed)
    F = PrimeField(32003)
    ring = PolyRing(["x", "y", "z"], F)
    gens = [random_poly(ring, rng) for _ in range(3)]
    G = buchberger(gens)
    assert is_groebner(G.polys, G.order)
    member = ring.zero()
    for g in gens:
        member = member + g * random_poly(ring, rng, 2, 3)
    assert not normal_form(member, G)
    p = random_poly(ring, rng)
    r = normal_form(p, G)
    # no term of the remainder is divisible by a leading monomial
    lms = G.leading_monomials()
    assert all(not all(a <= b for a, b in zip(l, m)) for m in r.terms for l in lms)
    assert not normal_form(p - r, G)


@pytest.mark.parametrize("seed", range(12))
def test_matrices_commute_random(seed):
    rng = random.Random(100 + seed)
    F = PrimeField(32003)
    ring = PolyRing(["x", "y", "z"], F)
    while True:
        gens = [random_poly(ring, rng, 2, 4) + ring.gen(i) ** rng.randint(1, 3) for i in range(3)]
        try:
            q = quotient_structure(gens)
        except NotZeroDimensional:
            continue
        if q.dimension:
            break
    for i in range(3):
        for j in range(i + 1, 3):
            assert matrices_commute(q.matrices[i], q.matrices[j], F)
    # column c of M_i is the normal form of X_i * basis[c]
    for i, M in enumerate(q.matrices):
        for c, m in enumerate(q.basis):
            prod = ring.from_terms([(tuple(e + (k == i) for k, e in enumerate(m)), 1)])
            assert q.coordinates(prod) == [M[r][c] for r in range(q.dimension)]


def test_fingerprint_and_dimension_over_qq():
    q = quotient_structure(system_from(["x^2 + y^2 - 5", "x*y - 2"]))
    assert q.dimension == 4
    assert q.gb.fingerprint() == tuple(sorted(q.gb.leading_monomials()))


@pytest.mark.parametrize("F", [QQ, PrimeField(7), PrimeField(2147483647)], ids=str)
def test_matrices_commute_detects_noncommuting(F):
    A = [[0, 1], [0, 0]]
    B = [[0, 0], [1, 0]]
    assert not matrices_commute(A, B, F)
    assert matrices_commute(A, A, F)
    big = F.p - 1 if F.p else 10 ** 20
    C = [[big, big], [big, big]]
    assert matrices_commute(C, [[1, 2], [2, 1]], F)
