import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rurlex.fields import QQ, PrimeField
from rurlex.fglm import (
    BivariateLexBasis,
    EchelonState,
    characteristic_polynomial,
    coordinate,
    matvec,
    minimal_polynomial,
)
from rurlex.groebner import quotient_structure
from rurlex.oracle import split_system
from rurlex.upoly import UPoly, exact_div


def U(*c, field=QQ):
    return UPoly(list(c), field)


def test_push_examples():
    s = EchelonState(2, QQ)
    assert s.push([1, 0], "e1") is None
    assert s.push([1, 0], "again") == [1]
    s = EchelonState(2, QQ)
    s.push([1, 0], "a")
    s.push([0, 1], "b")
    assert s.push([2, 3], "c") == [2, 3]
    assert s.labels == ["a", "b"]


def test_push_mod_p_reconstructs_vector():
    F = PrimeField(101)
    rng = random.Random(3)
    s = EchelonState(5, F)
    vecs = []
    for k in range(5):
        v = [rng.randrange(101) for _ in range(5)]
        if s.push(v, k) is None:
            vecs.append(v)
    w = [rng.randrange(101) for _ in range(5)]
    if len(vecs) == 5:
        dep = s.push(w, "w")
        comb = [sum(c * v[i] for c, v in zip(dep, vecs)) % 101 for i in range(5)]
        assert comb == w


def test_minimal_polynomial_examples():
    f, st_ = minimal_polynomial([[0, 1], [1, 0]], QQ)
    assert f == U(-1, 0, 1)
    assert st_.labels == [(0, 0), (0, 1)]
    f, _ = minimal_polynomial([[0] * 3 for _ in range(3)], QQ)
    assert f == U(0, 1)
    # companion matrix of T^2 - 3T + 2 (columns: T*1 = T, T*T = 3T - 2)
    f, _ = minimal_polynomial([[0, -2], [1, 3]], QQ)
    assert f == U(2, -3, 1)


def test_charpoly_examples():
    assert characteristic_polynomial([[0, 1], [1, 0]], QQ) == U(-1, 0, 1)
    I3 = [[int(r == c) for c in range(3)] for r in range(3)]
    assert characteristic_polynomial(I3, QQ) == U(-1, 1) ** 3
    assert characteristic_polynomial([[1, 0], [0, 2]], QQ) == U(2, -3, 1)


@given(st.integers(1, 7), st.data())
@settings(max_examples=60, deadline=None)
def test_charpoly_matches_sympy(n, data):
    M = [[data.draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(n)]
    T = sympy.Symbol("T")
    ref = sympy.Matrix(M).charpoly(T).all_coeffs()
    got = characteristic_polynomial(M, QQ)
    assert list(reversed(got.coeffs)) == [int(c) for c in ref]


def eval_matrix_poly(f, M, F):
    D = len(M)
    acc = [[0] * D for _ in range(D)]
    for c in reversed(f.coeffs):
        acc = [[F.normalize(sum(acc[r][k] * M[k][col] for k in range(D)) + (c if r == col else 0))
                for col in range(D)] for r in range(D)]
    return acc


def test_coordinate_shape_position():
    M = [[0, 1], [1, 0]]
    f, state = minimal_polynomial(M, QQ)
    basis = coordinate(M, state, f)
    assert basis.gks == {1: [U(0, -1), U(1)]}


def test_coordinate_fat_point():
    # basis {1, T, X}; T*1 = T, X*1 = X, all other products vanish
    MT = [[0, 0, 0], [1, 0, 0], [0, 0, 0]]
    MX = [[0, 0, 0], [0, 0, 0], [1, 0, 0]]
    f, state = minimal_polynomial(MT, QQ)
    assert f == U(0, 0, 1)
    basis = coordinate(MX, state, f)
    assert basis.gks == {1: [U(), U(0, 1)], 2: [U(), U(), U(1)]}
    assert basis.multidegrees() == [(1, 1), (0, 2)]
    assert state.labels == [(0, 0), (0, 1)]  # parent state untouched


def test_coordinate_missing_degree():
    MT = [[1, 0], [0, 1]]
    MX = [[0, 1], [1, 0]]
    f, state = minimal_polynomial(MT, QQ)
    assert f == U(-1, 1)
    basis = coordinate(MX, state, f)
    assert basis.gks == {2: [U(-1), U(), U(1)]}


def _structures(n_cases, seed):
    rng = random.Random(seed)
    for _ in range(n_cases):
        n = rng.choice([2, 3])
        ss = split_system(n, 10007, rng.randint(1, 6), rng, max_mult=4)
        yield quotient_structure(ss.system), rng


@pytest.mark.parametrize("seed", range(6))
def test_structural_invariants_on_split_systems(seed):
    for q, rng in _structures(5, seed):
        F = q.field
        t = [rng.randrange(-3, 4) or 1 for _ in range(q.nvars)]
        MT = q.form_matrix(t)
        f, state = minimal_polynomial(MT, F)
        chi = characteristic_polynomial(MT, F)
        assert chi.degree == q.dimension and f.degree <= q.dimension
        exact_div(chi, f)
        zero = [[0] * q.dimension for _ in range(q.dimension)]
        assert eval_matrix_poly(f, MT, F) == zero
        for M in q.matrices:
            basis = coordinate(M, state, f)
            assert len(basis.gks) <= 2 * (q.dimension - f.degree) + 1
            ks = sorted(basis.gks)
            tdeg = [basis.gks[k][k].degree for k in ks]
            assert ks == sorted(set(ks)) and tdeg == sorted(tdeg, reverse=True)
            assert len(set(tdeg)) == len(tdeg)
            for v in basis.evaluate(MT, M, F):
                assert not any(v)


def test_check_rejects_bad_structure():
    f = U(0, 0, 1)
    bad = BivariateLexBasis(f, {1: [U(), U(1)], 2: [U(), U(), U(1)]}, delta=2, bigD=3)
    with pytest.raises(AssertionError):
        bad.check()


def test_matvec_mod_p():
    F = PrimeField(7)
    assert matvec([[3, 4], [5, 6]], [1, 1], F) == [0, 4]


def _pure(monkeypatch):
    import rurlex.fglm as fglm
    monkeypatch.setattr(fglm, "use_numpy", lambda F: False)


@pytest.mark.parametrize("p", [101, 2147483647])
@pytest.mark.parametrize("seed", range(6))
def test_numpy_kernels_match_list_kernels(p, seed, monkeypatch):
    rng = random.Random(seed)
    F = PrimeField(p)
    D = rng.randint(1, 14)
    M = [[rng.randrange(p) if rng.random() < 0.3 else 0 for _ in range(D)] for _ in range(D)]
    X = [[rng.randrange(p) if rng.random() < 0.3 else 0 for _ in range(D)] for _ in range(D)]
    f, state = minimal_polynomial(M, F)
    assert type(state).__name__ == "ModularEchelonState"
    basis = coordinate(X, state, f)
    chi = characteristic_polynomial(M, F)
    _pure(monkeypatch)
    f2, state2 = minimal_polynomial(M, F)
    assert type(state2) is EchelonState
    assert f2 == f
    assert state2.labels == state.labels
    basis2 = coordinate(X, state2, f2)
    assert basis2.gks == basis.gks
    assert characteristic_polynomial(M, F) == chi


@pytest.mark.parametrize("seed", range(4))
def test_numpy_kernels_on_quotient_structures(seed, monkeypatch):
    rng = random.Random(seed)
    ss = split_system(rng.choice([2, 3]), 32749, rng.randint(3, 12), rng, max_mult=3)
    q = quotient_structure(ss.system)
    t = [rng.randrange(-3, 4) for _ in range(q.nvars)]
    t[0] = t[0] or 1
    MT = q.form_matrix(t)
    f, state = minimal_polynomial(MT, q.field)
    bases = [coordinate(M, state, f).gks for M in q.matrices]
    chi = characteristic_polynomial(MT, q.field)
    _pure(monkeypatch)
    f2, state2 = minimal_polynomial(MT, q.field)
    assert f2 == f
    assert [coordinate(M, state2, f2).gks for M in q.matrices] == bases
    assert characteristic_polynomial(MT, q.field) == chi


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_modular_push_dependency_reconstructs_vector(data):
    p = data.draw(st.sampled_from([7, 65537, 2147483647]))
    F = PrimeField(p)
    D = data.draw(st.integers(1, 6))
    vecs = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=D, max_size=D),
                              min_size=1, max_size=D + 2))
    s = EchelonState(D, F)
    stored = []
    for k, v in enumerate(vecs):
        dep = s.push(v, k)
        if dep is None:
            stored.append(v)
            continue
        combo = [sum(c * w[i] for c, w in zip(dep, stored)) % p for i in range(D)]
        assert combo == [x % p for x in v]
    assert len(s.labels) == len(stored) <= D
