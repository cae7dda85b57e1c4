import random
from fractions import Fraction
from functools import reduce

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from rurlex.errors import ModulusMismatch, NotCoprime, NotInvertible
from rurlex.fields import (
    QQ,
    CrtAccumulator,
    FieldElement,
    PrimeField,
    crt_combine,
    ff_add,
    ff_inv,
    ff_mul,
    ff_neg,
    prime_sequence,
    primes_below,
    rational_reconstruct,
    symmetric_residue,
)

F7 = PrimeField(7)


def test_small_arithmetic():
    assert ff_add(F7(3), F7(5)) == F7(1)
    assert ff_mul(F7(3), F7(5)) == F7(1)
    assert ff_mul(F7(0), F7(4)) == F7(0)
    assert ff_neg(F7(2)) == F7(5)


def test_inverse_examples():
    assert ff_inv(F7(3)) == F7(5)
    assert ff_inv(F7(1)) == F7(1)
    with pytest.raises(NotInvertible):
        ff_inv(F7(0))


def test_modulus_mismatch():
    with pytest.raises(ModulusMismatch):
        ff_add(F7(1), PrimeField(11)(1))


def test_element_range():
    assert F7(-1).value == 6
    assert F7(Fraction(1, 3)).value == 5
    assert FieldElement(9, 7).value == 2


def test_prime_field_rejects_composites():
    with pytest.raises(ValueError):
        PrimeField(15)
    with pytest.raises(ValueError):
        PrimeField(2)


@pytest.mark.parametrize("p", [7, 65537, 2147483647])
def test_inverse_random_trials(p):
    F = PrimeField(p)
    rng = random.Random(p)
    for _ in range(10_000):
        a = F(rng.randrange(1, p))
        assert ff_mul(a, ff_inv(a)) == F(1)


def test_rational_field_ops():
    assert QQ.div(1, 3) == Fraction(1, 3)
    assert QQ.inv(Fraction(-2, 5)) == Fraction(-5, 2)
    with pytest.raises(NotInvertible):
        QQ.inv(0)
    assert QQ.p is None and QQ.characteristic == 0


def test_crt_examples():
    acc = crt_combine(crt_combine(CrtAccumulator(), 2, 3), 3, 5)
    assert (acc.residue, acc.modulus) == (8, 15)
    # exhaustive check of the defining congruences
    assert [x for x in range(15) if x % 3 == 2 and x % 5 == 3] == [8]
    zero = crt_combine(CrtAccumulator(0, 11), 0, 13)
    assert (zero.residue, zero.modulus) == (0, 143)
    with pytest.raises(NotCoprime):
        crt_combine(CrtAccumulator(1, 2), 1, 2)


def test_crt_with_field_element():
    acc = crt_combine(CrtAccumulator(2, 3), PrimeField(5)(3))
    assert acc == CrtAccumulator(8, 15)


@given(st.integers(0, 10 ** 12), st.permutations([101, 103, 107, 109]))
def test_crt_order_independent(x, order):
    def fold(ps):
        return reduce(lambda a, p: crt_combine(a, x % p, p), ps, CrtAccumulator())
    base = fold([101, 103, 107, 109])
    assert fold(order) == base
    assert base.residue == x % base.modulus


def test_rational_reconstruct_examples():
    assert rational_reconstruct(34, 101) == Fraction(1, 3)
    assert 3 * 34 % 101 == 1
    assert rational_reconstruct(2, 1009) == 2
    assert rational_reconstruct(5, 7) is None


def _brute_reconstruct(r, m):
    n = int(gmpy2.isqrt((m - 1) // 2))
    sols = {Fraction(a, b) for b in range(1, n + 1) for a in range(-n, n + 1)
            if (a - r * b) % m == 0 and gmpy2.gcd(a, b) == 1}
    return sols


@given(st.integers(3, 400).map(lambda k: int(gmpy2.next_prime(k))), st.data())
@settings(max_examples=60)
def test_rational_reconstruct_matches_brute_force(m, data):
    r = data.draw(st.integers(0, m - 1))
    sols = _brute_reconstruct(r, m)
    got = rational_reconstruct(r, m)
    if got is None:
        assert not sols
    else:
        assert sols == {got}


@given(st.integers(-(2 ** 30) + 1, 2 ** 30 - 1), st.integers(1, 2 ** 30 - 1))
@settings(max_examples=300)
def test_rational_round_trip(a, b):
    ps = [p for p, _ in zip(prime_sequence(31), range(3))]
    m = ps[0] * ps[1] * ps[2]
    assert m > 2 * 2 ** 60
    r = a * pow(b, -1, m) % m
    assert rational_reconstruct(r, m) == Fraction(a, b)


def test_prime_sequence():
    ps = [p for p, _ in zip(prime_sequence(31), range(5))]
    assert ps[0] == 2147483647
    assert ps == sorted(ps, reverse=True)
    assert all(gmpy2.is_prime(p) for p in ps)
    assert list(primes_below(12)) == [11, 7, 5, 3]


def test_symmetric_residue():
    assert symmetric_residue(6, 7) == -1
    assert symmetric_residue(3, 7) == 3
