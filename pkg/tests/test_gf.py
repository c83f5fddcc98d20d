from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from d4sylow.gf import (
    CycNumber,
    FieldSpec,
    additive_character,
    counts_to_coeffs,
    cyc_arith,
    factor_prime_power,
    field_arith,
    field_from_q,
    field_make,
    is_irreducible,
    trace,
)

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 16, 25, 27]


def test_field_make_defaults():
    assert field_make(2, 1).modulus == (0, 1)
    assert field_make(2, 2).modulus == (1, 1, 1)
    assert field_make(3).q == 3


@pytest.mark.parametrize("q", SMALL_Q)
def test_default_moduli_irreducible(q):
    F = field_from_q(q)
    assert F.q == q
    assert is_irreducible(F.modulus, F.p)


@pytest.mark.parametrize("args", [(4, 1, None), (2, 2, (1, 0, 1)), (2, 2, (1, 1)), (3, 0, None)])
def test_field_make_rejects(args):
    with pytest.raises(ValueError):
        field_make(*args)


def test_factor_prime_power():
    assert factor_prime_power(9) == (3, 2)
    assert factor_prime_power(4) == (2, 2)
    with pytest.raises(ValueError):
        factor_prime_power(6)


def test_spec_examples():
    F3, F4, F5 = field_make(3), field_make(2, 2), field_make(5)
    assert F3(2) + F3(2) == F3(1)
    x = F4((0, 1))
    assert x * x == F4((1, 1))
    assert F5(2).inverse() == F5(3)
    assert field_arith(F5(2), None, "inv") == F5(3)
    assert trace(field_make(2)(1)) == 1
    assert trace(x) == 1
    assert trace(field_make(3, 2).zero) == 0


def test_field_errors():
    F3, F5 = field_make(3), field_make(5)
    with pytest.raises(ZeroDivisionError):
        F3.zero.inverse()
    with pytest.raises(ValueError):
        F3(1) + F5(1)


def test_additive_character_examples():
    F2, F3, F4 = field_make(2), field_make(2 + 1), field_make(2, 2)
    assert additive_character(F2.one, F2.zero) == 1
    assert additive_character(F2.one, F2.one) == -1
    assert additive_character(F3.one, F3.one) == CycNumber(3, [0, 1])
    x = F4((0, 1))
    assert additive_character(x, x) == -1  # x^2 = x+1, Tr(x+1) = 1
    assert additive_character(x, F4.one) == -1


def test_cyclotomic_examples():
    z = CycNumber.root_of_unity(3, 1)
    assert z + z * z == -1
    assert z * (z * z) == 1
    assert CycNumber.rational(2, -1).conj() == -1
    assert cyc_arith(z, None, "conj") == z * z
    assert cyc_arith(z, Fraction(1, 2), "scale_by_rational") == CycNumber(3, [0, Fraction(1, 2)])


@pytest.mark.parametrize("q", SMALL_Q)
def test_trace_additive_and_surjective(q):
    F = field_from_q(q)
    T = F.trace_table
    for a in range(q):
        for b in range(q):
            assert T[F.add_table[a, b]] == (T[a] + T[b]) % F.p
    assert set(T.tolist()) == set(range(F.p))
    for k in range(F.p):
        assert T[F.embed_int(k)] == (F.n * k) % F.p


@pytest.mark.parametrize("q", SMALL_Q)
def test_additive_character_orthogonality(q):
    F = field_from_q(q)
    for s in F.elements():
        total = CycNumber.rational(F.p, 0)
        for t in F.elements():
            total = total + additive_character(s, t)
        assert total == (q if s.code == 0 else 0)


@pytest.mark.parametrize("q", [3, 4, 9])
def test_phi_is_homomorphism(q):
    F = field_from_q(q)
    one = F.one
    for a in F.elements():
        for b in F.elements():
            assert additive_character(one, a) * additive_character(one, b) == additive_character(one, a + b)


@given(st.sampled_from(SMALL_Q), st.data())
def test_field_axioms(q, data):
    F = field_from_q(q)
    el = st.integers(0, q - 1).map(F.element)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F.zero
    if a:
        assert a * a.inverse() == F.one
    assert a**q == a


def _cyc(p, data):
    return CycNumber(p, [Fraction(data.draw(st.integers(-5, 5)), data.draw(st.integers(1, 4)))
                         for _ in range(max(p - 1, 1))])


@given(st.sampled_from([2, 3, 5, 7]), st.data())
def test_cyclotomic_ring(p, data):
    a, b, c = _cyc(p, data), _cyc(p, data), _cyc(p, data)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a * b).conj() == a.conj() * b.conj()
    assert a.conj().conj() == a


def test_counts_to_coeffs():
    counts = np.array([[2, 1, 1], [1, 1, 1]])
    assert counts_to_coeffs(counts, 3).tolist() == [[1, 0], [0, 0]]
    assert CycNumber.from_counts(3, [1, 1, 1]) == 0


def test_fieldspec_json_roundtrip():
    F = field_make(3, 2)
    assert FieldSpec.from_json(F.to_json()) == F
    assert F.to_json() == {"p": 3, "n": 2, "modulus": [2, 2, 1]}
