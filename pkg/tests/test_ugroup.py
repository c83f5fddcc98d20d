from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from d4sylow.gf import field_from_q, field_make
from d4sylow.rootsys import ALL_ROOTS, comm, hook, v_alpha
from d4sylow.ugroup import (
    GroupElement,
    as_ctx,
    commutator,
    conj,
    derived_and_center,
    element,
    enumerate_subgroup,
    group_arith,
    identity,
    inv,
    mul,
    normalize,
    pack,
    root_element,
    subgroup_make,
    unpack,
)


def codes(F, c):
    """Element from field codes (plain ints given to element() embed Z/p instead)."""
    return element(F, [F.element(v) for v in c])


def x(F, i, t):
    return root_element(F, i, t)


def elements(q):
    F = field_from_q(q)
    return st.lists(st.integers(0, q - 1), min_size=12, max_size=12).map(lambda c: codes(F, c))


def words(q):
    F = field_from_q(q)
    return st.lists(st.tuples(st.integers(1, 12), st.integers(0, q - 1).map(F.element)), max_size=10)


# -- documented examples --------------------------------------------------------


def test_normalize_examples(F3):
    g = normalize([(3, 1), (1, 1)], F3)
    assert g.coords == (1, 0, 1, 0, 2, 0, 0, 0, 0, 0, 0, 0)
    assert normalize([(1, 2)], F3) == x(F3, 1, 2)
    g = normalize([(7, 1), (8, 1), (7, -1), (8, -1)], F3)
    assert g == x(F3, 12, 1)


def test_mul_examples(F2, F3):
    a = element(F3, [1, 2, 0, 1, 0, 0, 2, 1, 0, 0, 1, 2])
    assert mul(a, identity(F3)) == a
    assert mul(x(F2, 1, 1), x(F2, 1, 1)) == identity(F2)
    ab = mul(x(F3, 4, 1), x(F3, 5, 1))
    ba = mul(x(F3, 5, 1), x(F3, 4, 1))
    assert ab.coords[8] == 0 and ba.coords[8] == 1
    assert mul(ba, x(F3, 9, -1)) == ab


def test_inv_examples(F3):
    assert inv(identity(F3)) == identity(F3)
    assert inv(x(F3, 1, 1)) == x(F3, 1, 2)
    g = mul(x(F3, 1, 1), x(F3, 3, 1))
    h = inv(g)
    # collecting x3(-1) x1(-1) gives x1(-1) x3(-1) x5(-(-1)(-1)) = x5(-1)
    assert h == normalize([(3, -1), (1, -1)], F3)
    assert h.coords[:5] == (2, 0, 2, 0, 2)
    assert mul(g, h) == identity(F3)


def test_conj_examples(F3):
    g = element(F3, [0, 1, 2, 1, 0, 0, 1, 0, 2, 0, 0, 1])
    assert conj(g, identity(F3)) == g
    for r in range(3):
        for d in range(3):
            right = conj(x(F3, 3, d), x(F3, 1, r))
            left = conj(x(F3, 3, d), inv(x(F3, 1, r)))
            assert right.coords[4] == (-r * d) % 3
            assert left.coords[4] == (r * d) % 3
    for t in (1, 2):
        assert conj(x(F3, 12, t), g) == x(F3, 12, t)


def test_commutator_examples(F3):
    for t in range(3):
        for u in range(3):
            assert commutator(x(F3, 2, t), x(F3, 3, u)) == x(F3, 6, t * u % 3)
            assert commutator(x(F3, 1, t), x(F3, 2, u)) == identity(F3)
    g = element(F3, [1] * 12)
    assert commutator(g, g) == identity(F3)


def test_pack_examples(F2):
    assert pack(identity(F2)) == 0
    assert pack(x(F2, 1, 1)) == 1
    assert pack(x(F2, 12, 1)) == 2048
    assert unpack(F2, 2048) == x(F2, 12, 1)
    with pytest.raises(ValueError):
        unpack(F2, 4096)


def test_subgroup_make_examples(F2, F3):
    assert subgroup_make(F3, hook(12)).order == 3**9
    assert subgroup_make(F2, {12}).order == 2
    with pytest.raises(ValueError):
        subgroup_make(F2, {1, 3})


def test_derived_and_center_examples(F2, F3):
    rep = derived_and_center(subgroup_make(F2, hook(12)))
    assert rep.order == 2**9
    assert rep.derived_order == rep.center_order == 2
    assert rep.support("derived") == rep.support("center") == {12}
    rep = derived_and_center(subgroup_make(F3, {12}))
    assert rep.derived_order == 1 and rep.center_order == 3
    rep = derived_and_center(subgroup_make(F3, hook(5)))
    assert rep.order == 27 and rep.center_order == 3 and rep.exponent == 3


def test_center_of_u(F2):
    rep = derived_and_center(subgroup_make(F2, ALL_ROOTS))
    assert rep.center_order == 2 and rep.support("center") == {12}
    assert rep.derived_order == 2**8


def test_enumerate_examples(F2, F3):
    assert len(list(enumerate_subgroup(subgroup_make(F3, {12})))) == 3
    codes = [pack(g) for g in enumerate_subgroup(subgroup_make(F2, ALL_ROOTS))]
    assert codes == list(range(4096))
    assert len(list(enumerate_subgroup(subgroup_make(F2, v_alpha(12))))) == 256


def test_quotient_context():
    with pytest.raises(ValueError):
        as_ctx({11})  # not upper closed: 11 + ... is fine but 12 is missing
    ctx = as_ctx({11, 12})
    assert 11 not in ctx.free and len(ctx.free) == 10


def test_json_roundtrip(F4):
    g = codes(F4, [3, 2, 1, 0, 1, 2, 3, 0, 0, 1, 2, 3])
    assert g.coords[0] == 3
    assert GroupElement.from_json(F4, g.to_json()) == g


# -- properties --------------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@given(data=st.data())
def test_associativity(q, data):
    a, b, c = (data.draw(elements(q)) for _ in range(3))
    assert mul(mul(a, b), c) == mul(a, mul(b, c))


@pytest.mark.parametrize("q", [2, 3, 4])
@given(data=st.data())
def test_inverse_and_normal_form_idempotence(q, data):
    F = field_from_q(q)
    a = data.draw(elements(q))
    assert mul(a, inv(a)) == identity(F)
    assert normalize(a.letters(), F) == a
    w = data.draw(words(q))
    g = normalize(w, F)
    assert normalize(g.letters(), F) == g


@pytest.mark.parametrize("q", [2, 3, 4])
@given(data=st.data())
def test_word_normalization_is_a_homomorphism(q, data):
    F = field_from_q(q)
    w1, w2 = data.draw(words(q)), data.draw(words(q))
    assert normalize(w1 + w2, F) == mul(normalize(w1, F), normalize(w2, F))


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_quotient_is_homomorphic_image(q, data):
    F = field_from_q(q)
    ctx = as_ctx({10, 11, 12})
    a, b = data.draw(elements(q)), data.draw(elements(q))
    assert mul(a, b, ctx) == normalize(mul(a, b).letters(), F, ctx)
    assert mul(normalize(a.letters(), F, ctx), b, ctx) == mul(a, b, ctx)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_vectorized_matches_scalar(q):
    F = field_from_q(q)
    GA = group_arith(F)
    rng = np.random.default_rng(q)
    A = rng.integers(0, q, size=(50, 12))
    B = rng.integers(0, q, size=(50, 12))
    P, I, C = GA.mul(A, B), GA.inv(A), GA.conj(A, B)
    for k in range(50):
        a, b = codes(F, A[k].tolist()), codes(F, B[k].tolist())
        assert P[k].tolist() == list(mul(a, b).coords)
        assert I[k].tolist() == list(inv(a).coords)
        assert C[k].tolist() == list(conj(a, b).coords)


@pytest.mark.parametrize("q", [2, 3])
def test_table2_by_group_arithmetic(q):
    F = field_make(q)
    for i in range(1, 13):
        for j in range(1, 13):
            if i == j:
                continue
            c = commutator(x(F, i, 1), x(F, j, 1))
            rel = comm(i, j)
            if rel is None:
                assert c == identity(F)
            else:
                assert c == x(F, rel.k, rel.sign)
