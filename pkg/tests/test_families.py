from __future__ import annotations

import numpy as np
import pytest

from d4sylow.families import (
    FAMILIES,
    applicable_families,
    build_all,
    build_family,
    classify,
    descriptor,
    first_outside_quadric,
    k_orbit_analysis,
    table4_expected,
    verify_conjugation_formula,
)
from d4sylow.gf import field_make


def test_descriptors():
    assert len(FAMILIES) == 18
    assert len(applicable_families(2)) == len(applicable_families(3)) == 17
    assert descriptor("F_{8,9,10}^odd") is descriptor("F8,9,10-odd")
    assert descriptor("89").name == "F8,9"
    with pytest.raises(KeyError):
        descriptor("F13")


def test_signatures_are_disjoint():
    # every subset of Phi+ whose kernel pattern arises matches at most one family
    import itertools

    upper = (5, 6, 7, 8, 9, 10, 11, 12)
    for q in (2, 3):
        for r in range(len(upper) + 1):
            for K in itertools.combinations(upper, r):
                assert len(classify(frozenset(K), q)) <= 1


def test_table4_values():
    assert table4_expected(2) == {1: 16, 2: 28, 4: 28, 8: 23, 16: 8}
    assert table4_expected(3) == {1: 81, 3: 234, 9: 162, 27: 222, 81: 54}
    for q in (2, 3, 4, 5, 7, 8):
        t = table4_expected(q)
        assert sum(t.values()) == {2: 103, 3: 753, 4: 3259}.get(q, sum(t.values()))
        assert sum(d * d * m for d, m in t.items()) == q**12


@pytest.mark.parametrize("q", [2, 4, 8])
def test_t_cdef_outside_quadric(q):
    F = field_make(2, {2: 1, 4: 2, 8: 3}[q])
    for c, d, e, f in [(1, 1, 1, 1), (1, q - 1, 2 % q or 1, 1)]:
        t = first_outside_quadric(F, c, d, e, f)
        image = {F.vadd(F.vmul(F.vmul(d, e), F.vmul(f, F.vmul(z, z))), F.vmul(F.vmul(c, d), z)) for z in range(q)}
        assert t not in image and all(u in image for u in range(t))


def test_family_examples(F2, F3):
    assert build_family("F12", F3).counts_by_degree == {81: 54}
    assert build_family("Flin", F2).counts_by_degree == {1: 16}
    rep = build_family("F8,9", F2)
    assert rep.counts_by_degree == {4: 4, 8: 1} and rep.ok
    with pytest.raises(ValueError):
        build_family("F8,9,10-odd", F2)


def test_f8910_even_q2(F2):
    rep = build_family("F8,9,10-even", F2)
    assert rep.counts_by_degree == {4: 4, 8: 1}
    assert rep.ok


@pytest.mark.parametrize("q", [2, 3])
def test_build_all(q):
    F = field_make(q)
    rep = build_all(F)
    assert rep.ok
    assert rep.details["count"] == {2: 103, 3: 753}[q]
    assert rep.degree_multiplicities() == table4_expected(q)


def test_build_all_guard():
    with pytest.raises(ValueError):
        build_all(field_make(2, 2))


@pytest.mark.parametrize("q", [2, 3])
def test_k_orbits(q):
    rep = k_orbit_analysis(field_make(q))
    assert rep.ok
    if q == 3:
        assert rep.stabilizer_histogram == {1: 8 * 81}
        assert rep.n_orbits == 24
    else:
        assert rep.stabilizer_histogram == {1: 8, 2: 8}


@pytest.mark.slow
def test_k_orbits_q4(F4):
    rep = k_orbit_analysis(F4)
    assert rep.ok and rep.stabilizer_histogram == {1: 27 * 64, 2: 81 * 64}


@pytest.mark.parametrize("q", [2, 3])
def test_conjugation_formula(q):
    assert verify_conjugation_formula(field_make(q))


def test_k_orbit_guard():
    with pytest.raises(ValueError):
        k_orbit_analysis(field_make(5))


@pytest.mark.slow
def test_f8910_even_half_q4(F4):
    from d4sylow.classes import cached_classes
    from d4sylow.families import CTX8910, build_f8910_even_half

    chars = build_f8910_even_half(F4, cached_classes(F4, CTX8910))
    assert len(chars) == 2 * 2 * 3**4
    assert {c.degree for c in chars} == {32}
    assert len({c.key() for c in chars}) == 4 * 3**4


@pytest.mark.slow
def test_build_all_q4(F4):
    rep = build_all(F4, allow_large=True)
    assert rep.ok and rep.details["count"] == 3259
    assert rep.degree_multiplicities() == table4_expected(4) == {1: 256, 4: 1008, 16: 576, 32: 324, 64: 903, 256: 192}
