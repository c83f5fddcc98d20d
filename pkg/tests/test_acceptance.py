"""Acceptance criteria 1-7, one test per criterion.

Each test records a one-line verdict; conftest prints them in the terminal
summary.  Run directly (`python tests/test_acceptance.py`) to get the same
lines without pytest.
"""

from __future__ import annotations

import time

import numpy as np
import pytest

from d4sylow.chars import (
    induce,
    inflate,
    is_irreducible,
    kernel_roots,
    linear_character,
    midafi,
)
from d4sylow.checks import (
    check_class_count,
    check_closedness,
    check_commutators,
    check_k_orbits,
    check_lemma_c,
    check_midafis,
    check_special_hooks,
)
from d4sylow.classes import cached_classes
from d4sylow.families import build_all
from d4sylow.gf import CycNumber, additive_character, field_make
from d4sylow.rootsys import ALL_ROOTS, hook, v_alpha
from d4sylow.ugroup import element, identity, inv, mul, normalize, subgroup_make

FIELDS = {2: (2, 1), 3: (3, 1), 4: (2, 2)}
VERDICTS: dict[int, str] = {}


def F(q):
    return field_make(*FIELDS[q])


def record(n: int, title: str, ok: bool, detail: str, seconds: float) -> bool:
    VERDICTS[n] = f"criterion {n} [{'PASS' if ok else 'FAIL'}] {title}: {detail} ({seconds:.1f}s)"
    return ok


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# -- criteria ---------------------------------------------------------------------


def criterion_1() -> bool:
    def run():
        return [check_commutators(F(q)) for q in (2, 3, 4)]

    res, secs = _timed(run)
    ok = all(r.passed for r in res) and secs < 3
    detail = "; ".join(f"q={q}: {r.computed['nontrivial']} nontrivial, {r.computed['trivial']} trivial, "
                       f"{r.computed['mismatched pairs']} mismatches" for q, r in zip((2, 3, 4), res))
    return record(1, "commutator fidelity", ok, detail, secs)


def criterion_2() -> bool:
    targets = {2: 1.0, 3: 30.0, 4: 600.0}
    parts, ok = [], True
    total = 0.0
    for q in (2, 3, 4):
        r, secs = _timed(lambda: check_class_count(F(q), allow_large=True))
        total += secs
        ok &= r.passed and secs < targets[q]
        parts.append(f"q={q}: {r.computed} (expected {r.expected}, {secs:.1f}s of {targets[q]:.0f}s)")
    return record(2, "class counts", ok, "; ".join(parts), total)


def criterion_3() -> bool:
    res, secs = _timed(lambda: [check_midafis(F(q)) for q in (2, 3)])
    ok = all(r.passed for r in res) and secs < 60
    detail = "; ".join(f"q={r.name[-2]}: {r.computed}" for r in res)
    return record(3, "midafi suite", ok, detail, secs)


def criterion_4() -> bool:
    def run():
        out = [check_closedness()]
        for q in (2, 3):
            out += [check_lemma_c(F(q)), check_special_hooks(F(q))]
        return out

    res, secs = _timed(run)
    ok = all(r.passed for r in res) and secs < 60
    detail = "; ".join(f"{r.name}: {r.computed}" for r in res)
    return record(4, "structural lemmas", ok, detail, secs)


def criterion_5() -> bool:
    res, secs = _timed(lambda: [check_k_orbits(F(q)) for q in (2, 3, 4)])
    ok = all(r.passed for r in res) and secs < 120
    detail = "; ".join(f"q={q}: {r.computed['orbits']} orbits, stabilizer histogram {r.computed['stabilizers']}"
                       for q, r in zip((2, 3, 4), res))
    return record(5, "K-bar representative sets", ok, detail, secs)


def criterion_6() -> bool:
    expected = {2: {1: 16, 2: 28, 4: 28, 8: 23, 16: 8}, 3: {1: 81, 3: 234, 9: 162, 27: 222, 81: 54}}
    parts, ok, total = [], True, 0.0
    for q in (2, 3):
        rep, secs = _timed(lambda: build_all(F(q), strict=False))
        total += secs
        degs = rep.degree_multiplicities()
        sq = sum(c.degree**2 for c in rep.characters)
        good = (rep.ok and rep.details["count"] == cached_classes(F(q)).count
                and sq == q**12 and degs == expected[q])
        ok &= good and secs < (300 if q == 2 else 3600)
        bad = [k for k, v in rep.checks.items() if not v]
        parts.append(f"q={q}: {rep.details['count']} characters, sum deg^2 = {sq}, degrees {degs}"
                     + (f", failed {bad}" if bad else ""))
    return record(6, "full-table completeness", ok, "; ".join(parts), total)


def _associativity(F2, rng, n=300) -> bool:
    for _ in range(n):
        a, b, c = (element(F2, rng.integers(0, 2, 12).tolist()) for _ in range(3))
        if mul(mul(a, b), c) != mul(a, mul(b, c)):
            return False
    return True


def _idempotence(F2, rng, n=300) -> bool:
    for _ in range(n):
        word = [(int(i), int(t)) for i, t in zip(rng.integers(1, 13, 8), rng.integers(0, 2, 8))]
        g = normalize(word, F2)
        if normalize(g.letters(), F2) != g or mul(g, inv(g)) != identity(F2):
            return False
    return True


def _orthogonality() -> bool:
    for q in (2, 3, 4, 8, 9):
        Fq = field_make(*{2: (2, 1), 3: (3, 1), 4: (2, 2), 8: (2, 3), 9: (3, 2)}[q])
        for s in Fq.elements():
            tot = CycNumber.rational(Fq.p, 0)
            for t in Fq.elements():
                tot = tot + additive_character(s, t)
            if tot != (q if s.code == 0 else 0):
                return False
    return True


def _induction_degree(F2, cd2) -> bool:
    sets = [v_alpha(a) for a in ALL_ROOTS] + [hook(a) for a in ALL_ROOTS] + [frozenset({1, 3, 5}), frozenset()]
    for S in sets:
        P = subgroup_make(F2, S)
        free = sorted(S - P.derived_roots())
        lam = linear_character(P, {g: 1 for g in free[:2]})
        if induce(lam, cd2).degree != cd2.order // P.order:
            return False
    return True


def _inflation_kernel(F2, cd2) -> bool:
    for N in (frozenset({12}), frozenset({11, 12}), frozenset(range(8, 13)), frozenset(range(5, 13))):
        cdq = cached_classes(F2, N)
        for a in sorted(ALL_ROOTS - N):
            up = inflate(midafi(a, 1, cdq), cd2)
            if not (N <= kernel_roots(up) and is_irreducible(up)):
                return False
    return True


def criterion_7() -> bool:
    def run():
        F2 = F(2)
        cd2 = cached_classes(F2)
        rng = np.random.default_rng(2024)
        return {
            "associativity": _associativity(F2, rng),
            "normal-form idempotence": _idempotence(F2, rng),
            "additive-character orthogonality": _orthogonality(),
            "induction-degree law": _induction_degree(F2, cd2),
            "inflation-kernel law": _inflation_kernel(F2, cd2),
        }

    res, secs = _timed(run)
    ok = all(res.values()) and secs < 60
    return record(7, "property suites", ok, ", ".join(f"{k} {'ok' if v else 'FAILED'}" for k, v in res.items()), secs)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7]


@pytest.mark.parametrize("n", range(1, 8))
def test_criterion(n):
    ok = CRITERIA[n - 1]()
    print(VERDICTS[n])
    assert ok, VERDICTS[n]


if __name__ == "__main__":
    import sys

    results = [c() for c in CRITERIA]
    for n in sorted(VERDICTS):
        print(VERDICTS[n])
    sys.exit(0 if all(results) else 1)
