"""The positive roots of D4, their commutator table, and hook combinatorics.

Roots are numbered 1..12 in the CHEVIE order; coordinates are on the
simple roots a1, a2, a3, a4 with a3 the central node of the Dynkin diagram.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache
from typing import Iterable

N_ROOTS = 12
ALL_ROOTS = frozenset(range(1, N_ROOTS + 1))

_COEFFS = {
    1: (1, 0, 0, 0),
    2: (0, 1, 0, 0),
    3: (0, 0, 1, 0),
    4: (0, 0, 0, 1),
    5: (1, 0, 1, 0),
    6: (0, 1, 1, 0),
    7: (0, 0, 1, 1),
    8: (1, 1, 1, 0),
    9: (1, 0, 1, 1),
    10: (0, 1, 1, 1),
    11: (1, 1, 1, 1),
    12: (1, 1, 2, 1),
}

# (i, j, k, c):  [x_i(t), x_j(u)] = x_k(c t u),  i < j
_TABLE2 = (
    (1, 3, 5, +1),
    (1, 6, 8, -1),
    (1, 7, 9, +1),
    (1, 10, 11, -1),
    (2, 3, 6, +1),
    (2, 5, 8, -1),
    (2, 7, 10, +1),
    (2, 9, 11, -1),
    (3, 4, 7, +1),
    (3, 11, 12, -1),
    (4, 5, 9, -1),
    (4, 6, 10, -1),
    (4, 8, 11, -1),
    (5, 10, 12, -1),
    (6, 9, 12, -1),
    (7, 8, 12, +1),
)


@dataclass(frozen=True)
class Root:
    index: int
    coeffs: tuple[int, int, int, int]

    @property
    def height(self) -> int:
        return sum(self.coeffs)


@dataclass(frozen=True)
class CommRel:
    i: int
    j: int
    k: int
    sign: int


RootSet = frozenset


@cache
def roots() -> tuple[Root, ...]:
    return tuple(Root(i, _COEFFS[i]) for i in range(1, N_ROOTS + 1))


def root(i: int) -> Root:
    _check_index(i)
    return roots()[i - 1]


def height(i: int) -> int:
    return root(i).height


def _check_index(i: int):
    if not 1 <= i <= N_ROOTS:
        raise ValueError(f"root index {i} out of range 1..{N_ROOTS}")


@cache
def _index_of_coeffs() -> dict[tuple[int, ...], int]:
    return {v: k for k, v in _COEFFS.items()}


def root_sum(i: int, j: int) -> int | None:
    """Index of a_i + a_j if it is a positive root."""
    s = tuple(a + b for a, b in zip(_COEFFS[i], _COEFFS[j]))
    return _index_of_coeffs().get(s)


@cache
def _relations() -> dict[tuple[int, int], CommRel]:
    rels = {}
    for i, j, k, c in _TABLE2:
        rels[(i, j)] = CommRel(i, j, k, c)
        rels[(j, i)] = CommRel(j, i, k, -c)
    return rels


def comm(i: int, j: int) -> CommRel | None:
    """Commutator relation [x_i(t), x_j(u)] = x_k(sign t u), or None if trivial."""
    _check_index(i)
    _check_index(j)
    if i == j:
        raise ValueError("comm(i, i) is undefined")
    return _relations().get((i, j))


def table2() -> tuple[CommRel, ...]:
    return tuple(CommRel(*r) for r in _TABLE2)


@cache
def hook(alpha: int) -> RootSet:
    _check_index(alpha)
    # gamma' = 0 gives alpha itself; otherwise alpha - gamma must be a positive root
    out = {alpha}
    for g in ALL_ROOTS:
        diff = tuple(a - b for a, b in zip(_COEFFS[alpha], _COEFFS[g]))
        if diff in _index_of_coeffs():
            out.add(g)
    return frozenset(out)


@cache
def arm(alpha: int) -> RootSet:
    if alpha == 12:
        return frozenset({8, 9, 10, 11})
    return (hook(alpha) & hook(12)) - {alpha}


@cache
def leg(alpha: int) -> RootSet:
    return hook(alpha) - arm(alpha) - {alpha}


def is_closed(S: Iterable[int], killed: Iterable[int] = ()) -> bool:
    """Closedness under root addition; sums landing in `killed` are ignored."""
    S = frozenset(S)
    killed = frozenset(killed)
    if not S:
        raise ValueError("closedness is defined for nonempty sets")
    for a in S:
        for b in S:
            if a < b:
                k = root_sum(a, b)
                if k is not None and k not in S and k not in killed:
                    return False
    return True


def is_upper_closed(N: Iterable[int]) -> bool:
    """gamma in N and gamma + delta a positive root implies gamma + delta in N."""
    N = frozenset(N)
    for g in N:
        for d in ALL_ROOTS:
            k = root_sum(g, d)
            if k is not None and k not in N:
                return False
    return True


def v_alpha(alpha: int) -> RootSet:
    return ALL_ROOTS - leg(alpha)


def derived_roots(S: Iterable[int], killed: Iterable[int] = ()) -> RootSet:
    """Roots of S that are sums of two members of S (ignoring killed ones)."""
    S = frozenset(S)
    out = set()
    for a in S:
        for b in S:
            k = root_sum(a, b)
            if k is not None and k in S and k not in killed:
                out.add(k)
    return frozenset(out)


def root_table() -> list[dict]:
    rows = []
    for r in roots():
        a = r.index
        rows.append(
            {
                "index": a,
                "coeffs": list(r.coeffs),
                "height": r.height,
                "hook": sorted(hook(a)),
                "arm": sorted(arm(a)),
                "leg": sorted(leg(a)),
            }
        )
    return rows
