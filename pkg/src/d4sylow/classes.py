"""Conjugacy classes of U(q) and of its quotients U/N, by exhaustive orbit enumeration.

Every element is identified with its pack code.  Conjugation by each
generator x_i(t) (i simple, t != 0) is materialised once as a permutation of
codes; orbits are then found either by the classic visited-bitset scan with
BFS, or by min-label propagation over numpy arrays.  Both give the same
canonical answer: class representatives are the minimal codes of their
orbits, sorted ascending, so the identity is class 0.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .gf import FieldSpec
from .ugroup import GroupElement, QuotientContext, TRIVIAL_CTX, as_ctx, group_arith, pack

log = logging.getLogger(__name__)

HARD_STATE_LIMIT = 3 * 10**8
DEFAULT_STATE_LIMIT = 2**25
BFS_LIMIT = 600_000
CHUNK = 1 << 20


@dataclass
class ClassData:
    field: FieldSpec
    ctx: QuotientContext
    reps: np.ndarray  # int64 pack codes, ascending
    sizes: np.ndarray  # int64
    index_of: np.ndarray  # int32, class id of every code

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def order(self) -> int:
        return self.q ** len(self.ctx.free)

    @property
    def count(self) -> int:
        return len(self.reps)

    def __len__(self):
        return len(self.reps)

    @cached_property
    def rep_coords(self) -> np.ndarray:
        return group_arith(self.field).unpack(self.reps, self.ctx)

    def rep(self, cid: int) -> GroupElement:
        return GroupElement(self.field, tuple(int(c) for c in self.rep_coords[cid]))

    def class_of(self, g: GroupElement) -> int:
        return int(self.index_of[pack(g, self.ctx)])

    def classes_of(self, coords: np.ndarray) -> np.ndarray:
        """Class ids of an array of elements (coordinates outside the quotient are dropped)."""
        return self.index_of[group_arith(self.field).pack(np.asarray(coords, dtype=np.int64), self.ctx)]

    def centralizer_order(self, cid: int) -> int:
        size = int(self.sizes[cid])
        if self.order % size:
            raise AssertionError("class size does not divide the group order")
        return self.order // size

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "field": self.field.to_json(),
            "killed": sorted(self.ctx.killed),
            "count": self.count,
            "classes": [
                {"rep": [list(self.field.coeffs_of(int(c))) for c in row], "size": int(s)}
                for row, s in zip(self.rep_coords, self.sizes)
            ],
        }


def _state_count(F: FieldSpec, ctx: QuotientContext) -> int:
    return F.q ** len(ctx.free)


def check_size(F: FieldSpec, ctx: QuotientContext, allow_large: bool = False):
    n = _state_count(F, ctx)
    if n > HARD_STATE_LIMIT:
        raise ValueError(f"{n} states exceeds the hard limit {HARD_STATE_LIMIT}")
    if n > DEFAULT_STATE_LIMIT and not allow_large:
        raise ValueError(f"{n} states exceeds {DEFAULT_STATE_LIMIT}; pass allow_large=True")


def generators(F: FieldSpec, ctx: QuotientContext) -> list[tuple[int, int]]:
    """(root, field code) pairs for x_i(t), i simple and not killed, t != 0."""
    return [(i, t) for i in (1, 2, 3, 4) if i not in ctx.killed for t in range(1, F.q)]


def conjugation_permutations(F: FieldSpec, ctx: QuotientContext) -> list[np.ndarray]:
    """perm[c] = code of x_i(t)^-1 g x_i(t) where g has code c, one array per generator."""
    GA = group_arith(F)
    n = _state_count(F, ctx)
    dtype = np.uint8 if F.q < 16 else np.int64
    gens = generators(F, ctx)
    perms = [np.empty(n, dtype=np.int32 if n < 2**31 else np.int64) for _ in gens]
    for lo in range(0, n, CHUNK):
        codes = np.arange(lo, min(lo + CHUNK, n), dtype=np.int64)
        G = GA.unpack(codes, ctx).astype(dtype)
        for perm, (i, t) in zip(perms, gens):
            perm[lo : lo + len(codes)] = GA.pack(GA.conj_root(G, i, t, ctx).astype(np.int64), ctx)
    return perms


def _orbits_bfs(perms: list[np.ndarray], n: int) -> np.ndarray:
    """Visited-bitset scan in code order, BFS from each unvisited code."""
    visited = bytearray((n + 7) // 8)
    labels = np.empty(n, dtype=np.int64)
    plist = [p.tolist() for p in perms]
    for start in range(n):
        if visited[start >> 3] >> (start & 7) & 1:
            continue
        visited[start >> 3] |= 1 << (start & 7)
        labels[start] = start
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for p in plist:
                d = p[c]
                if not visited[d >> 3] >> (d & 7) & 1:
                    visited[d >> 3] |= 1 << (d & 7)
                    labels[d] = start
                    queue.append(d)
    return labels


def _orbits_labels(perms: list[np.ndarray], n: int) -> np.ndarray:
    """Min-label propagation with pointer jumping; the fixpoint is the orbit minimum."""
    label = np.arange(n, dtype=perms[0].dtype)
    rounds = 0
    while True:
        rounds += 1
        before = label.copy()
        for p in perms:
            np.minimum(label, label[p], out=label)
        while True:
            jumped = label[label]
            if np.array_equal(jumped, label):
                break
            label = jumped
        if np.array_equal(before, label):
            break
    log.debug("label propagation converged after %d rounds", rounds)
    return label.astype(np.int64)


def conjugacy_classes(F: FieldSpec, ctx=None, method: str = "auto", allow_large: bool = False) -> ClassData:
    ctx = as_ctx(ctx)
    check_size(F, ctx, allow_large)
    n = _state_count(F, ctx)
    if n == 1:
        return ClassData(F, ctx, np.zeros(1, np.int64), np.ones(1, np.int64), np.zeros(1, np.int32))
    perms = conjugation_permutations(F, ctx)
    if method == "auto":
        method = "bfs" if n <= BFS_LIMIT // 8 else "labels"
    if method == "bfs":
        labels = _orbits_bfs(perms, n)
    elif method == "labels":
        labels = _orbits_labels(perms, n)
    else:
        raise ValueError(f"unknown method {method!r}")
    del perms
    reps, index_of, sizes = np.unique(labels, return_inverse=True, return_counts=True)
    return ClassData(F, ctx, reps.astype(np.int64), sizes.astype(np.int64), index_of.astype(np.int32).ravel())


def class_of(g: GroupElement, cd: ClassData) -> int:
    return cd.class_of(g)


def centralizer_order(cid: int, cd: ClassData) -> int:
    return cd.centralizer_order(cid)


def class_count_polynomial(q: int, parity: str | None = None) -> int:
    """Number of conjugacy classes of U(q) from the closed formulas."""
    actual = "odd" if q % 2 else "even"
    if parity is None:
        parity = actual
    if q < 2:
        raise ValueError("q must be at least 2")
    if parity != actual:
        raise ValueError(f"q = {q} is {actual}, not {parity}")
    if parity == "odd":
        return 2 * q**5 + 5 * q**4 - 4 * q**3 - 4 * q**2 + 2 * q
    return 2 * q**5 + 8 * q**4 - 16 * q**3 + 14 * q**2 - 10 * q + 3


_CACHE: dict = {}


def cached_classes(F: FieldSpec, ctx=None, allow_large: bool = False) -> ClassData:
    key = (F, as_ctx(ctx))
    if key not in _CACHE:
        _CACHE[key] = conjugacy_classes(F, ctx, allow_large=allow_large)
    return _CACHE[key]
