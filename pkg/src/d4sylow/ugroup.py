"""Arithmetic in the unipotent group U(q) of type D4.

Elements are kept in the normal form x_1(d_1) x_2(d_2) ... x_12(d_12).
`collect` is the reference multiplication: adjacent transpositions driven by
the commutator table.  Running the same routine over integer polynomials
yields closed-form product and inverse formulas, which `GroupArith` evaluates
on whole numpy arrays of elements at once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cache, cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .gf import FieldElement, FieldSpec
from .rootsys import ALL_ROOTS, N_ROOTS, comm, derived_roots, is_closed, is_upper_closed

# -- collection ---------------------------------------------------------------


def collect(letters: Sequence[tuple[int, object]]) -> list[tuple[int, object]]:
    """Rewrite a word of root elements into ascending normal form.

    Parameters only need +, unary -, * (also by int) and truthiness, so the
    same routine runs over field elements and over symbolic polynomials.
    Each swap x_j(u) x_i(t) -> x_i(t) x_j(u) [x_j(u), x_i(t)] inserts a letter
    of strictly larger height, so the process terminates.
    """
    w = [(i, v) for i, v in letters if v]
    pos = 0
    while pos < len(w) - 1:
        (j, u), (i, t) = w[pos], w[pos + 1]
        if i == j:
            s = u + t
            w[pos : pos + 2] = [(i, s)] if s else []
            pos = max(pos - 1, 0)
        elif j > i:
            rel = comm(j, i)
            repl = [(i, t), (j, u)]
            if rel is not None:
                c = rel.sign * (u * t)
                if c:
                    repl.append((rel.k, c))
            w[pos : pos + 2] = repl
            pos = max(pos - 1, 0)
        else:
            pos += 1
    return w


class IntPoly:
    """Sparse polynomial with integer coefficients; monomials are exponent tuples."""

    __slots__ = ("terms", "nvars")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def var(cls, nvars: int, i: int) -> IntPoly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    def __add__(self, other: IntPoly) -> IntPoly:
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return IntPoly(self.nvars, t)

    def __neg__(self) -> IntPoly:
        return IntPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(self.nvars, {m: c * other for m, c in self.terms.items()})
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                t[m] = t.get(m, 0) + c1 * c2
        return IntPoly(self.nvars, t)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return " + ".join(f"{c}*{m}" for m, c in sorted(self.terms.items())) or "0"


def _coords_from_letters(letters, nvars: int) -> list[IntPoly]:
    out = [IntPoly(nvars) for _ in range(N_ROOTS)]
    for i, v in letters:
        out[i - 1] = v
    return out


@cache
def product_formula() -> tuple[IntPoly, ...]:
    """Coordinates of a*b as polynomials in (a_1..a_12, b_1..b_12)."""
    nv = 2 * N_ROOTS
    word = [(i, IntPoly.var(nv, i - 1)) for i in range(1, N_ROOTS + 1)]
    word += [(i, IntPoly.var(nv, N_ROOTS + i - 1)) for i in range(1, N_ROOTS + 1)]
    return tuple(_coords_from_letters(collect(word), nv))


@cache
def inverse_formula() -> tuple[IntPoly, ...]:
    nv = N_ROOTS
    word = [(i, -IntPoly.var(nv, i - 1)) for i in range(N_ROOTS, 0, -1)]
    return tuple(_coords_from_letters(collect(word), nv))


@cache
def root_conjugation_formula(i: int) -> tuple[IntPoly, ...]:
    """Coordinates of x_i(t)^-1 g x_i(t) as polynomials in (g_1..g_12, t)."""
    nv = N_ROOTS + 1
    t = IntPoly.var(nv, N_ROOTS)
    word = [(i, -t)] + [(j, IntPoly.var(nv, j - 1)) for j in range(1, N_ROOTS + 1)] + [(i, t)]
    return tuple(_coords_from_letters(collect(word), nv))


# -- quotients and pattern subgroups ----------------------------------------


@dataclass(frozen=True)
class QuotientContext:
    """U/N for an upper-closed root set N; N-coordinates are forced to zero."""

    killed: frozenset

    def __post_init__(self):
        object.__setattr__(self, "killed", frozenset(self.killed))
        if not self.killed <= ALL_ROOTS:
            raise ValueError("killed roots must be in 1..12")
        if not is_upper_closed(self.killed):
            raise ValueError(f"{sorted(self.killed)} is not upper-closed, so it is not normal")

    @property
    def free(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, N_ROOTS + 1) if i not in self.killed)


TRIVIAL_CTX = QuotientContext(frozenset())


def as_ctx(ctx: QuotientContext | Iterable[int] | None) -> QuotientContext:
    if ctx is None:
        return TRIVIAL_CTX
    if isinstance(ctx, QuotientContext):
        return ctx
    return QuotientContext(frozenset(ctx))


@dataclass(frozen=True)
class GroupElement:
    field: FieldSpec
    coords: tuple[int, ...]  # field codes d_1..d_12

    def d(self, i: int) -> FieldElement:
        return FieldElement(self.field, self.coords[i - 1])

    @property
    def support(self) -> frozenset:
        return frozenset(i + 1 for i, c in enumerate(self.coords) if c)

    def is_identity(self) -> bool:
        return not any(self.coords)

    def letters(self) -> list[tuple[int, FieldElement]]:
        return [(i + 1, FieldElement(self.field, c)) for i, c in enumerate(self.coords) if c]

    def __mul__(self, other: GroupElement) -> GroupElement:
        return mul(self, other)

    def __repr__(self):
        parts = [f"x{i}({v!r})" for i, v in self.letters()]
        return "*".join(parts) or "1"

    def to_json(self) -> dict:
        return {"d": [list(self.field.coeffs_of(c)) for c in self.coords]}

    @classmethod
    def from_json(cls, F: FieldSpec, d: dict) -> GroupElement:
        return cls(F, tuple(F.code_of(c) for c in d["d"]))


def identity(F: FieldSpec) -> GroupElement:
    return GroupElement(F, (0,) * N_ROOTS)


def root_element(F: FieldSpec, i: int, t) -> GroupElement:
    t = F(t)
    c = [0] * N_ROOTS
    c[i - 1] = t.code
    return GroupElement(F, tuple(c))


def element(F: FieldSpec, coords: Sequence) -> GroupElement:
    if len(coords) != N_ROOTS:
        raise ValueError("need 12 coordinates")
    return GroupElement(F, tuple(F(c).code for c in coords))


def _project(g: GroupElement, ctx: QuotientContext | None) -> GroupElement:
    if ctx is None or not ctx.killed:
        return g
    return GroupElement(g.field, tuple(0 if i + 1 in ctx.killed else c for i, c in enumerate(g.coords)))


def normalize(word: Sequence[tuple[int, object]], field: FieldSpec | None = None, ctx=None) -> GroupElement:
    word = list(word)
    if field is None:
        if not word:
            raise ValueError("empty word needs an explicit field")
        field = word[0][1].field
    letters = [(i, field(v)) for i, v in word]
    coords = [0] * N_ROOTS
    for i, v in collect(letters):
        coords[i - 1] = v.code
    return _project(GroupElement(field, tuple(coords)), as_ctx(ctx) if ctx is not None else None)


def mul(a: GroupElement, b: GroupElement, ctx=None) -> GroupElement:
    if a.field != b.field:
        raise ValueError("elements over different fields")
    return normalize(a.letters() + b.letters(), a.field, ctx)


def inv(a: GroupElement, ctx=None) -> GroupElement:
    return normalize([(i, -v) for i, v in reversed(a.letters())], a.field, ctx)


def conj(g: GroupElement, h: GroupElement, ctx=None) -> GroupElement:
    """h^-1 g h.  The left-exponent form h g h^-1 is conj(g, inv(h))."""
    return normalize(inv(h).letters() + g.letters() + h.letters(), g.field, ctx)


def commutator(a: GroupElement, b: GroupElement, ctx=None) -> GroupElement:
    return normalize(inv(a).letters() + inv(b).letters() + a.letters() + b.letters(), a.field, ctx)


def pack(g: GroupElement, ctx=None) -> int:
    ctx = as_ctx(ctx)
    q = g.field.q
    code = 0
    for pos, i in enumerate(ctx.free):
        code += g.coords[i - 1] * q**pos
    return code


def unpack(F: FieldSpec, code: int, ctx=None) -> GroupElement:
    ctx = as_ctx(ctx)
    q = F.q
    if not 0 <= code < q ** len(ctx.free):
        raise ValueError(f"code {code} out of range")
    coords = [0] * N_ROOTS
    for i in ctx.free:
        code, coords[i - 1] = divmod(code, q)
    return GroupElement(F, tuple(coords))


@dataclass(frozen=True)
class PatternSubgroup:
    field: FieldSpec
    roots: frozenset
    ctx: QuotientContext = TRIVIAL_CTX

    @property
    def effective_roots(self) -> frozenset:
        return self.roots - self.ctx.killed

    @property
    def order(self) -> int:
        return self.field.q ** len(self.effective_roots)

    def contains(self, g: GroupElement) -> bool:
        return g.support <= self.roots | self.ctx.killed

    def transversal_roots(self) -> tuple[int, ...]:
        """Roots of the coordinate complement, a right transversal in the ambient."""
        return tuple(i for i in self.ctx.free if i not in self.roots)

    def derived_roots(self) -> frozenset:
        return derived_roots(self.effective_roots, self.ctx.killed)


def subgroup_make(F: FieldSpec, S: Iterable[int], ctx=None) -> PatternSubgroup:
    ctx = as_ctx(ctx)
    S = frozenset(S)
    if not S <= ALL_ROOTS:
        raise ValueError("roots must lie in 1..12")
    eff = S - ctx.killed
    if eff and not is_closed(eff, ctx.killed):
        raise ValueError(f"root set {sorted(S)} is not closed")
    return PatternSubgroup(F, S, ctx)


# -- vectorised arithmetic ---------------------------------------------------


def _eval_poly(F: FieldSpec, poly: IntPoly, variables: Sequence, shape) -> np.ndarray:
    """Evaluate over F; a variable may be a python int (a constant) or an array."""
    acc = np.zeros(shape, dtype=np.int64)
    for mono, c in poly.terms.items():
        c %= F.p
        if not c:
            continue
        const = c
        term = None
        for var, e in enumerate(mono):
            if not e:
                continue
            v = variables[var]
            if isinstance(v, int):
                if v == 0:
                    break
                for _ in range(e):
                    const = int(F.vmul(const, v))
            else:
                for _ in range(e):
                    term = v if term is None else F.vmul(term, v)
        else:
            if term is None:
                acc = F.vadd(acc, const)
            else:
                acc = F.vadd(acc, term if const == 1 else F.vmul(const, term))
    return acc


class GroupArith:
    """Array-at-a-time multiplication for U(q) and its quotients.

    Elements are (N, 12) int64 arrays of field codes.
    """

    def __init__(self, F: FieldSpec):
        self.F = F
        self._mul = product_formula()
        self._inv = inverse_formula()

    def mul(self, A, B, ctx: QuotientContext | None = None) -> np.ndarray:
        """Product A*B; a 1-d operand is a single constant element."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        va = [int(x) for x in A] if A.ndim == 1 else [A[..., i] for i in range(N_ROOTS)]
        vb = [int(x) for x in B] if B.ndim == 1 else [B[..., i] for i in range(N_ROOTS)]
        shape = np.broadcast_shapes(A.shape[:-1], B.shape[:-1])
        out = np.empty(shape + (N_ROOTS,), dtype=np.int64)
        for k in range(N_ROOTS):
            if ctx is not None and k + 1 in ctx.killed:
                out[..., k] = 0
            else:
                out[..., k] = _eval_poly(self.F, self._mul[k], va + vb, shape)
        return out

    def inv(self, A, ctx: QuotientContext | None = None) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        va = [int(x) for x in A] if A.ndim == 1 else [A[..., i] for i in range(N_ROOTS)]
        out = np.empty(A.shape, dtype=np.int64)
        for k in range(N_ROOTS):
            if ctx is not None and k + 1 in ctx.killed:
                out[..., k] = 0
            else:
                out[..., k] = _eval_poly(self.F, self._inv[k], va, A.shape[:-1])
        return out

    def conj_root(self, G: np.ndarray, i: int, t: int, ctx: QuotientContext | None = None) -> np.ndarray:
        """x_i(t)^-1 G x_i(t) for a constant field code t."""
        G = np.asarray(G)
        va = [G[..., j] for j in range(N_ROOTS)] + [int(t)]
        form = root_conjugation_formula(i)
        out = np.empty(G.shape, dtype=G.dtype)
        for k in range(N_ROOTS):
            if ctx is not None and k + 1 in ctx.killed:
                out[..., k] = 0
            else:
                out[..., k] = _eval_poly(self.F, form[k], va, G.shape[:-1])
        return out

    def conj(self, G: np.ndarray, H: np.ndarray, ctx=None) -> np.ndarray:
        """H^-1 G H, broadcasting."""
        return self.mul(self.mul(self.inv(H, ctx), G, ctx), H, ctx)

    def pack(self, A: np.ndarray, ctx: QuotientContext | None = None) -> np.ndarray:
        ctx = ctx or TRIVIAL_CTX
        q = self.F.q
        code = np.zeros(A.shape[:-1], dtype=np.int64)
        for pos, i in enumerate(ctx.free):
            code += A[..., i - 1] * q**pos
        return code

    def unpack(self, codes: np.ndarray, ctx: QuotientContext | None = None) -> np.ndarray:
        ctx = ctx or TRIVIAL_CTX
        q = self.F.q
        codes = np.asarray(codes, dtype=np.int64)
        out = np.zeros(codes.shape + (N_ROOTS,), dtype=np.int64)
        rest = codes.copy()
        for i in ctx.free:
            out[..., i - 1] = rest % q
            rest //= q
        return out

    def all_elements(self, roots: Iterable[int]) -> np.ndarray:
        """Every element supported on `roots`, in ascending pack order."""
        roots = sorted(roots)
        q = self.F.q
        n = q ** len(roots)
        out = np.zeros((n, N_ROOTS), dtype=np.int64)
        idx = np.arange(n, dtype=np.int64)
        for i in roots:
            out[:, i - 1] = idx % q
            idx //= q
        return out

    def root_elements(self, i: int, values: Sequence[int] | None = None) -> np.ndarray:
        values = range(self.F.q) if values is None else values
        out = np.zeros((len(values), N_ROOTS), dtype=np.int64)
        out[:, i - 1] = list(values)
        return out


@cache
def group_arith(F: FieldSpec) -> GroupArith:
    return GroupArith(F)


def to_array(elements: Iterable[GroupElement]) -> np.ndarray:
    return np.array([g.coords for g in elements], dtype=np.int64).reshape(-1, N_ROOTS)


def from_array(F: FieldSpec, A: np.ndarray) -> list[GroupElement]:
    return [GroupElement(F, tuple(int(c) for c in row)) for row in np.asarray(A).reshape(-1, N_ROOTS)]


# -- enumeration and structure of pattern subgroups --------------------------

DEFAULT_ENUM_LIMIT = 10**7


def _guard(n: int, limit: int):
    if n > limit:
        raise ValueError(f"{n} elements exceeds the enumeration limit {limit}")


def enumerate_subgroup(P: PatternSubgroup, limit: int = DEFAULT_ENUM_LIMIT) -> Iterator[GroupElement]:
    _guard(P.order, limit)
    GA = group_arith(P.field)
    A = GA.all_elements(P.effective_roots)
    codes = GA.pack(A, P.ctx)
    for row in A[np.argsort(codes, kind="stable")]:
        yield GroupElement(P.field, tuple(int(c) for c in row))


def subgroup_array(P: PatternSubgroup, limit: int = DEFAULT_ENUM_LIMIT) -> np.ndarray:
    _guard(P.order, limit)
    GA = group_arith(P.field)
    A = GA.all_elements(P.effective_roots)
    return A[np.argsort(GA.pack(A, P.ctx), kind="stable")]


@dataclass
class StructureReport:
    order: int
    derived: np.ndarray  # element arrays
    center: np.ndarray
    exponent: int

    @property
    def derived_order(self) -> int:
        return len(self.derived)

    @property
    def center_order(self) -> int:
        return len(self.center)

    def support(self, which: str) -> frozenset:
        A = getattr(self, which)
        return frozenset(int(i) + 1 for i in np.flatnonzero(A.any(axis=0)))


def _closure(GA: GroupArith, gens: np.ndarray, ctx) -> np.ndarray:
    """Subgroup generated by `gens`: breadth-first right multiplication over a visited mask."""
    ctx = as_ctx(ctx)
    seen = np.zeros(GA.F.q ** len(ctx.free), dtype=bool)
    seen[0] = True
    frontier = np.zeros((1, N_ROOTS), dtype=np.int64)
    while len(frontier):
        prods = GA.mul(frontier[:, None, :], gens[None, :, :], ctx).reshape(-1, N_ROOTS)
        codes, first = np.unique(GA.pack(prods, ctx), return_index=True)
        fresh = ~seen[codes]
        seen[codes[fresh]] = True
        frontier = prods[first[fresh]]
    return GA.unpack(np.flatnonzero(seen), ctx)


def derived_and_center(P: PatternSubgroup, limit: int = DEFAULT_ENUM_LIMIT, center: bool = True,
                       exponent: bool = True) -> StructureReport:
    """Derived subgroup, center and exponent of P by exhaustive computation."""
    _guard(P.order, limit)
    GA = group_arith(P.field)
    ctx = P.ctx
    elems = subgroup_array(P, limit)
    F = P.field
    # generators: root elements on an F_p-basis of each coordinate
    basis = [F.p**i for i in range(F.n)]
    gens = np.concatenate([GA.root_elements(i, basis) for i in sorted(P.effective_roots)]) if P.effective_roots else np.zeros((0, N_ROOTS), dtype=np.int64)

    # commutators of generators plus closure under conjugation gives the derived subgroup
    comms = []
    for a, b in itertools.product(range(len(gens)), repeat=2):
        x, y = gens[a], gens[b]
        c = GA.mul(GA.mul(GA.inv(x, ctx), GA.inv(y, ctx), ctx), GA.mul(x, y, ctx), ctx)
        if c.any():
            comms.append(c)
    if comms:
        D = _closure(GA, np.unique(np.array(comms), axis=0), ctx)
        # normal closure: conjugate by generators until stable
        while True:
            conjs = GA.conj(D[:, None, :], gens[None, :, :], ctx).reshape(-1, N_ROOTS)
            extra = conjs[~np.isin(GA.pack(conjs, ctx), GA.pack(D, ctx))]
            if not len(extra):
                break
            D = _closure(GA, np.concatenate([D, extra]), ctx)
    else:
        D = np.zeros((1, N_ROOTS), dtype=np.int64)

    Z = np.zeros((0, N_ROOTS), dtype=np.int64)
    if center:
        central = np.ones(len(elems), dtype=bool)
        for i in sorted(P.effective_roots):
            for b in basis:
                central &= (GA.conj_root(elems, i, b, ctx) == elems).all(axis=1)
        Z = elems[central]

    exp = 0
    if exponent:
        # element orders are powers of p: raise to the p-th power until trivial
        exp, power = 1, elems
        while power.any():
            nxt = power
            for _ in range(F.p - 1):
                nxt = GA.mul(nxt, power, ctx)
            power = nxt[nxt.any(axis=1)]
            exp *= F.p
    return StructureReport(order=len(elems), derived=D, center=Z, exponent=exp)
