"""Exact class functions on U(q) and its quotients.

A class function stores, for every conjugacy class, the coordinates of its
value in Z[zeta_p] with respect to 1, zeta, ..., zeta^(p-2) (a single integer
column for p = 2).  Every character built here is a genuine character, so
integer coordinates suffice.  Linear characters of pattern subgroups are
phi(sum_gamma s_gamma d_gamma), with phi(t) = zeta_p^Tr(t).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from .classes import ClassData
from .gf import CycNumber, FieldElement, FieldSpec, counts_to_coeffs
from .rootsys import ALL_ROOTS, N_ROOTS, leg, v_alpha
from .ugroup import (
    GroupElement,
    PatternSubgroup,
    QuotientContext,
    as_ctx,
    group_arith,
    subgroup_array,
    subgroup_make,
)

# -- linear characters -------------------------------------------------------


def _exponents(F: FieldSpec, roots: Sequence[int], S: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Tr(sum_gamma s_gamma y_gamma) mod p for a batch of parameter rows S (B, len(roots))
    against elements Y (M, 12); returns (B, M)."""
    p, n = F.p, F.n
    if not roots:
        return np.zeros((len(S), len(Y)), dtype=np.int64)
    C = F.coeff_table
    Ycoef = np.concatenate([C[Y[:, g - 1]] for g in roots], axis=1)  # (M, k n)
    Scoef = np.concatenate([C[S[:, j]] @ F.trace_form for j in range(len(roots))], axis=1)  # (B, k n)
    return (Scoef @ Ycoef.T) % p


@dataclass(frozen=True)
class LinearCharacter:
    """g -> prod_gamma phi(s_gamma d_gamma(g)) on a pattern subgroup."""

    domain: PatternSubgroup
    params: tuple[tuple[int, int], ...]  # sorted (root, field code) with code != 0

    @property
    def field(self) -> FieldSpec:
        return self.domain.field

    @property
    def param_map(self) -> dict[int, int]:
        return dict(self.params)

    def exponents(self, Y: np.ndarray) -> np.ndarray:
        roots = [g for g, _ in self.params]
        S = np.array([[s for _, s in self.params]], dtype=np.int64).reshape(1, len(roots))
        return _exponents(self.field, roots, S, np.asarray(Y, dtype=np.int64))[0]

    def contains(self, Y: np.ndarray) -> np.ndarray:
        outside = [i - 1 for i in self.domain.ctx.free if i not in self.domain.roots]
        return ~np.asarray(Y)[:, outside].any(axis=1)

    def value(self, g: GroupElement) -> CycNumber:
        Y = np.array([g.coords], dtype=np.int64)
        if not self.contains(Y)[0]:
            raise ValueError(f"{g} is not in the domain")
        return CycNumber.root_of_unity(self.field.p, int(self.exponents(Y)[0]))


def _param(F: FieldSpec, s) -> FieldElement:
    """FieldElements pass through; plain ints are field codes (not integers mod p)."""
    if isinstance(s, FieldElement):
        return F(s)
    return F.element(int(s))


def linear_character(P: PatternSubgroup, params: Mapping[int, object]) -> LinearCharacter:
    """params maps roots to FieldElements or field codes."""
    F = P.field
    clean = {}
    for g, s in params.items():
        code = _param(F, s).code
        if g not in P.effective_roots:
            if code:
                raise ValueError(f"root {g} is not in the domain")
            continue
        if code:
            clean[g] = code
    bad = sorted(set(clean) & P.derived_roots())
    if bad:
        raise ValueError(f"parameters on derived roots {bad}: not a homomorphism")
    return LinearCharacter(P, tuple(sorted(clean.items())))


# -- explicit subgroups and their characters ---------------------------------


@dataclass
class ExplicitSubgroup:
    """A subgroup of U/N given by its sorted pack codes, optionally carrying a
    linear character as exponents of zeta_p aligned with `codes`."""

    field: FieldSpec
    ctx: QuotientContext
    codes: np.ndarray
    char_exponents: np.ndarray | None = None

    @property
    def order(self) -> int:
        return len(self.codes)

    @cached_property
    def coords(self) -> np.ndarray:
        return group_arith(self.field).unpack(self.codes, self.ctx)

    def lookup(self, Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        codes = group_arith(self.field).pack(np.asarray(Y, dtype=np.int64), self.ctx)
        idx = np.searchsorted(self.codes, codes)
        idx = np.minimum(idx, len(self.codes) - 1)
        return self.codes[idx] == codes, idx

    def contains(self, Y: np.ndarray) -> np.ndarray:
        return self.lookup(Y)[0]

    def exponents(self, Y: np.ndarray) -> np.ndarray:
        if self.char_exponents is None:
            raise ValueError("no character attached")
        member, idx = self.lookup(Y)
        return np.where(member, self.char_exponents[idx], 0)

    def with_character(self, exps: np.ndarray) -> ExplicitSubgroup:
        return ExplicitSubgroup(self.field, self.ctx, self.codes, np.asarray(exps, dtype=np.int64) % self.field.p)

    def check_closed(self, gens: np.ndarray) -> bool:
        GA = group_arith(self.field)
        prods = GA.mul(self.coords[:, None, :], gens[None, :, :], self.ctx).reshape(-1, N_ROOTS)
        return bool(self.contains(prods).all())

    def check_homomorphism(self, gens: np.ndarray) -> bool:
        """mu(g h) = mu(g) mu(h) for all g and each generator h."""
        GA = group_arith(self.field)
        p = self.field.p
        base = self.char_exponents
        for h in gens:
            prods = GA.mul(self.coords, h, self.ctx)
            member, idx = self.lookup(prods)
            if not member.all():
                return False
            eh = int(self.exponents(h[None, :])[0])
            if not np.array_equal(self.char_exponents[idx], (base + eh) % p):
                return False
        return True


def explicit_subgroup(F: FieldSpec, elements: np.ndarray, ctx=None) -> ExplicitSubgroup:
    ctx = as_ctx(ctx)
    codes = np.unique(group_arith(F).pack(np.asarray(elements, dtype=np.int64), ctx))
    return ExplicitSubgroup(F, ctx, codes)


# -- class functions ----------------------------------------------------------


@dataclass
class ClassFunction:
    classes: ClassData
    values: np.ndarray  # (n_classes, max(p-1, 1)) integer Z[zeta_p] coordinates
    family: str | None = None
    label: str = ""

    @property
    def field(self) -> FieldSpec:
        return self.classes.field

    @property
    def p(self) -> int:
        return self.classes.field.p

    @property
    def degree(self) -> int:
        v = self.values[0]
        if v[1:].any():
            raise ValueError("value at the identity is not rational")
        return int(v[0])

    def value(self, cid: int) -> CycNumber:
        return CycNumber(self.p, [int(c) for c in self.values[cid]])

    def at(self, g: GroupElement) -> CycNumber:
        return self.value(self.classes.class_of(g))

    def key(self) -> bytes:
        return np.ascontiguousarray(self.values, dtype=np.int64).tobytes()

    def counts(self) -> np.ndarray:
        """Exponent multiplicities, shape (n_classes, p), last column zero."""
        p = self.p
        out = np.zeros((len(self.values), p), dtype=np.int64)
        out[:, : self.values.shape[1]] = self.values
        if p == 2:
            out[:, 1] = 0
        return out

    def conj(self) -> ClassFunction:
        c = self.counts()
        p = self.p
        return self._like(counts_to_coeffs(c[:, (-np.arange(p)) % p], p))

    def _like(self, values: np.ndarray) -> ClassFunction:
        return ClassFunction(self.classes, values, self.family, self.label)

    def __mul__(self, other: ClassFunction) -> ClassFunction:
        return tensor(self, other)

    def __add__(self, other: ClassFunction) -> ClassFunction:
        _same_ambient(self, other)
        return ClassFunction(self.classes, self.values + other.values)

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.classes is other.classes and np.array_equal(self.values, other.values)

    @cached_property
    def kernel_roots(self) -> frozenset:
        return kernel_roots(self)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "degree": str(self.degree),
            "values": self.values.tolist(),
            "kernel_roots": sorted(self.kernel_roots),
        }


def _same_ambient(a: ClassFunction, b: ClassFunction):
    if a.classes is not b.classes:
        raise ValueError("class functions live on different class data")


def from_counts(cd: ClassData, counts: np.ndarray, **kw) -> ClassFunction:
    return ClassFunction(cd, counts_to_coeffs(counts, cd.field.p), **kw)


def trivial_character(cd: ClassData) -> ClassFunction:
    counts = np.zeros((cd.count, cd.field.p), dtype=np.int64)
    counts[:, 0] = 1
    return from_counts(cd, counts, label="trivial")


def linear_class_function(beta: LinearCharacter, cd: ClassData) -> ClassFunction:
    """A linear character of the whole ambient group as a class function."""
    if set(beta.domain.ctx.free) - beta.domain.roots:
        raise ValueError("linear character is not defined on the whole ambient group")
    if beta.domain.ctx != cd.ctx:
        raise ValueError("quotient mismatch")
    exps = beta.exponents(cd.rep_coords)
    counts = np.zeros((cd.count, cd.field.p), dtype=np.int64)
    counts[np.arange(cd.count), exps] = 1
    return from_counts(cd, counts)


def tensor(chi: ClassFunction, psi: ClassFunction) -> ClassFunction:
    _same_ambient(chi, psi)
    p = chi.p
    a, b = chi.counts(), psi.counts()
    out = np.zeros_like(a)
    for i in range(p):
        for j in range(p):
            out[:, (i + j) % p] += a[:, i] * b[:, j]
    return from_counts(chi.classes, out, family=chi.family)


def tensor_linear(chi: ClassFunction, beta: LinearCharacter) -> ClassFunction:
    return tensor(chi, linear_class_function(beta, chi.classes))


# -- induction ------------------------------------------------------------------


def conjugates_by_transversal(cd: ClassData, T: np.ndarray) -> np.ndarray:
    """t r t^-1 for every transversal element t and class rep r; shape (len(T), n_classes, 12)."""
    GA = group_arith(cd.field)
    R = cd.rep_coords
    Tinv = GA.inv(T, cd.ctx)
    return GA.mul(GA.mul(T[:, None, :], R[None, :, :], cd.ctx), Tinv[:, None, :], cd.ctx)


def _counts_from_exponents(E: np.ndarray, mask: np.ndarray, p: int) -> np.ndarray:
    """E (B, m, c) exponents, mask (m, c); returns multiplicities (B, c, p)."""
    out = np.empty((E.shape[0], E.shape[2], p), dtype=np.int64)
    for k in range(p):
        out[:, :, k] = ((E == k) & mask[None]).sum(axis=1)
    return out


def pattern_transversal(P: PatternSubgroup) -> np.ndarray:
    return group_arith(P.field).all_elements(P.transversal_roots())


def induce_batch(
    P: PatternSubgroup,
    roots: Sequence[int],
    params: np.ndarray,
    cd: ClassData,
    chunk: int = 256,
) -> np.ndarray:
    """Induce many linear characters of P to the ambient of `cd` at once.

    params has shape (B, len(roots)); returns Z[zeta_p] coordinates (B, n_classes, p-1).
    """
    if P.ctx != cd.ctx:
        raise ValueError("subgroup and class data live in different quotients")
    F = cd.field
    T = pattern_transversal(P)
    Y = conjugates_by_transversal(cd, T)  # (m, c, 12)
    m, c = Y.shape[:2]
    flat = Y.reshape(-1, N_ROOTS)
    outside = [i - 1 for i in cd.ctx.free if i not in P.roots]
    mask = ~flat[:, outside].any(axis=1).reshape(m, c)
    params = np.asarray(params, dtype=np.int64).reshape(len(params), len(roots))
    out = np.empty((len(params), c, max(F.p - 1, 1)), dtype=np.int64)
    for lo in range(0, len(params), chunk):
        E = _exponents(F, list(roots), params[lo : lo + chunk], flat).reshape(-1, m, c)
        out[lo : lo + chunk] = counts_to_coeffs(_counts_from_exponents(E, mask, F.p), F.p)
    return out


def induce(lam, cd: ClassData, transversal: np.ndarray | None = None, **kw) -> ClassFunction:
    """Induce a linear character of a pattern or explicit subgroup to the ambient of `cd`."""
    if isinstance(lam, LinearCharacter):
        P = lam.domain
        roots = [g for g, _ in lam.params]
        vals = induce_batch(P, roots, np.array([[s for _, s in lam.params]], dtype=np.int64), cd)
        return ClassFunction(cd, vals[0], **kw)
    if isinstance(lam, ExplicitSubgroup):
        if transversal is None:
            raise ValueError("explicit subgroups need a right transversal")
        if lam.order * len(transversal) != cd.order:
            raise ValueError("transversal size does not match the index")
        Y = conjugates_by_transversal(cd, np.asarray(transversal, dtype=np.int64))
        m, c = Y.shape[:2]
        flat = Y.reshape(-1, N_ROOTS)
        member = lam.contains(flat).reshape(m, c)
        E = lam.exponents(flat).reshape(1, m, c)
        counts = _counts_from_exponents(E, member, cd.field.p)[0]
        return from_counts(cd, counts, **kw)
    raise TypeError(f"cannot induce {type(lam).__name__}")


def induce_full_sum(lam: LinearCharacter, cd: ClassData) -> ClassFunction:
    """(1/|H|) sum over every x in the ambient of lam(x g x^-1); a slow cross-check."""
    F = cd.field
    GA = group_arith(F)
    X = GA.all_elements(cd.ctx.free)
    Xinv = GA.inv(X, cd.ctx)
    counts = np.zeros((cd.count, F.p), dtype=np.int64)
    for cid, r in enumerate(cd.rep_coords):
        Y = GA.mul(GA.mul(X, r, cd.ctx), Xinv, cd.ctx)
        mask = lam.contains(Y)
        e = lam.exponents(Y[mask])
        counts[cid] = np.bincount(e, minlength=F.p)
    H = lam.domain.order
    if (counts % H).any():
        raise AssertionError("full sum not divisible by |H|")
    return from_counts(cd, counts // H)


# -- inflation ------------------------------------------------------------------


def inflate(chi: ClassFunction, cd: ClassData) -> ClassFunction:
    """View a class function of U/N as one of the (larger) ambient of `cd`."""
    if not cd.ctx.killed <= chi.classes.ctx.killed:
        raise ValueError("target is not an extension of the source quotient")
    ids = chi.classes.classes_of(cd.rep_coords)
    return ClassFunction(cd, chi.values[ids], chi.family, chi.label)


# -- inner products ------------------------------------------------------------


def _raw_gram(X: np.ndarray, Y: np.ndarray, w: np.ndarray, p: int) -> np.ndarray:
    """sum_c w_c X_c conj(Y_c) with exponent bookkeeping; returns (len X, len Y, p)."""
    bound = float(np.abs(X).max(initial=0)) * float(np.abs(Y).max(initial=0)) * float(w.sum()) * p
    use_float = bound < 2.0**52
    out = np.zeros((X.shape[0], Y.shape[0], p), dtype=np.int64)
    for a in range(p):
        Xa = X[:, :, a] * w[None, :]
        for b in range(p):
            if use_float:
                prod = np.rint(Xa.astype(np.float64) @ Y[:, :, b].T.astype(np.float64)).astype(np.int64)
            else:
                prod = Xa @ Y[:, :, b].T
            out[:, :, (a - b) % p] += prod
    return out


def _stack_counts(chis: Sequence[ClassFunction]) -> np.ndarray:
    return np.stack([c.counts() for c in chis])


def gram(chis: Sequence[ClassFunction], psis: Sequence[ClassFunction] | None = None) -> np.ndarray:
    """Matrix of |G| * (chi, psi) in Z[zeta_p] coordinates, shape (n, m, max(p-1, 1))."""
    psis = chis if psis is None else psis
    if not chis or not psis:
        return np.zeros((len(chis), len(psis), 1), dtype=np.int64)
    cd = chis[0].classes
    for c in list(chis) + list(psis):
        if c.classes is not cd:
            raise ValueError("class functions live on different class data")
    raw = _raw_gram(_stack_counts(chis), _stack_counts(psis), cd.sizes, cd.field.p)
    return counts_to_coeffs(raw, cd.field.p)


def inner_product(chi: ClassFunction, psi: ClassFunction) -> CycNumber:
    _same_ambient(chi, psi)
    g = gram([chi], [psi])[0, 0]
    return CycNumber(chi.p, [Fraction(int(c), chi.classes.order) for c in g])


def is_irreducible(chi: ClassFunction) -> bool:
    return inner_product(chi, chi) == CycNumber.rational(chi.p, 1)


def norms(chis: Sequence[ClassFunction]) -> list[CycNumber]:
    if not chis:
        return []
    cd = chis[0].classes
    X = _stack_counts(chis)
    w = cd.sizes
    p = cd.field.p
    raw = np.zeros((len(chis), p), dtype=np.int64)
    for a in range(p):
        for b in range(p):
            raw[:, (a - b) % p] += (X[:, :, a] * X[:, :, b] * w[None, :]).sum(axis=1)
    coeffs = counts_to_coeffs(raw, p)
    return [CycNumber(p, [Fraction(int(c), cd.order) for c in row]) for row in coeffs]


# -- restriction and kernels ---------------------------------------------------


def root_values(chi: ClassFunction, alpha: int) -> list[CycNumber]:
    """chi(x_alpha(t)) for every field code t."""
    cd = chi.classes
    if alpha in cd.ctx.killed:
        return [chi.value(0)] * cd.field.q
    ids = cd.classes_of(group_arith(cd.field).root_elements(alpha))
    return [chi.value(int(i)) for i in ids]


def restrict_to_root_subgroup(chi: ClassFunction, alpha: int) -> list[tuple[FieldElement, Fraction]]:
    """Multiplicities of the characters x_alpha(d) -> phi(s d) in chi restricted to X_alpha."""
    F = chi.field
    vals = root_values(chi, alpha)
    out = []
    for s in F.elements():
        acc = CycNumber.rational(F.p, 0)
        for t, v in zip(F.elements(), vals):
            acc = acc + v * CycNumber.root_of_unity(F.p, -int(F.trace_table[(s * t).code]))
        m = acc.scale(Fraction(1, F.q))
        if m != 0:
            out.append((s, m.to_rational()))
    return out


def kernel_roots(chi: ClassFunction) -> frozenset:
    cd = chi.classes
    deg = chi.values[0]
    GA = group_arith(cd.field)
    out = set(cd.ctx.killed)
    for alpha in cd.ctx.free:
        ids = cd.classes_of(GA.root_elements(alpha))
        if (chi.values[ids] == deg[None, :]).all():
            out.add(alpha)
    return frozenset(out)


# -- midafis ---------------------------------------------------------------------


def midafi_subgroup(F: FieldSpec, alpha: int, ctx=None) -> PatternSubgroup:
    return subgroup_make(F, v_alpha(alpha) - as_ctx(ctx).killed, ctx)


def midafi(alpha: int, s, cd: ClassData) -> ClassFunction:
    F = cd.field
    s = _param(F, s)
    if not s:
        raise ValueError("midafis need s != 0")
    V = midafi_subgroup(F, alpha, cd.ctx)
    lam = linear_character(V, {alpha: s})
    return induce(lam, cd, family=f"midafi{alpha}", label=f"mu[{alpha},{s!r}]")


def midafi_degree(q: int, alpha: int) -> int:
    return q ** len(leg(alpha))


# -- extensions to an inertia group -------------------------------------------


def cyclic_extension_subgroup(F: FieldSpec, base: PatternSubgroup, x0: np.ndarray) -> ExplicitSubgroup:
    """<x0> * base as an explicit subgroup (x0 must normalise base, x0^p in base)."""
    GA = group_arith(F)
    ctx = base.ctx
    A = subgroup_array(base)
    parts, power = [A], np.zeros(N_ROOTS, dtype=np.int64)
    for _ in range(1, F.p):
        power = GA.mul(power, x0, ctx)
        parts.append(GA.mul(power, A, ctx))
    return explicit_subgroup(F, np.concatenate(parts), ctx)


def extend_to_inertia(lam: LinearCharacter, T: ExplicitSubgroup, x0: np.ndarray) -> list[ExplicitSubgroup]:
    """All extensions of lam from its domain A to T = <x0> A, with [T : A] = p.

    mu(x0^e a) = zeta^(e j) lam(a) where zeta^(j p) = lam(x0^p); each candidate is
    checked to be a homomorphism.
    """
    F = lam.field
    p = F.p
    A = lam.domain
    GA = group_arith(F)
    ctx = A.ctx
    if T.order != p * A.order:
        raise ValueError(f"[T : A] = {Fraction(T.order, A.order)}, expected {p}")
    Aelems = subgroup_array(A)
    conj = GA.conj(Aelems, x0, ctx)
    if not np.array_equal(lam.exponents(conj), lam.exponents(Aelems)):
        raise ValueError("lambda is not invariant under x0")
    xp = np.zeros(N_ROOTS, dtype=np.int64)
    for _ in range(p):
        xp = GA.mul(xp, x0, ctx)
    if not lam.contains(xp[None, :])[0]:
        raise ValueError("x0^p is not in the domain")
    if int(lam.exponents(xp[None, :])[0]) != 0:
        raise ValueError("lambda(x0^p) != 1: the extensions are not p-th-root-of-unity valued")

    # decompose every t in T as x0^e a
    elems = T.coords
    exps_e = np.full(len(elems), -1, dtype=np.int64)
    base_exp = np.zeros(len(elems), dtype=np.int64)
    xinv = GA.inv(x0, ctx)
    cur = elems.copy()
    for e in range(p):
        inA = lam.contains(cur) & (exps_e < 0)
        exps_e[inA] = e
        base_exp[inA] = lam.exponents(cur[inA])
        cur = GA.mul(xinv, cur, ctx)
    if (exps_e < 0).any():
        raise ValueError("T is not <x0> A")

    basis_gens = np.concatenate([x0[None, :]] + [GA.root_elements(g, [F.p**i for i in range(F.n)]) for g in sorted(A.effective_roots)])
    out = []
    for j in range(p):
        mu = T.with_character(base_exp + j * exps_e)
        if not mu.check_homomorphism(basis_gens):
            raise AssertionError("extension failed the homomorphism check")
        out.append(mu)
    return out
