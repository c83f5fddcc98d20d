"""The families of irreducible characters of U(q), built constructively.

Each family is fixed by its kernel signature: the roots alpha with
X_alpha inside the kernel.  Every family has a quotient U/N on which its
characters live.  Each recipe induces linear characters from pattern
subgroups of that quotient, or from an inertia subgroup in the even
F_{8,9,10} case.  It keeps the irreducible results with the right
signature, dedupes them by value vectors and inflates them to U.  The
counts in the descriptors are the oracle; nothing is fitted to them.
"""

from __future__ import annotations

import itertools
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .chars import (
    ClassFunction,
    LinearCharacter,
    _exponents,
    cyclic_extension_subgroup,
    extend_to_inertia,
    gram,
    induce,
    induce_batch,
    inflate,
    kernel_roots,
    linear_character,
    midafi,
    tensor_linear,
)
from .classes import ClassData, cached_classes, class_count_polynomial
from .gf import FieldSpec, counts_to_coeffs
from .rootsys import ALL_ROOTS, N_ROOTS
from .ugroup import as_ctx, group_arith, subgroup_make

log = logging.getLogger(__name__)


# -- descriptors -----------------------------------------------------------------


@dataclass(frozen=True)
class Degree:
    """q^exp / div."""

    exp: int
    div: int = 1

    def at(self, q: int) -> int:
        d, r = divmod(q**self.exp, self.div)
        if r:
            raise ValueError(f"{self} is not an integer at q = {q}")
        return d

    def __str__(self):
        base = "1" if self.exp == 0 else ("q" if self.exp == 1 else f"q^{self.exp}")
        return base if self.div == 1 else f"{base}/{self.div}"


@dataclass(frozen=True)
class CountPoly:
    """A count polynomial, kept as a formula string plus its evaluator."""

    formula: str
    fn: Callable[[int], int] = field(compare=False)

    def at(self, q: int) -> int:
        return self.fn(q)

    def __str__(self):
        return self.formula


@dataclass(frozen=True)
class FamilyDescriptor:
    name: str
    required_nonkernel: frozenset
    required_kernel: frozenset
    parity: str  # any | odd | even
    expected: tuple[tuple[Degree, CountPoly], ...]

    def applies(self, q: int) -> bool:
        return self.parity == "any" or self.parity == ("odd" if q % 2 else "even")

    def matches(self, kernel: frozenset) -> bool:
        return self.required_kernel <= kernel and not (self.required_nonkernel & kernel)

    def expected_counts(self, q: int) -> dict[int, int]:
        out: Counter = Counter()
        for deg, poly in self.expected:
            out[deg.at(q)] += poly.at(q)
        return dict(out)


def _fs(*xs) -> frozenset:
    return frozenset(xs)


_UPPER = frozenset(range(8, 13))

FAMILIES: tuple[FamilyDescriptor, ...] = (
    FamilyDescriptor("F12", _fs(12), _fs(), "any",
                     ((Degree(4), CountPoly("q^3(q-1)", lambda q: q**3 * (q - 1))),)),
    FamilyDescriptor("F11", _fs(11), _fs(12), "any",
                     ((Degree(3), CountPoly("q^4(q-1)", lambda q: q**4 * (q - 1))),)),
    FamilyDescriptor("F8,9,10-odd", _fs(8, 9, 10), _fs(11, 12), "odd",
                     ((Degree(3), CountPoly("q(q-1)^3", lambda q: q * (q - 1) ** 3)),)),
    FamilyDescriptor("F8,9,10-even", _fs(8, 9, 10), _fs(11, 12), "even",
                     ((Degree(3), CountPoly("(q-1)^3", lambda q: (q - 1) ** 3)),
                      (Degree(3, 2), CountPoly("4(q-1)^4", lambda q: 4 * (q - 1) ** 4)))),
) + tuple(
    FamilyDescriptor(name, frozenset(non), frozenset(ker), "any",
                     ((Degree(3), CountPoly("(q-1)^3", lambda q: (q - 1) ** 3)),
                      (Degree(2), CountPoly("q^2(q-1)^2", lambda q: q**2 * (q - 1) ** 2))))
    for name, non, ker in (
        ("F8,9", (8, 9), (10, 11, 12)),
        ("F8,10", (8, 10), (9, 11, 12)),
        ("F9,10", (9, 10), (8, 11, 12)),
    )
) + tuple(
    FamilyDescriptor(f"F{a}", _fs(a), _UPPER - {a}, "any",
                     ((Degree(3), CountPoly("(q-1)^2", lambda q: (q - 1) ** 2)),
                      (Degree(2), CountPoly("q^2(q-1)", lambda q: q**2 * (q - 1)))))
    for a in (8, 9, 10)
) + (
    FamilyDescriptor("F5,6,7", _fs(5, 6, 7), _UPPER, "any",
                     ((Degree(1), CountPoly("q^2(q-1)^3", lambda q: q**2 * (q - 1) ** 3)),)),
) + tuple(
    FamilyDescriptor(f"F{a},{b}", _fs(a, b), _UPPER | ({5, 6, 7} - {a, b}), "any",
                     ((Degree(1), CountPoly("q^2(q-1)^2", lambda q: q**2 * (q - 1) ** 2)),))
    for a, b in ((5, 6), (5, 7), (6, 7))
) + tuple(
    FamilyDescriptor(f"F{a}", _fs(a), _UPPER | ({5, 6, 7} - {a}), "any",
                     ((Degree(1), CountPoly("q^2(q-1)", lambda q: q**2 * (q - 1))),))
    for a in (5, 6, 7)
) + (
    FamilyDescriptor("Flin", _fs(), _UPPER | {5, 6, 7}, "any",
                     ((Degree(0), CountPoly("q^4", lambda q: q**4)),)),
)

_BY_NAME = {d.name: d for d in FAMILIES}


def family_names() -> list[str]:
    return [d.name for d in FAMILIES]


def descriptor(name: str) -> FamilyDescriptor:
    key = name.replace("_", "").replace("{", "").replace("}", "").replace(" ", "").replace("^", "-")
    if not key.startswith("F"):
        key = "F" + key
    for d in FAMILIES:
        if key in (d.name, d.name.replace(",", "")):
            return d
    raise KeyError(f"unknown family {name!r}; known: {', '.join(family_names())}")


def applicable_families(q: int) -> list[FamilyDescriptor]:
    return [d for d in FAMILIES if d.applies(q)]


def classify(kernel: frozenset, q: int) -> list[str]:
    """Names of the applicable descriptors whose kernel conditions hold."""
    return [d.name for d in applicable_families(q) if d.matches(frozenset(kernel))]


# Table 4: multiplicities of each degree as polynomials in v = q - 1
TABLE4: dict[str, tuple[tuple[Degree, CountPoly], ...]] = {
    "odd": (
        (Degree(4), CountPoly("v^4+3v^3+3v^2+v", lambda q: _v(q, 0, 1, 3, 3, 1))),
        (Degree(3), CountPoly("v^5+5v^4+10v^3+7v^2+v", lambda q: _v(q, 0, 1, 7, 10, 5, 1))),
        (Degree(2), CountPoly("3v^4+9v^3+9v^2+3v", lambda q: _v(q, 0, 3, 9, 9, 3))),
        (Degree(1), CountPoly("v^5+5v^4+10v^3+9v^2+3v", lambda q: _v(q, 0, 3, 9, 10, 5, 1))),
        (Degree(0), CountPoly("v^4+4v^3+6v^2+4v+1", lambda q: _v(q, 1, 4, 6, 4, 1))),
    ),
    "even": (
        (Degree(4), CountPoly("v^4+3v^3+3v^2+v", lambda q: _v(q, 0, 1, 3, 3, 1))),
        (Degree(3), CountPoly("v^5+4v^4+10v^3+7v^2+v", lambda q: _v(q, 0, 1, 7, 10, 4, 1))),
        (Degree(3, 2), CountPoly("4v^4", lambda q: _v(q, 0, 0, 0, 0, 4))),
        (Degree(2), CountPoly("3v^4+9v^3+9v^2+3v", lambda q: _v(q, 0, 3, 9, 9, 3))),
        (Degree(1), CountPoly("v^5+5v^4+10v^3+9v^2+3v", lambda q: _v(q, 0, 3, 9, 10, 5, 1))),
        (Degree(0), CountPoly("v^4+4v^3+6v^2+4v+1", lambda q: _v(q, 1, 4, 6, 4, 1))),
    ),
}


def _v(q: int, *coeffs: int) -> int:
    v = q - 1
    return sum(c * v**k for k, c in enumerate(coeffs))


def table4_expected(q: int) -> dict[int, int]:
    out: Counter = Counter()
    for deg, poly in TABLE4["odd" if q % 2 else "even"]:
        out[deg.at(q)] += poly.at(q)
    return dict(out)


# -- recipes ---------------------------------------------------------------------


@dataclass(frozen=True)
class InduceRecipe:
    """Induce linear characters of the pattern subgroup `roots` of U/killed.

    Parameters run over every linear character with s_gamma != 0 for gamma in
    `nonzero`; parameters on derived roots are forced to zero.
    """

    killed: frozenset
    roots: frozenset
    nonzero: frozenset


def _recipes(name: str) -> list[InduceRecipe]:
    R = InduceRecipe
    f = frozenset
    table = {
        "F11": [R(f({12}), f({3, 5, 6, 7, 8, 9, 10, 11}), f({11}))],
        "F8,9,10-odd": [R(f({11, 12}), f({3, 5, 6, 7, 8, 9, 10}), f({8, 9, 10}))],
        "F8,9,10-even": [R(f({11, 12}), f({3, 5, 6, 7, 8, 9, 10}), f({8, 9, 10}))],
        "F8,9": [R(f({10, 11, 12}), f({3, 5, 6, 7, 8, 9}), f({8, 9})),
                 R(f({10, 11, 12}), ALL_ROOTS - {1, 5}, f({8, 9}))],
        "F8,10": [R(f({9, 11, 12}), f({3, 5, 6, 7, 8, 10}), f({8, 10})),
                  R(f({9, 11, 12}), ALL_ROOTS - {2, 6}, f({8, 10}))],
        "F9,10": [R(f({8, 11, 12}), f({3, 5, 6, 7, 9, 10}), f({9, 10})),
                  R(f({8, 11, 12}), ALL_ROOTS - {4, 7}, f({9, 10}))],
        "F8": [R(_UPPER - {8}, f({3, 5, 6, 7, 8}), f({8})),
               R(_UPPER - {8}, ALL_ROOTS - {1, 2}, f({8}))],
        "F9": [R(_UPPER - {9}, f({3, 5, 6, 7, 9}), f({9})),
               R(_UPPER - {9}, ALL_ROOTS - {1, 4}, f({9}))],
        "F10": [R(_UPPER - {10}, f({3, 5, 6, 7, 10}), f({10})),
                R(_UPPER - {10}, ALL_ROOTS - {2, 4}, f({10}))],
        "F5,6,7": [R(_UPPER, f({1, 2, 4, 5, 6, 7}), f({5, 6, 7}))],
        "F5,6": [R(_UPPER | {7}, f({1, 2, 4, 5, 6}), f({5, 6}))],
        "F5,7": [R(_UPPER | {6}, f({1, 2, 4, 5, 7}), f({5, 7}))],
        "F6,7": [R(_UPPER | {5}, f({1, 2, 4, 6, 7}), f({6, 7}))],
        "F5": [R(_UPPER | {6, 7}, f({2, 3, 4, 5}), f({5}))],
        "F6": [R(_UPPER | {5, 7}, f({1, 3, 4, 6}), f({6}))],
        "F7": [R(_UPPER | {5, 6}, f({1, 2, 3, 7}), f({7}))],
        "Flin": [R(_UPPER | {5, 6, 7}, f({1, 2, 3, 4}), f())],
    }
    return table.get(name, [])


def param_grid(F: FieldSpec, roots: Sequence[int], nonzero: frozenset) -> np.ndarray:
    axes = [np.arange(1 if g in nonzero else 0, F.q, dtype=np.int64) for g in roots]
    if not axes:
        return np.zeros((1, 0), dtype=np.int64)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def orbit_representatives(P, roots: Sequence[int], grid: np.ndarray) -> np.ndarray:
    """One parameter row per U-orbit on Irr(A), for an abelian normal pattern subgroup A.

    Conjugation by the coordinate transversal T acts additively on A; since
    U = A T and A acts trivially on Irr(A), orbits under T are U-orbits, and
    characters in one orbit induce to the same character.
    """
    F = P.field
    GA = group_arith(F)
    ctx = P.ctx
    p, n = F.p, F.n
    C = F.coeff_table
    cols = [g - 1 for g in roots]
    basis = np.concatenate([GA.root_elements(g, [p**i for i in range(n)]) for g in roots])
    outside = [i - 1 for i in ctx.free if i not in P.roots]
    T = GA.all_elements(P.transversal_roots())
    digits = np.concatenate([C[grid[:, j]] @ F.trace_form % p for j in range(len(roots))], axis=1)
    weights = p ** np.arange(digits.shape[1], dtype=np.int64)
    best = np.full(len(grid), np.iinfo(np.int64).max)
    for t in T:
        Y = GA.mul(GA.mul(GA.inv(t, ctx), basis, ctx), t, ctx)
        if Y[:, outside].any():
            raise ValueError("inducing subgroup is not normal")
        M = np.concatenate([C[Y[:, c]] for c in cols], axis=1).T
        np.minimum(best, ((digits @ M) % p) @ weights, out=best)
    _, first = np.unique(best, return_index=True)
    return grid[np.sort(first)]


def batch_norms(values: np.ndarray, cd: ClassData) -> np.ndarray:
    """|G| (chi, chi) for stacked coordinate arrays (B, c, p-1); returns (B, p-1)."""
    p = cd.field.p
    B, c = values.shape[:2]
    X = np.zeros((B, c, p), dtype=np.int64)
    X[:, :, : values.shape[2]] = values
    if p == 2:
        X[:, :, 1] = 0
    raw = np.zeros((B, p), dtype=np.int64)
    for a in range(p):
        Xa = X[:, :, a] * cd.sizes[None, :]
        for b in range(p):
            raw[:, (a - b) % p] += np.einsum("bc,bc->b", Xa, X[:, :, b])
    return counts_to_coeffs(raw, p)


def _unit_norm(cd: ClassData) -> np.ndarray:
    out = np.zeros(max(cd.field.p - 1, 1), dtype=np.int64)
    out[0] = cd.order
    return out


def _kernel_ids(cd: ClassData) -> dict[int, np.ndarray]:
    GA = group_arith(cd.field)
    return {a: cd.classes_of(GA.root_elements(a)) for a in cd.ctx.free}


def _batch_kernels(values: np.ndarray, cd: ClassData) -> list[frozenset]:
    ids = _kernel_ids(cd)
    deg = values[:, 0, :]
    ker = [set(cd.ctx.killed) for _ in range(len(values))]
    for a, rows in ids.items():
        hit = (values[:, rows, :] == deg[:, None, :]).all(axis=(1, 2))
        for b in np.flatnonzero(hit):
            ker[b].add(a)
    return [frozenset(k) for k in ker]


def run_recipe(recipe: InduceRecipe, desc: FamilyDescriptor, F: FieldSpec, allow_large: bool = False,
               chunk: int = 256) -> list[ClassFunction]:
    """Induce, keep norm-1 results with the family's kernel signature, dedupe."""
    cdq = cached_classes(F, recipe.killed, allow_large=allow_large)
    P = subgroup_make(F, recipe.roots - recipe.killed, recipe.killed)
    roots = sorted(P.effective_roots - P.derived_roots())
    grid = param_grid(F, roots, recipe.nonzero)
    if not P.derived_roots():
        grid = orbit_representatives(P, roots, grid)
    unit = _unit_norm(cdq)
    seen: dict[bytes, ClassFunction] = {}
    for lo in range(0, len(grid), chunk):
        vals = induce_batch(P, roots, grid[lo : lo + chunk], cdq, chunk=chunk)
        irr = (batch_norms(vals, cdq) == unit[None, :]).all(axis=1)
        vals = vals[irr]
        for v, ker in zip(vals, _batch_kernels(vals, cdq)):
            if desc.matches(ker):
                key = v.tobytes()
                if key not in seen:
                    seen[key] = ClassFunction(cdq, v.copy(), family=desc.name)
    return list(seen.values())


# -- special constructions -------------------------------------------------------


def build_f12(F: FieldSpec, cd: ClassData) -> list[ClassFunction]:
    """mu_{12,a} tensored with the linear characters of U/H_12 = X_1 X_2 X_4."""
    out = []
    U = subgroup_make(F, ALL_ROOTS)
    for a in F.nonzero():
        mu = midafi(12, a, cd)
        for b1, b2, b4 in itertools.product(F.elements(), repeat=3):
            beta = linear_character(U, {1: b1, 2: b2, 4: b4})
            chi = tensor_linear(mu, beta)
            chi.family = "F12"
            chi.label = f"chi[12,{a!r},{b1!r},{b2!r},{b4!r}]"
            out.append(chi)
    return out


def first_outside_quadric(F: FieldSpec, c: int, d: int, e: int, f: int) -> int:
    """First field code outside {d e f z^2 + c d z : z in F_q} (even q, cdef != 0)."""
    z = np.arange(F.q, dtype=np.int64)
    def_ = F.vmul(F.vmul(d, e), f)
    cd_ = F.vmul(c, d)
    image = set(F.vadd(F.vmul(def_, F.vmul(z, z)), F.vmul(cd_, z)).tolist())
    if len(image) * 2 != F.q:
        raise AssertionError("the quadric image is not an index-2 subgroup")
    return next(t for t in range(F.q) if t not in image)


KBAR = (1, 2, 4)
ABAR = (3, 5, 6, 7, 8, 9, 10)
CTX8910 = frozenset({11, 12})


def _kbar_elements(F: FieldSpec) -> np.ndarray:
    return group_arith(F).all_elements(KBAR)


def stabilizer_in_kbar(F: FieldSpec, params: dict[int, int]) -> np.ndarray:
    """Elements k of K-bar with lambda(k a k^-1) = lambda(a) for every a in A-bar."""
    GA = group_arith(F)
    ctx = as_ctx(CTX8910)
    K = _kbar_elements(F)
    basis = np.concatenate([GA.root_elements(g, [F.p**i for i in range(F.n)]) for g in ABAR])
    roots = sorted(params)
    S = np.array([[params[g] for g in roots]], dtype=np.int64)
    base = _exponents(F, roots, S, basis)[0]
    keep = []
    for k in K:
        Y = GA.mul(GA.mul(k, basis, ctx), GA.inv(k, ctx), ctx)
        if np.array_equal(_exponents(F, roots, S, Y)[0], base):
            keep.append(k)
    return np.array(keep, dtype=np.int64)


def build_f8910_even_half(F: FieldSpec, cdq: ClassData) -> list[ClassFunction]:
    """Degree q^3/2: extend lambda_{x,0,0,c,d,e,f} to its inertia group and induce."""
    if F.p != 2:
        raise ValueError("only in characteristic 2")
    GA = group_arith(F)
    ctx = as_ctx(CTX8910)
    A = subgroup_make(F, ABAR, CTX8910)
    K = _kbar_elements(F)
    out = []
    for c, d, e, f in itertools.product(range(1, F.q), repeat=4):
        t = first_outside_quadric(F, c, d, e, f)
        for x in (0, t):
            params = {3: x, 7: c, 8: d, 9: e, 10: f}
            lam = linear_character(A, params)
            stab = stabilizer_in_kbar(F, params)
            if len(stab) != 2:
                raise AssertionError(f"stabilizer of {params} has order {len(stab)}")
            x0 = stab[stab.any(axis=1)][0]
            T = cyclic_extension_subgroup(F, A, x0)
            # right cosets T k, k in K-bar modulo <x0>
            covered: set[int] = set()
            reps = []
            for k in K:
                code = int(GA.pack(k[None, :], ctx)[0])
                if code in covered:
                    continue
                reps.append(k)
                covered.add(code)
                covered.add(int(GA.pack(GA.mul(x0, k, ctx)[None, :], ctx)[0]))
            reps = np.array(reps, dtype=np.int64)
            for j, mu in enumerate(extend_to_inertia(lam, T, x0)):
                chi = induce(mu, cdq, transversal=reps, family="F8,9,10-even")
                chi.label = f"psi[x={x},c={c},d={d},e={e},f={f},ext={j}]"
                out.append(chi)
    return out


# -- reports ---------------------------------------------------------------------


@dataclass
class FamilyReport:
    descriptor: FamilyDescriptor
    q: int
    characters: list[ClassFunction]
    seconds: float = 0.0
    flags: dict[str, bool] = field(default_factory=dict)

    @property
    def counts_by_degree(self) -> dict[int, int]:
        return dict(sorted(Counter(c.degree for c in self.characters).items()))

    @property
    def expected(self) -> dict[int, int]:
        return dict(sorted(self.descriptor.expected_counts(self.q).items()))

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def summary(self) -> dict:
        return {
            "family": self.descriptor.name,
            "expected": {str(k): v for k, v in self.expected.items()},
            "computed": {str(k): v for k, v in self.counts_by_degree.items()},
            "flags": self.flags,
            "seconds": round(self.seconds, 3),
        }


def build_family(desc: FamilyDescriptor | str, F: FieldSpec, cd: ClassData | None = None,
                 allow_large: bool = False) -> FamilyReport:
    """Construct one family, inflated to U, and check it against the descriptor."""
    if isinstance(desc, str):
        desc = descriptor(desc)
    q = F.q
    if not desc.applies(q):
        raise ValueError(f"{desc.name} does not exist for q = {q}")
    cd = cd or cached_classes(F, allow_large=allow_large)
    t0 = time.perf_counter()
    if desc.name == "F12":
        chars = build_f12(F, cd)
    else:
        local: list[ClassFunction] = []
        for recipe in _recipes(desc.name):
            local.extend(run_recipe(recipe, desc, F, allow_large=allow_large))
        if desc.name == "F8,9,10-even":
            local.extend(build_f8910_even_half(F, cached_classes(F, CTX8910, allow_large=allow_large)))
        chars = []
        keys = set()
        for chi in local:
            key = chi.key() + chi.classes.ctx.killed.__repr__().encode()
            if key in keys:
                continue
            keys.add(key)
            chars.append(inflate(chi, cd))
    report = FamilyReport(desc, q, chars, time.perf_counter() - t0)
    report.flags = check_family(report)
    log.info("%s: %s in %.1fs", desc.name, report.counts_by_degree, report.seconds)
    return report


def check_family(report: FamilyReport) -> dict[str, bool]:
    chars = report.characters
    flags = {"counts_match": report.counts_by_degree == report.expected}
    keys = {c.key() for c in chars}
    flags["distinct"] = len(keys) == len(chars)
    flags["signature"] = all(report.descriptor.matches(c.kernel_roots) for c in chars)
    if chars:
        G = gram(chars)
        cd = chars[0].classes
        eye = np.eye(len(chars), dtype=np.int64) * cd.order
        flags["orthonormal"] = bool(np.array_equal(G[:, :, 0], eye) and not G[:, :, 1:].any())
    return flags


@dataclass
class TableReport:
    q: int
    classes: ClassData
    families: list[FamilyReport]
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, object] = field(default_factory=dict)

    @property
    def characters(self) -> list[ClassFunction]:
        return [c for f in self.families for c in f.characters]

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def degree_multiplicities(self) -> dict[int, int]:
        return dict(sorted(Counter(c.degree for c in self.characters).items()))


def build_all(F: FieldSpec, cd: ClassData | None = None, allow_large: bool = False,
              strict: bool = True) -> TableReport:
    """All applicable families plus the completeness certificate.

    With strict=True a failed check raises AssertionError naming the family.
    """
    q = F.q
    if q > 3 and not allow_large:
        raise ValueError("the full table is verified at q = 2, 3; pass allow_large=True for q = 4")
    cd = cd or cached_classes(F, allow_large=allow_large)
    fams = [build_family(d, F, cd, allow_large=allow_large) for d in applicable_families(q)]
    report = TableReport(q, cd, fams)
    chars = report.characters
    degs = report.degree_multiplicities()
    checks = {f"family {f.descriptor.name}": f.ok for f in fams}
    checks["distinct"] = len({c.key() for c in chars}) == len(chars)
    G = gram(chars)
    eye = np.eye(len(chars), dtype=np.int64) * cd.order
    checks["orthonormal"] = bool(np.array_equal(G[:, :, 0], eye) and not G[:, :, 1:].any())
    checks["count = class count"] = len(chars) == cd.count
    checks["count = class polynomial"] = len(chars) == class_count_polynomial(q)
    checks["sum of squared degrees = q^12"] = sum(d * d for d in (c.degree for c in chars)) == q**12
    checks["Table 4 multiplicities"] = degs == dict(sorted(table4_expected(q).items()))
    signatures = [classify(c.kernel_roots, q) for c in chars]
    checks["kernel signatures partition"] = all(
        len(s) == 1 and s[0] == c.family for s, c in zip(signatures, chars)
    )
    report.checks = checks
    report.details = {
        "count": len(chars),
        "class_count": cd.count,
        "degrees": degs,
        "table4": dict(sorted(table4_expected(q).items())),
    }
    if strict:
        bad = [k for k, v in checks.items() if not v]
        if bad:
            raise AssertionError(f"build_all(q={q}) failed: {', '.join(bad)}")
    return report


# -- K-bar action on Irr(A-bar) ---------------------------------------------------


@dataclass
class KOrbitReport:
    q: int
    parity: str
    n_characters: int
    n_stratum: int
    n_orbits: int
    stabilizer_histogram: dict[int, int]
    representatives: int
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "parity": self.parity,
            "characters": self.n_characters,
            "stratum": self.n_stratum,
            "orbits": self.n_orbits,
            "stabilizers": {str(k): v for k, v in sorted(self.stabilizer_histogram.items())},
            "representatives": self.representatives,
            "checks": self.checks,
        }


def _digits(F: FieldSpec, S: np.ndarray) -> np.ndarray:
    """F_p coordinates of the functional a -> Tr(sum s_gamma a_gamma), shape (N, 7n)."""
    C = F.coeff_table
    return np.concatenate([C[S[:, j]] @ F.trace_form % F.p for j in range(S.shape[1])], axis=1)


def kbar_action_matrices(F: FieldSpec) -> tuple[np.ndarray, np.ndarray]:
    """K-bar elements and, for each, the F_p matrix of a -> k a k^-1 on A-bar.

    A-bar is elementary abelian, so conjugation is additive; the matrix acts on
    the F_p coordinates of (d_3, d_5, ..., d_10).  Additivity is checked.
    """
    GA = group_arith(F)
    ctx = as_ctx(CTX8910)
    K = _kbar_elements(F)
    n, p = F.n, F.p
    C = F.coeff_table
    basis = np.concatenate([GA.root_elements(g, [p**i for i in range(n)]) for g in ABAR])
    cols = [i - 1 for i in ABAR]
    mats = np.empty((len(K), 7 * n, 7 * n), dtype=np.int64)
    rng = np.random.default_rng(0)
    probe = np.zeros((16, N_ROOTS), dtype=np.int64)
    probe[:, cols] = rng.integers(0, F.q, size=(16, 7))
    probe_vec = np.concatenate([C[probe[:, c]] for c in cols], axis=1)
    for idx, k in enumerate(K):
        kinv = GA.inv(k, ctx)
        Y = GA.mul(GA.mul(k, basis, ctx), kinv, ctx)
        M = np.concatenate([C[Y[:, c]] for c in cols], axis=1).T  # columns are images of basis vectors
        Yp = GA.mul(GA.mul(k, probe, ctx), kinv, ctx)
        if not np.array_equal(np.concatenate([C[Yp[:, c]] for c in cols], axis=1), (probe_vec @ M.T) % p):
            raise AssertionError("conjugation on A-bar is not additive")
        mats[idx] = M
    return K, mats


def k_orbit_analysis(F: FieldSpec, limit: int = 4) -> KOrbitReport:
    """Brute-force K-bar acting on the q^7 linear characters of A-bar."""
    q, p = F.q, F.p
    if q > limit:
        raise ValueError(f"q = {q} exceeds the orbit-analysis guard {limit}")
    parity = "odd" if q % 2 else "even"
    K, mats = kbar_action_matrices(F)
    S = param_grid(F, ABAR, frozenset())  # every character, params in ABAR order
    D = _digits(F, S)
    weights = p ** np.arange(D.shape[1], dtype=np.int64)
    index = np.empty(p ** D.shape[1], dtype=np.int64)
    index[D @ weights] = np.arange(len(S))
    # lambda^k(a) = lambda(k a k^-1):  digits -> digits @ M
    images = np.stack([index[((D @ M) % p) @ weights] for M in mats], axis=1)  # (q^7, |K|)
    orbit_id = images.min(axis=1)
    stab = (images == np.arange(len(S))[:, None]).sum(axis=1)
    stratum = (S[:, 4] != 0) & (S[:, 5] != 0) & (S[:, 6] != 0)
    x, a, b, c = S[:, 0], S[:, 1], S[:, 2], S[:, 3]
    checks: dict[str, bool] = {}
    checks["orbit-stabilizer"] = bool(
        all(len(np.unique(images[i])) * stab[i] == len(K) for i in np.flatnonzero(stratum)[:: max(1, stratum.sum() // 500)])
    )
    n_orbits = len(np.unique(orbit_id[stratum]))
    if parity == "odd":
        reps = stratum & (a == 0) & (b == 0) & (c == 0)
        checks["representatives stabilizers trivial"] = bool((stab[reps] == 1).all())
        checks["stratum stabilizers trivial"] = bool((stab[stratum] == 1).all())
        checks["orbit count = q(q-1)^3"] = n_orbits == q * (q - 1) ** 3
    else:
        deg = stratum & (a == 0) & (b == 0) & (c == 0) & (x == 0)
        gen = np.zeros(len(S), dtype=bool)
        for i in np.flatnonzero(stratum & (a == 0) & (b == 0) & (c != 0)):
            t = first_outside_quadric(F, *(int(v) for v in S[i, 3:7]))
            gen[i] = int(x[i]) in (0, t)
        reps = deg | gen
        checks["degenerate stabilizers trivial"] = bool((stab[deg] == 1).all())
        checks["nondegenerate stabilizers of order 2"] = bool((stab[gen] == 2).all())
        checks["orbit count = (q-1)^3 + 2(q-1)^4"] = n_orbits == (q - 1) ** 3 + 2 * (q - 1) ** 4
    rep_orbits = orbit_id[reps]
    checks["representatives in distinct orbits"] = len(np.unique(rep_orbits)) == int(reps.sum())
    checks["representatives meet every orbit"] = set(rep_orbits.tolist()) == set(orbit_id[stratum].tolist())
    checks["conjugation formula"] = verify_conjugation_formula(F)
    hist = Counter(stab[stratum].tolist())
    return KOrbitReport(q, parity, len(S), int(stratum.sum()), n_orbits, dict(hist), int(reps.sum()), checks)


def conjugation_formula(F: FieldSpec, r, s, t, D: np.ndarray) -> np.ndarray:
    """Closed form of x_1(r) x_2(s) x_4(t) . a . (x_1(r) x_2(s) x_4(t))^-1 on A-bar.

    D holds coordinates (d_3, d_5, ..., d_10); the result is in the same layout.
    """
    add, mul, neg = F.vadd, F.vmul, F.vneg
    d3, d5, d6, d7, d8, d9, d10 = (D[..., i] for i in range(7))
    rs, rt, st = mul(r, s), mul(r, t), mul(s, t)
    return np.stack([
        d3,
        add(d5, mul(r, d3)),
        add(d6, mul(s, d3)),
        add(d7, neg(mul(t, d3))),
        add(add(add(d8, neg(mul(s, d5))), neg(mul(r, d6))), neg(mul(rs, d3))),
        add(add(add(d9, neg(mul(t, d5))), mul(r, d7)), neg(mul(rt, d3))),
        add(add(add(d10, neg(mul(t, d6))), mul(s, d7)), neg(mul(st, d3))),
    ], axis=-1)


def verify_conjugation_formula(F: FieldSpec, sample: int | None = None) -> bool:
    """Left conjugation h a h^-1 against the closed form, exhaustively or on a sample."""
    GA = group_arith(F)
    ctx = as_ctx(CTX8910)
    cols = [i - 1 for i in ABAR]
    A = GA.all_elements(ABAR)
    if sample is not None and sample < len(A):
        A = A[np.random.default_rng(0).choice(len(A), sample, replace=False)]
    for h in _kbar_elements(F):
        r, s, t = (int(h[i - 1]) for i in KBAR)
        Y = GA.mul(GA.mul(h, A, ctx), GA.inv(h, ctx), ctx)
        if not np.array_equal(Y[:, cols], conjugation_formula(F, r, s, t, A[:, cols])):
            return False
    return True
