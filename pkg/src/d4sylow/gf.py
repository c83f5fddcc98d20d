"""Exact arithmetic in GF(p^n) and in the p-th cyclotomic field.

Field elements are stored as integer codes: the element
c_0 + c_1 x + ... + c_{n-1} x^{n-1} has code c_0 + c_1 p + ... + c_{n-1} p^{n-1}.
The prime subfield therefore has codes 0..p-1 matching the integers mod p.
All character values live in Q(zeta_p); a value zeta_p^k is often carried
around as the bare exponent k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# Conway polynomials, constant term first.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (7, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
}


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    return all(m % d for d in range(2, int(m**0.5) + 1))


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, n) with q = p**n, or raise ValueError."""
    for p in range(2, q + 1):
        if q % p == 0:
            n, r = 0, q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1 or not is_prime(p):
                break
            return p, n
    raise ValueError(f"{q} is not a prime power")


def _polymod(a: list[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo monic b over GF(p)."""
    a = list(a)
    db = len(b) - 1
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - c * b[j]) % p
    out = [c % p for c in a[:db]]
    return out + [0] * (db - len(out))


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Exhaustive check: no monic factor of degree 1..deg//2."""
    n = len(modulus) - 1
    if n < 1 or modulus[-1] % p != 1:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not any(_polymod(list(modulus), list(low) + [1], p)):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    n: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if len(self.modulus) != self.n + 1:
            raise ValueError(f"modulus degree {len(self.modulus) - 1} != n = {self.n}")
        if any(not 0 <= c < self.p for c in self.modulus):
            raise ValueError("modulus coefficients must lie in [0, p)")
        if not is_irreducible(self.modulus, self.p):
            raise ValueError(f"modulus {list(self.modulus)} is not irreducible over GF({self.p})")

    @property
    def q(self) -> int:
        return self.p**self.n

    def __repr__(self):
        return f"GF({self.q})"

    def to_json(self) -> dict:
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> FieldSpec:
        return cls(d["p"], d["n"], tuple(d["modulus"]))

    # -- code <-> coefficient vectors

    def coeffs_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.n):
            code, c = divmod(code, self.p)
            out.append(c)
        return tuple(out)

    def code_of(self, coeffs: Iterable[int]) -> int:
        code = 0
        for i, c in enumerate(coeffs):
            code += (c % self.p) * self.p**i
        return code

    @cached_property
    def coeff_table(self) -> np.ndarray:
        """(q, n) array of coefficient vectors."""
        return np.array([self.coeffs_of(c) for c in range(self.q)], dtype=np.int64).reshape(self.q, self.n)

    # -- arithmetic tables

    @cached_property
    def add_table(self) -> np.ndarray:
        C = self.coeff_table
        s = (C[:, None, :] + C[None, :, :]) % self.p
        return (s * self.p ** np.arange(self.n)).sum(-1)

    @cached_property
    def mul_table(self) -> np.ndarray:
        q, p, n = self.q, self.p, self.n
        T = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            ca = self.coeffs_of(a)
            for b in range(a, q):
                cb = self.coeffs_of(b)
                prod = [0] * (2 * n - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] += x * y
                T[a, b] = T[b, a] = self.code_of(_polymod(prod, self.modulus, p))
        return T

    @cached_property
    def neg_table(self) -> np.ndarray:
        return (-self.coeff_table % self.p * self.p ** np.arange(self.n)).sum(-1)

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        M = self.mul_table
        for a in range(1, self.q):
            inv[a] = int(np.flatnonzero(M[a] == 1)[0])
        return inv

    @cached_property
    def trace_table(self) -> np.ndarray:
        """Tr(a) as an integer in [0, p) for every code a."""
        M = self.mul_table
        out = np.zeros(self.q, dtype=np.int64)
        for a in range(self.q):
            acc, power = 0, a
            for _ in range(self.n):
                acc = self.add_table[acc, power]
                power = _frobenius(M, power, self.p)
            out[a] = acc
        if np.any(out >= self.p):
            raise AssertionError("trace left the prime field")
        return out

    @cached_property
    def trace_form(self) -> np.ndarray:
        """Matrix of (u, v) -> Tr(u v) on the power basis, entries in [0, p)."""
        basis = [self.p**i for i in range(self.n)]
        return np.array([[self.trace_table[self.mul_table[u, v]] for v in basis] for u in basis], dtype=np.int64)

    # -- vectorised ops on code arrays (numpy broadcasting)

    def vadd(self, a, b):
        if self.n == 1:
            return (a + b) % self.p
        if self.p == 2:
            return np.bitwise_xor(a, b)
        return self.add_table[a, b]

    def vmul(self, a, b):
        if self.n == 1:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def vneg(self, a):
        if self.n == 1:
            return (-a) % self.p
        return self.neg_table[a]

    def embed_int(self, k: int) -> int:
        return k % self.p

    # -- element constructors

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise ValueError("element of a different field")
            return value
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.code_of(value))
        return FieldElement(self, int(value) % self.p)

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for {self}")
        return FieldElement(self, code)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.q)]

    def nonzero(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(1, self.q)]

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)


def _frobenius(M: np.ndarray, a: int, p: int) -> int:
    r = 1
    for _ in range(p):
        r = int(M[r, a])
    return r


def field_make(p: int, n: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    if modulus is None:
        if (p, n) not in DEFAULT_MODULI:
            if not is_prime(p):
                raise ValueError(f"p = {p} is not prime")
            raise ValueError(f"no default modulus for q = {p}^{n}; pass one explicitly")
        modulus = DEFAULT_MODULI[(p, n)]
    return FieldSpec(p, n, tuple(int(c) for c in modulus))


def field_from_q(q: int) -> FieldSpec:
    p, n = factor_prime_power(q)
    return field_make(p, n)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    code: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs_of(self.code)

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"mixed-field operands {self.field} and {other.field}")
            return other.code
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, int(self.field.add_table[self.code, b]))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.code]))

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self + FieldElement(self.field, int(self.field.neg_table[b]))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, int(self.field.mul_table[self.code, b]))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.code == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self.field))
        return FieldElement(self.field, int(self.field.inv_table[self.code]))

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return self * FieldElement(self.field, b).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.field.one
        for _ in range(e):
            r = r * self
        return r

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __repr__(self):
        if self.field.n == 1:
            return str(self.code)
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
                terms.append(mono if c == 1 and i else f"{c}" if i == 0 else f"{c}{mono}")
        return "+".join(reversed(terms)) or "0"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown op {op!r}")


def trace(a: FieldElement) -> int:
    return int(a.field.trace_table[a.code])


def phi_exponent(a: FieldElement) -> int:
    """The fixed additive character is phi(a) = zeta_p ** phi_exponent(a)."""
    return trace(a)


def additive_character(s: FieldElement, t: FieldElement) -> CycNumber:
    return CycNumber.root_of_unity(s.field.p, phi_exponent(s * t))


class CycNumber:
    """An element of Q(zeta_p) in the basis 1, zeta, ..., zeta^(p-2).

    For p = 2 this is just a rational number (zeta = -1).
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence):
        if len(coeffs) != max(p - 1, 1):
            raise ValueError(f"expected {max(p - 1, 1)} coefficients for p = {p}")
        self.p = p
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    @classmethod
    def from_counts(cls, p: int, counts: Sequence) -> CycNumber:
        """Value of sum_k counts[k] zeta^k for k in 0..p-1."""
        last = Fraction(counts[p - 1])
        if p == 2:
            return cls(2, [Fraction(counts[0]) - last])
        return cls(p, [Fraction(counts[k]) - last for k in range(p - 1)])

    @classmethod
    def root_of_unity(cls, p: int, k: int) -> CycNumber:
        counts = [0] * p
        counts[k % p] = 1
        return cls.from_counts(p, counts)

    @classmethod
    def rational(cls, p: int, r) -> CycNumber:
        return cls(p, [Fraction(r)] + [Fraction(0)] * (max(p - 1, 1) - 1))

    def _counts(self) -> list[Fraction]:
        if self.p == 2:
            return [self.coeffs[0], Fraction(0)]
        return list(self.coeffs) + [Fraction(0)]

    def _check(self, other) -> CycNumber:
        if isinstance(other, (int, Fraction)):
            return CycNumber.rational(self.p, other)
        if not isinstance(other, CycNumber):
            return NotImplemented
        if other.p != self.p:
            raise ValueError("cyclotomic numbers over different p")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return CycNumber(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.p, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        p = self.p
        a, b = self._counts(), other._counts()
        out = [Fraction(0)] * p
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[(i + j) % p] += x * y
        return CycNumber.from_counts(p, out)

    __rmul__ = __mul__

    def scale(self, r) -> CycNumber:
        r = Fraction(r)
        return CycNumber(self.p, [c * r for c in self.coeffs])

    def conj(self) -> CycNumber:
        c = self._counts()
        p = self.p
        return CycNumber.from_counts(p, [c[(-k) % p] for k in range(p)])

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*z^{k}")
        return " + ".join(terms)


def cyc_arith(a: CycNumber, b: CycNumber | None, op: str):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "conj":
        return a.conj()
    if op == "eq":
        return a == b
    if op == "scale_by_rational":
        return a.scale(b)
    raise ValueError(f"unknown op {op!r}")


def counts_to_coeffs(counts: np.ndarray, p: int) -> np.ndarray:
    """Canonical Z[zeta_p] coefficients from exponent multiplicities.

    counts has shape (..., p); the result has shape (..., max(p - 1, 1)).
    """
    counts = np.asarray(counts, dtype=np.int64)
    last = counts[..., p - 1 : p]
    if p == 2:
        return counts[..., :1] - last
    return counts[..., : p - 1] - last
