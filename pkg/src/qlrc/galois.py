"""Arithmetic in GF(p^m) and univariate polynomials over it.

Elements are plain integers in ``[0, q-1]``.  The base-``p`` digits of an
element, little-endian, are its coefficients in the polynomial basis
``1, x, ..., x^(m-1)`` modulo the field modulus, so ``0`` is zero and ``1`` is
one in every field.

Extension fields of order up to ``2**16`` carry exp/log tables; prime fields
use modular arithmetic directly.  Every scalar method has an array twin
prefixed with ``v`` that accepts numpy integer arrays (broadcasting as usual).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

TABLE_LIMIT = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**m``; raise ``ValueError`` if ``q`` is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    facs = prime_factors(q)
    if len(facs) != 1:
        raise ValueError(f"{q} is not a prime power")
    p = facs[0]
    m = round(math.log(q, p))
    if p**m != q:
        m = next(e for e in range(1, q.bit_length() + 1) if p**e == q)
    return p, m


# -- polynomials over the prime field, coefficient lists little-endian -------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _prime_poly_rem(f: Sequence[int], g: Sequence[int], p: int) -> list[int]:
    r = [x % p for x in f]
    _trim(r)
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    while len(r) - 1 >= dg and r:
        c = r[-1] * inv_lead % p
        shift = len(r) - 1 - dg
        for i, gi in enumerate(g):
            r[shift + i] = (r[shift + i] - c * gi) % p
        _trim(r)
    return r


def is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree ``1..deg//2``."""
    deg = len(modulus) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for low in range(p**d):
            g = [(low // p**i) % p for i in range(d)] + [1]
            if not _prime_poly_rem(modulus, g, p):
                return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for low in range(p**m):
        cand = [(low // p**i) % p for i in range(m)] + [1]
        if is_irreducible_mod_p(cand, p):
            return tuple(cand)
    raise AssertionError(f"no irreducible of degree {m} over GF({p})")  # pragma: no cover


class FieldSpec:
    """A concrete finite field GF(p^m) with a fixed modulus.

    Build instances with :func:`field_make`, which validates the modulus.
    """

    def __init__(self, p: int, m: int, modulus: Sequence[int]):
        self.p = p
        self.m = m
        self.modulus = tuple(int(c) for c in modulus)
        self.q = p**m
        self._pw = np.array([p**i for i in range(m)], dtype=np.int64)
        self._exp = self._log = self._digits = None
        if m > 1 and self.q <= TABLE_LIMIT:
            self._build_tables()

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.m, self.modulus) == (
            other.p,
            other.m,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return f"GF({self.q})" if self.m == 1 else f"GF({self.p}^{self.m})"

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return field_make(int(obj["p"]), int(obj["m"]), obj.get("modulus"))

    @property
    def elements(self) -> range:
        return range(self.q)

    # -- digit helpers ----------------------------------------------------
    def digits(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.m)]

    def from_digits(self, ds: Iterable[int]) -> int:
        return sum((int(d) % self.p) * self.p**i for i, d in enumerate(ds))

    def _mul_direct(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        mod = self.modulus
        if p == 2:
            top = 1 << m
            red = sum(c << i for i, c in enumerate(mod))
            res = 0
            while b:
                if b & 1:
                    res ^= a
                b >>= 1
                a <<= 1
                if a & top:
                    a ^= red
            return res
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for i in range(2 * m - 2, m - 1, -1):
            c = prod[i] % p
            if c:
                for j in range(m + 1):
                    prod[i - m + j] -= c * mod[j]
        return self.from_digits(prod[:m])

    def _pow_direct(self, a: int, e: int) -> int:
        res = 1
        while e:
            if e & 1:
                res = self._mul_direct(res, a)
            a = self._mul_direct(a, a)
            e >>= 1
        return res

    @cached_property
    def primitive_element(self) -> int:
        """Smallest-encoded generator of the multiplicative group."""
        if self.q == 2:
            return 1
        order = self.q - 1
        facs = prime_factors(order)
        for g in range(2, self.q):
            if all(self._pow_direct(g, order // f) != 1 for f in facs):
                return g
        raise AssertionError("multiplicative group has no generator")  # pragma: no cover

    def _build_tables(self):
        q = self.q
        g = self.primitive_element
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._mul_direct(x, g)
        self._exp, self._log = exp, log
        idx = np.arange(q, dtype=np.int64)
        self._digits = np.stack([(idx // self.p**i) % self.p for i in range(self.m)], axis=1)

    # -- scalar arithmetic ------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits(x + y for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_digits(-x for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        if self._exp is not None:
            return int(self._exp[(self._log[a] + self._log[b]) % (self.q - 1)])
        return self._mul_direct(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        if self._exp is not None:
            return int(self._exp[(-self._log[a]) % (self.q - 1)])
        return self._pow_direct(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if e == 0:
            return 1
        if a == 0:
            return 0
        if self.m == 1:
            return pow(a, e, self.p)
        if self._exp is not None:
            return int(self._exp[(int(self._log[a]) * e) % (self.q - 1)])
        return self._pow_direct(a, e)

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        for f in prime_factors(self.q - 1):
            while n % f == 0 and self.pow(a, n // f) == 1:
                n //= f
        return n

    # -- array arithmetic ---------------------------------------------------
    def vadd(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._digits is not None:
            return ((self._digits[a] + self._digits[b]) % self.p) @ self._pw
        return np.vectorize(self.add, otypes=[np.int64])(a, b)

    def vneg(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        if self._digits is not None:
            return ((-self._digits[a]) % self.p) @ self._pw
        return np.vectorize(self.neg, otypes=[np.int64])(a)

    def vsub(self, a, b) -> np.ndarray:
        return self.vadd(a, self.vneg(b))

    def vmul(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.m == 1:
            return (a * b) % self.p
        if self._exp is not None:
            res = self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
            return np.where((a == 0) | (b == 0), 0, res)
        return np.vectorize(self.mul, otypes=[np.int64])(a, b)

    def matmul(self, A, B) -> np.ndarray:
        """Matrix product over the field; ``A`` is (r, s), ``B`` is (s, t)."""
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[-1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        if self.m == 1:
            # entries < p keep the int64 accumulation exact for p < 2**26
            if self.p < (1 << 26):
                return (A @ B) % self.p
            return np.asarray((A.astype(object) @ B.astype(object)) % self.p, dtype=np.int64)
        out = np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
        for j in range(A.shape[-1]):
            out = self.vadd(out, self.vmul(A[..., j, None], B[j]))
        return out


@lru_cache(maxsize=None)
def _cached_field(p: int, m: int, modulus: tuple[int, ...]) -> FieldSpec:
    return FieldSpec(p, m, modulus)


def field_make(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldSpec:
    """Return GF(p^m) with a verified irreducible modulus.

    Without ``modulus`` the smallest monic irreducible of degree ``m`` is used,
    ordering candidates by the integer encoding of their lower coefficients.
    """
    if not is_prime(p):
        raise ValueError(f"characteristic {p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    if modulus is None:
        mod = _smallest_irreducible(p, m)
    else:
        mod = tuple(int(c) % p for c in modulus)
        if len(mod) != m + 1 or mod[-1] != 1:
            raise ValueError(f"modulus must be monic of degree {m}")
        if not is_irreducible_mod_p(mod, p):
            raise ValueError(f"modulus {list(mod)} is reducible over GF({p})")
    return _cached_field(p, m, mod)


def field_for_order(q: int) -> FieldSpec:
    p, m = prime_power(q)
    return field_make(p, m)


def field_ops(field: FieldSpec, a: int, b: int | None = None, kind: str = "add") -> int:
    """Dispatch one scalar operation by name: add, mul, inv, neg, pow."""
    for x in (a,) if b is None or kind == "pow" else (a, b):
        if not 0 <= x < field.q:
            raise ValueError(f"{x} is not an element of {field!r}")
    if kind == "add":
        return field.add(a, b)
    if kind == "mul":
        return field.mul(a, b)
    if kind == "inv":
        return field.inv(a)
    if kind == "neg":
        return field.neg(a)
    if kind == "pow":
        return field.pow(a, b)
    raise ValueError(f"unknown operation {kind!r}")


# -- polynomials -------------------------------------------------------------

class Poly:
    """Univariate polynomial with little-endian coefficients over a field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int] = ()):
        c = [int(x) for x in coeffs]
        for x in c:
            if not 0 <= x < field.q:
                raise ValueError(f"coefficient {x} outside {field!r}")
        self.field = field
        self.coeffs = tuple(_trim(c))

    @classmethod
    def x(cls, field: FieldSpec) -> "Poly":
        return cls(field, [0, 1])

    @classmethod
    def const(cls, field: FieldSpec, c: int) -> "Poly":
        return cls(field, [c])

    @classmethod
    def from_roots(cls, field: FieldSpec, roots: Iterable[int]) -> "Poly":
        out = cls(field, [1])
        for r in roots:
            out = out * cls(field, [field.neg(r), 1])
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __repr__(self):
        if not self.coeffs:
            return "Poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
                coef = str(c) if (c != 1 or i == 0) else ""
                terms.append(coef + mono)
        return "Poly(" + " + ".join(reversed(terms)) + f" over {self.field!r})"

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def _check(self, other: "Poly"):
        if self.field != other.field:
            raise ValueError("polynomials over different fields")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        a, b = self.coeffs, other.coeffs
        size = max(len(a), len(b))
        return Poly(
            F,
            [F.add(a[i] if i < len(a) else 0, b[i] if i < len(b) else 0) for i in range(size)],
        )

    def __neg__(self) -> "Poly":
        return Poly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        F = self.field
        if self.is_zero() or other.is_zero():
            return Poly(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(F, out)

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, [self.field.mul(c, x) for x in self.coeffs])

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        F = self.field
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        quot = [0] * max(dq + 1, 0)
        inv_lead = F.inv(other.lead)
        dg = other.degree
        while len(rem) - 1 >= dg and rem:
            c = F.mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - dg
            quot[shift] = c
            for i, g in enumerate(other.coeffs):
                rem[shift + i] = F.sub(rem[shift + i], F.mul(c, g))
            _trim(rem)
        return Poly(F, quot), Poly(F, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.lead))

    def __call__(self, x: int) -> int:
        F = self.field
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor (zero if both inputs are zero)."""
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


def poly_arith(f: Poly, g: Poly, kind: str):
    if kind == "add":
        return f + g
    if kind == "mul":
        return f * g
    if kind == "divmod":
        return divmod(f, g)
    if kind == "gcd":
        return poly_gcd(f, g)
    raise ValueError(f"unknown polynomial operation {kind!r}")


# -- extensions and roots of unity ---------------------------------------------

@dataclass(frozen=True, eq=False)
class Extension:
    """``big`` contains ``base`` as a subfield through ``embedding``.

    ``embedding[a]`` is the encoding in ``big`` of base element ``a``.
    """

    base: FieldSpec
    big: FieldSpec
    degree: int
    embedding: tuple[int, ...]

    @cached_property
    def _restriction(self) -> dict[int, int]:
        return {b: a for a, b in enumerate(self.embedding)}

    def embed(self, a: int) -> int:
        return self.embedding[a]

    def in_base(self, b: int) -> bool:
        return b in self._restriction

    def restrict(self, b: int) -> int:
        try:
            return self._restriction[b]
        except KeyError:
            raise ValueError(f"{b} of {self.big!r} is not in the subfield {self.base!r}") from None

    def trace(self, b: int) -> int:
        """Relative trace down to the base field, returned as a base element."""
        F = self.big
        acc, x = 0, b
        for _ in range(self.degree):
            acc = F.add(acc, x)
            x = F.pow(x, self.base.q)
        return self.restrict(acc)


def multiplicative_order_mod(q: int, n: int) -> int:
    """Smallest ``t >= 1`` with ``q**t == 1 (mod n)``."""
    if math.gcd(q, n) != 1:
        raise ValueError(f"gcd({n}, {q}) != 1")
    if n == 1:
        return 1
    t, x = 1, q % n
    while x != 1:
        x = x * q % n
        t += 1
    return t


@lru_cache(maxsize=None)
def extension_of(base: FieldSpec, t: int) -> Extension:
    if t == 1:
        return Extension(base, base, 1, tuple(range(base.q)))
    big = field_make(base.p, base.m * t)
    if base.m == 1:
        emb = tuple(range(base.p))
    else:
        mod = Poly(big, [c for c in base.modulus])  # prime-field digits embed as themselves
        omega = next(w for w in range(big.q) if mod(w) == 0)
        powers = [big.pow(omega, i) for i in range(base.m)]
        emb_list = []
        for a in range(base.q):
            acc = 0
            for d, pw in zip(base.digits(a), powers):
                acc = big.add(acc, big.mul(d, pw))
            emb_list.append(acc)
        emb = tuple(emb_list)
    return Extension(base, big, t, emb)


def nth_root_of_unity(n: int, field: FieldSpec) -> tuple[Extension, int]:
    """Return ``(ext, alpha)`` with ``alpha`` of multiplicative order exactly ``n``.

    ``ext.big`` is GF(q^t) with ``t = ord_n(q)``; ``alpha`` is the
    smallest-encoded element of order ``n`` there.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if math.gcd(n, field.q) != 1:
        raise ValueError(f"gcd({n}, {field.q}) != 1: no primitive {n}-th root of unity")
    t = multiplicative_order_mod(field.q, n)
    ext = extension_of(field, t)
    big = ext.big
    if n == 1:
        return ext, 1
    g = big.primitive_element
    step = (big.q - 1) // n
    cands = [big.pow(g, step * j) for j in range(1, n) if math.gcd(j, n) == 1]
    return ext, min(cands)


def minimal_polynomial(beta: int, ext: Extension) -> Poly:
    """Minimal polynomial over ``ext.base`` of an element ``beta`` of ``ext.big``."""
    big, q = ext.big, ext.base.q
    conj = [beta]
    x = big.pow(beta, q)
    while x != beta:
        conj.append(x)
        x = big.pow(x, q)
    prod = Poly.from_roots(big, conj)
    return Poly(ext.base, [ext.restrict(c) for c in prod.coeffs])
