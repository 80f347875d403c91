"""Cyclic codes from defining sets: cosets, generator polynomials, BCH bound, locality."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError, VerificationError
from .galois import Extension, FieldSpec, Poly, minimal_polynomial, nth_root_of_unity
from .locality import LocalityCertificate, LocalityWitness
from .matcode import LinearCode, contains_rows, dual_code, is_subcode


def _check_coprime(n: int, q: int):
    if n < 1 or math.gcd(n, q) != 1:
        raise PreconditionError(f"cyclic codes need gcd(n, q) = 1, got n={n}, q={q}")


def cyclotomic_coset(i: int, n: int, q: int) -> tuple[int, ...]:
    _check_coprime(n, q)
    orbit = []
    x = i % n
    while x not in orbit:
        orbit.append(x)
        x = x * q % n
    return tuple(sorted(orbit))


def all_cosets(n: int, q: int) -> list[tuple[int, ...]]:
    seen: set[int] = set()
    out = []
    for i in range(n):
        if i not in seen:
            c = cyclotomic_coset(i, n, q)
            seen.update(c)
            out.append(c)
    return out


@dataclass(frozen=True)
class DefiningSet:
    n: int
    q: int
    members: tuple[int, ...]
    cosets: tuple[tuple[int, ...], ...]
    enlarged: bool = False  # closure added residues beyond the seeds

    def __contains__(self, i: int) -> bool:
        return i % self.n in self.members

    def __len__(self) -> int:
        return len(self.members)

    def negated(self) -> frozenset[int]:
        return frozenset((-i) % self.n for i in self.members)

    def to_json(self) -> dict:
        return {"n": self.n, "q": self.q, "members": list(self.members)}

    @classmethod
    def from_json(cls, obj: dict) -> "DefiningSet":
        ds = defining_set_make(int(obj["n"]), int(obj["q"]), obj["members"])
        if ds.enlarged:
            raise ValueError("stored defining set is not a union of cyclotomic cosets")
        return ds


def defining_set_make(n: int, q: int, seeds) -> DefiningSet:
    """Close ``seeds`` under multiplication by ``q`` modulo ``n``."""
    _check_coprime(n, q)
    seeds = {int(s) % n for s in seeds}
    members: set[int] = set()
    cosets = []
    for s in sorted(seeds):
        if s not in members:
            c = cyclotomic_coset(s, n, q)
            members.update(c)
            cosets.append(c)
    return DefiningSet(n, q, tuple(sorted(members)), tuple(cosets), members != seeds)


@dataclass(frozen=True, eq=False)
class CyclicCode:
    code: LinearCode
    defining_set: DefiningSet
    generator_poly: Poly
    ext: Extension
    alpha: int

    @property
    def n(self) -> int:
        return self.code.n

    def check_matrix(self) -> np.ndarray:
        """Evaluation matrix over the extension, one row per coset leader."""
        big = self.ext.big
        reps = [c[0] for c in self.defining_set.cosets]
        return np.array([[big.pow(self.alpha, i * j) for j in range(self.n)] for i in reps], dtype=np.int64)

    def annihilates(self, words) -> np.ndarray:
        """Membership via the evaluation matrix: every ``alpha^i``, ``i`` in the defining set, is a root."""
        W = np.atleast_2d(np.asarray(words, dtype=np.int64))
        big = self.ext.big
        emb = np.array(self.ext.embedding, dtype=np.int64)
        Hx = self.check_matrix()
        if len(Hx) == 0:
            return np.ones(len(W), dtype=bool)
        return ~np.any(big.matmul(emb[W], Hx.T), axis=1)


def cyclic_code_build(n: int, field: FieldSpec, D: DefiningSet) -> CyclicCode:
    """Cyclic code of length ``n`` whose generator polynomial vanishes exactly on ``alpha^D``."""
    _check_coprime(n, field.q)
    if D.n != n or D.q != field.q:
        raise ValueError("defining set does not match (n, q)")
    if len(D.members) == n:
        raise PreconditionError("defining set is all of Z_n: zero code")
    ext, alpha = nth_root_of_unity(n, field)
    big = ext.big
    g_big = Poly.from_roots(big, [big.pow(alpha, i) for i in D.members])
    try:
        g = Poly(field, [ext.restrict(c) for c in g_big.coeffs])
    except ValueError as exc:
        raise VerificationError(f"generator polynomial left the base field: {exc}") from None
    via_minpolys = Poly(field, [1])
    for coset in D.cosets:
        via_minpolys = via_minpolys * minimal_polynomial(big.pow(alpha, coset[0]), ext)
    if via_minpolys != g:
        raise VerificationError("product of minimal polynomials differs from root product")
    xn1 = Poly(field, [field.neg(1)] + [0] * (n - 1) + [1])
    if not divmod(xn1, g)[1].is_zero():
        raise VerificationError("generator polynomial does not divide x^n - 1")
    k = n - g.degree
    rows = np.zeros((k, n), dtype=np.int64)
    for i in range(k):
        rows[i, i : i + g.degree + 1] = g.coeffs
    code = LinearCode.from_generator(field, rows, n)
    if code.k != n - len(D.members):
        raise VerificationError("dimension differs from n - |D|")
    cc = CyclicCode(code, D, g, ext, alpha)
    if code.k and not np.all(cc.annihilates(code.generator)):
        raise VerificationError("evaluation check matrix does not annihilate the generator")
    return cc


def bch_bound(D: DefiningSet) -> int:
    """Largest ``lambda`` with an arithmetic progression of ``lambda - 1`` members.

    Common differences range over every ``m`` in ``[1, n-1]`` coprime to ``n``;
    starting points range over the members themselves.
    """
    n, members = D.n, set(D.members)
    if not members:
        return 1
    best = 0
    steps = [m for m in range(1, n) if math.gcd(m, n) == 1] or [1]
    for m in steps:
        for s in members:
            if (s - m) % n in members and len(members) < n:
                continue  # not the start of a maximal run
            length = 0
            x = s
            while x in members and length < n:
                length += 1
                x = (x + m) % n
            best = max(best, length)
    return best + 1


def cyclic_locality(D: DefiningSet, u: int, r: int) -> bool:
    """Whether ``{i(r+1)+1 : 0 <= i < u}`` lies inside the defining set."""
    if D.n != u * (r + 1):
        raise PreconditionError(f"n = {D.n} is not u(r+1) = {u * (r + 1)}")
    return all((i * (r + 1) + 1) % D.n in D.members for i in range(u))


def cyclic_locality_certificate(cc: CyclicCode, u: int, r: int) -> LocalityCertificate:
    """Explicit repair words supported on the cosets ``{ju + s : 0 <= j <= r}``.

    Summing the check equations for ``alpha^(i(r+1)+1)`` over ``i`` leaves
    coefficients ``alpha^(ju)`` on positions ``ju``; a relative trace
    ``Tr(gamma * .)`` turns that relation into dual words over the base field.
    """
    D = cc.defining_set
    if not cyclic_locality(D, u, r):
        raise PreconditionError("defining set does not contain the locality pattern")
    n, ext, big = cc.n, cc.ext, cc.ext.big
    coeffs = [big.pow(cc.alpha, j * u) for j in range(r + 1)]
    witnesses = {}
    for j in range(r + 1):
        gamma = _trace_nonzero_multiplier(ext, coeffs[j])
        base_word = np.zeros(n, dtype=np.int64)
        for jj, c in enumerate(coeffs):
            base_word[jj * u] = ext.trace(big.mul(gamma, c))
        for s in range(u):
            witnesses[j * u + s] = np.roll(base_word, s)
    ws = tuple(LocalityWitness(i, tuple(int(x) for x in witnesses[i])) for i in range(n))
    cert = LocalityCertificate(r, ws, "cyclic-construction")
    if not cert.verify(cc.code):
        raise VerificationError("cyclic locality witnesses are not dual codewords")
    return cert


def _trace_nonzero_multiplier(ext: Extension, c: int) -> int:
    big = ext.big
    for gamma in range(1, big.q):
        if ext.trace(big.mul(gamma, c)):
            return gamma
    raise AssertionError("relative trace is identically zero")  # pragma: no cover


def is_dual_containing(D: DefiningSet) -> bool:
    return not (set(D.members) & D.negated())


def dual_containing_matrix_check(cc: CyclicCode) -> bool:
    """Matrix-level twin of :func:`is_dual_containing`."""
    return is_subcode(dual_code(cc.code), cc.code)


def shift_closed(cc: CyclicCode) -> bool:
    G = cc.code.generator
    return bool(np.all(contains_rows(cc.code, np.roll(G, 1, axis=1))))
