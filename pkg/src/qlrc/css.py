"""CSS composition of two classical codes and everything certified about the result.

``css_compose`` turns a pair ``C1, C2`` with ``dual(C1)`` strictly inside ``C2``
into an ``[[n, k1 + k2 - n, delta]]`` code, where ``delta`` is the smaller of the
two relative weights ``wt(C2 \\ dual C1)`` and ``wt(C1 \\ dual C2)``.  Quantum
locality is certified by pairs of dual codewords whose joint support is small.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, replace
from functools import lru_cache
from math import ceil, comb

import numpy as np

from .errors import BudgetExceeded, OracleInfeasible, PreconditionError, VerificationError
from .exhaustive import dopt_local, iter_subspaces, kopt_local, locality_oracle_feasible, nopt_local
from .galois import field_for_order
from .locality import (
    SKIPPED,
    BoundReport,
    LocalityRefused,
    classical_reports,
    cm_terms,
    is_singleton_optimal,
    locality_certificate,
    require_sound,
    resolve_oracle,
)
from .matcode import (
    DEFAULT_BUDGET,
    LinearCode,
    certify_distance,
    dual_code,
    is_subcode,
    null_space,
    relative_min_weight,
)

PURE = "pure"
IMPURE = "impure"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class QuantumDistance:
    value: int | None
    provenance: str  # "certified" | "claimed"
    components: tuple[int | None, int | None] = (None, None)
    witnesses: tuple[tuple[int, ...] | None, tuple[int, ...] | None] = (None, None)

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "provenance": self.provenance,
            "components": list(self.components),
            "witnesses": [list(w) if w is not None else None for w in self.witnesses],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QuantumDistance":
        ws = tuple(tuple(w) if w is not None else None for w in obj["witnesses"])
        return cls(obj["value"], obj["provenance"], tuple(obj["components"]), ws)


# -- locality --------------------------------------------------------------------------

@dataclass(frozen=True)
class LocalityPair:
    coordinate: int
    word1: tuple[int, ...]  # in dual(C1)
    word2: tuple[int, ...]  # in dual(C2)

    @property
    def union_size(self) -> int:
        return sum(1 for a, b in zip(self.word1, self.word2) if a or b)

    def to_json(self) -> dict:
        return {"coordinate": self.coordinate, "word1": list(self.word1), "word2": list(self.word2), "union": self.union_size}


def _normalize(field, word, j) -> tuple[int, ...]:
    word = np.asarray(word, dtype=np.int64)
    if not word[j]:
        raise VerificationError(f"witness does not cover coordinate {j}")
    return tuple(int(x) for x in field.vmul(field.inv(int(word[j])), word))


@dataclass(frozen=True)
class QuantumLocalityCertificate:
    """Per-coordinate witness pairs, each scaled so its entry at the coordinate is 1."""

    r: int
    pairs: tuple[LocalityPair, ...]
    method: str = ""
    normalized: bool = True

    def verify(self, C1: LinearCode, C2: LinearCode) -> bool:
        n = C1.n
        if sorted(p.coordinate for p in self.pairs) != list(range(n)):
            return False
        for p in self.pairs:
            j = p.coordinate
            if len(p.word1) != n or len(p.word2) != n or not p.word1[j] or not p.word2[j]:
                return False
            if p.union_size > self.r + 1:
                return False
            if self.normalized and (p.word1[j] != 1 or p.word2[j] != 1):
                return False
            for C, w in ((C1, p.word1), (C2, p.word2)):
                if C.k and np.any(C.field.matmul(C.generator, np.asarray(w, dtype=np.int64))):
                    return False
        return True

    def to_json(self) -> dict:
        return {"r": self.r, "method": self.method, "normalized": self.normalized, "pairs": [p.to_json() for p in self.pairs]}

    @classmethod
    def from_json(cls, obj: dict) -> "QuantumLocalityCertificate":
        pairs = tuple(LocalityPair(int(p["coordinate"]), tuple(p["word1"]), tuple(p["word2"])) for p in obj["pairs"])
        return cls(int(obj["r"]), pairs, obj.get("method", ""), bool(obj.get("normalized", True)))


# -- the quantum code ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CssQuantumCode:
    C1: LinearCode
    C2: LinearCode
    delta: QuantumDistance
    locality: QuantumLocalityCertificate | None = None

    @property
    def n(self) -> int:
        return self.C1.n

    @property
    def q(self) -> int:
        return self.C1.q

    @property
    def field(self):
        return self.C1.field

    @property
    def kappa(self) -> int:
        return self.C1.k + self.C2.k - self.n

    @property
    def symmetric(self) -> bool:
        return self.C1.same_space(self.C2)

    @property
    def purity(self) -> str:
        d1, d2 = self.C1.distance, self.C2.distance
        if self.delta.provenance != "certified" or not d1 or not d2:
            return UNKNOWN
        if "certified" != d1.provenance or "certified" != d2.provenance:
            return UNKNOWN
        return PURE if self.delta.value == min(d1.value, d2.value) else IMPURE

    @property
    def certified(self) -> bool:
        return self.delta.provenance == "certified"

    def with_locality(self, cert: QuantumLocalityCertificate) -> "CssQuantumCode":
        if not cert.verify(self.C1, self.C2):
            raise VerificationError("quantum locality certificate failed re-check")
        return replace(self, locality=cert)

    def __repr__(self):
        return f"[[{self.n}, {self.kappa}, {self.delta.value}]]_{self.q}"

    def to_json(self) -> dict:
        return {
            "C1": self.C1.to_json(),
            "C2": self.C2.to_json(),
            "kappa": self.kappa,
            "delta": self.delta.to_json(),
            "purity": self.purity,
            "locality_certificate": self.locality.to_json() if self.locality else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "CssQuantumCode":
        C1, C2 = LinearCode.from_json(obj["C1"]), LinearCode.from_json(obj["C2"])
        _check_pair(C1, C2)
        Q = cls(C1, C2, QuantumDistance.from_json(obj["delta"]))
        if Q.kappa != int(obj["kappa"]):
            raise ValueError("stored kappa does not match the codes")
        if obj.get("locality_certificate"):
            Q = replace(Q, locality=QuantumLocalityCertificate.from_json(obj["locality_certificate"]))
        return Q


def _check_pair(C1: LinearCode, C2: LinearCode):
    if C1.field != C2.field or C1.n != C2.n:
        raise PreconditionError("CSS ingredients must share field and length")
    D1 = dual_code(C1)
    if D1.same_space(C2):
        raise PreconditionError("dual(C1) = C2 gives a zero-dimensional code; this case is excluded")
    if not is_subcode(D1, C2, strict=True):
        raise PreconditionError("dual(C1) is not a strict subcode of C2")
    if not is_subcode(dual_code(C2), C1, strict=True):
        raise VerificationError("dual(C2) is not a strict subcode of C1")


def _certified(C: LinearCode, budget: int, threads) -> LinearCode:
    if C.distance is not None and C.distance.provenance == "certified":
        return C
    return certify_distance(C, budget, threads=threads)


def css_compose(
    C1: LinearCode,
    C2: LinearCode,
    budget: int = DEFAULT_BUDGET,
    threads: int | None = None,
    claimed_delta: int | None = None,
) -> CssQuantumCode:
    """Compose and certify a CSS code.

    If an oracle runs out of budget the code is still returned, with ``delta``
    set to ``claimed_delta`` and marked ``"claimed"``.
    """
    _check_pair(C1, C2)
    same = C1.same_space(C2)
    try:
        C1 = _certified(C1, budget, threads)
        C2 = C1 if same else _certified(C2, budget, threads)
        w1, x1 = relative_min_weight(C2, dual_code(C1), budget, threads=threads)
        w2, x2 = (w1, x1) if same else relative_min_weight(C1, dual_code(C2), budget, threads=threads)
    except BudgetExceeded:
        return CssQuantumCode(C1, C2, QuantumDistance(claimed_delta, "claimed"))
    return CssQuantumCode(C1, C2, QuantumDistance(min(w1, w2), "certified", (w1, w2), (x1, x2)))


def quantum_locality_certificate(
    Q: CssQuantumCode,
    r: int,
    budget: int = DEFAULT_BUDGET,
    witnesses=None,
) -> QuantumLocalityCertificate:
    """Certify quantum locality ``r``.

    ``witnesses`` may supply ``(coordinate, word1, word2)`` triples from a
    construction; they are normalised and re-verified, never trusted.
    Otherwise a symmetric pair reuses one classical certificate for both roles
    and an asymmetric pair is searched support by support.
    """
    F = Q.field
    if witnesses is not None:
        pairs = tuple(LocalityPair(j, _normalize(F, a, j), _normalize(F, b, j)) for j, a, b in witnesses)
        method = "construction"
    elif Q.symmetric:
        cert = locality_certificate(Q.C1, r, budget)
        pairs = tuple(
            LocalityPair(w.coordinate, _normalize(F, w.word, w.coordinate), _normalize(F, w.word, w.coordinate))
            for w in cert.witnesses
        )
        method = "classical-reuse"
    else:
        pairs = _search_pairs(Q, r, budget)
        method = "support-search"
    cert = QuantumLocalityCertificate(r, tuple(sorted(pairs, key=lambda p: p.coordinate)), method)
    if not cert.verify(Q.C1, Q.C2):
        raise VerificationError("quantum locality witnesses failed re-check")
    return cert


def _search_pairs(Q: CssQuantumCode, r: int, budget: int) -> tuple[LocalityPair, ...]:
    n, F = Q.n, Q.field
    size = min(r + 1, n)
    cost = n * comb(n - 1, size - 1)
    if cost > budget:
        raise BudgetExceeded("quantum locality search", cost, budget)
    out = []
    for j in range(n):
        found = None
        for rest in itertools.combinations([i for i in range(n) if i != j], size - 1):
            S = sorted((j,) + rest)
            pos = S.index(j)
            words = []
            for C in (Q.C1, Q.C2):
                K = null_space(F, C.generator[:, S]) if C.k else np.eye(len(S), dtype=np.int64)
                hit = next((row for row in K if row[pos]), None)
                if hit is None:
                    break
                w = np.zeros(n, dtype=np.int64)
                w[S] = hit
                words.append(w)
            if len(words) == 2:
                found = LocalityPair(j, _normalize(F, words[0], j), _normalize(F, words[1], j))
                break
        if found is None:
            raise LocalityRefused(r, j)
        out.append(found)
    return tuple(out)


def quantum_min_locality(Q: CssQuantumCode, budget: int = DEFAULT_BUDGET) -> QuantumLocalityCertificate:
    for r in range(1, Q.n):
        try:
            return quantum_locality_certificate(Q, r, budget)
        except LocalityRefused:
            continue
    raise LocalityRefused(Q.n - 1, 0)


# -- bounds -----------------------------------------------------------------------------

def q_singleton_dim_bound(n: int, delta: int, r: int) -> int:
    """Largest ``kappa`` allowed for length ``n``, distance ``delta`` and locality ``r``."""
    if n < 1 or delta < 1 or r < 1:
        raise ValueError("need n, delta, r >= 1")
    a = (n - (delta - 1)) // (r + 1)
    return n - 2 * (delta - 1) - a - (n - 2 * (delta - 1) - a) // (r + 1)


def q_singleton_rhs(n: int, kappa: int, r: int) -> int:
    """Right-hand side ``n - kappa - 2*ceil(kappa/r) + 4`` that bounds ``2*delta``."""
    if n < 1 or kappa < 1 or r < 1:
        raise ValueError("need n, kappa, r >= 1")
    return n - kappa - 2 * ceil(kappa / r) + 4


def q_singleton_bound(n: int, kappa: int, r: int) -> int:
    return q_singleton_rhs(n, kappa, r) // 2


def q_cm_bound(k1: int, k2: int, delta: int, r: int, q: int, oracle: str = "auto") -> int:
    """Largest ``kappa`` allowed by the two-sided CM scan (halved and floored).

    The double minimum separates into one scan per ingredient dimension.
    """
    oracle = resolve_oracle(q, max(k1, k2), oracle)
    return (min(cm_terms(k1, delta, r, q, oracle)) + min(cm_terms(k2, delta, r, q, oracle))) // 2


def quantum_reports(n, kappa, delta, k1, k2, r, q, oracle: str = "auto") -> list[BoundReport]:
    oracle = resolve_oracle(q, max(k1, k2), oracle)
    return [
        BoundReport("Q-Singleton-dim", {"n": n, "delta": delta, "r": r}, q_singleton_dim_bound(n, delta, r), kappa),
        BoundReport("Q-Singleton", {"n": n, "kappa": kappa, "r": r}, q_singleton_bound(n, kappa, r), delta),
        BoundReport(
            "Q-CM",
            {"k1": k1, "k2": k2, "delta": delta, "r": r, "q": q},
            q_cm_bound(k1, k2, delta, r, q, oracle),
            kappa,
            oracle,
        ),
    ]


def all_reports(Q: CssQuantumCode, r: int, oracle: str = "auto") -> list[BoundReport]:
    """Classical reports for both ingredients plus the three quantum reports."""
    if not Q.certified:
        raise PreconditionError("bound reports need a certified delta")
    if Q.locality is None or Q.locality.r > r or not Q.locality.verify(Q.C1, Q.C2):
        raise PreconditionError(f"quantum locality {r} is not certified")
    out = []
    for label, C in (("C1", Q.C1), ("C2", Q.C2)):
        for rep in classical_reports(C.n, C.k, C.d, r, C.q, oracle):
            out.append(replace(rep, inputs={**rep.inputs, "code": label}, verdict=""))
    out.extend(quantum_reports(Q.n, Q.kappa, Q.delta.value, Q.C1.k, Q.C2.k, r, Q.q, oracle))
    return require_sound(out)


# -- optimality ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OptimalityVerdict:
    r: int
    applicable: bool
    note: str
    distance_form_equality: bool
    dimension_form_equality: bool
    cond_singleton_optimal: bool | None = None
    cond_dimensions: bool | None = None

    @property
    def conditions(self) -> bool | None:
        if self.cond_singleton_optimal is None:
            return None
        return self.cond_singleton_optimal and self.cond_dimensions

    @property
    def biconditional_holds(self) -> bool | None:
        return None if not self.applicable else self.distance_form_equality == self.conditions

    @property
    def implication_holds(self) -> bool | None:
        return None if not self.applicable else (not self.distance_form_equality) or self.dimension_form_equality

    @property
    def consistent(self) -> bool:
        return self.biconditional_holds is not False and self.implication_holds is not False

    @property
    def optimal(self) -> bool:
        return self.distance_form_equality

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "applicable": self.applicable,
            "note": self.note,
            "distance_form_equality": self.distance_form_equality,
            "dimension_form_equality": self.dimension_form_equality,
            "ingredients_singleton_optimal": self.cond_singleton_optimal,
            "dimension_condition": self.cond_dimensions,
            "biconditional_holds": self.biconditional_holds,
            "implication_holds": self.implication_holds,
        }


def optimality_from_parameters(n, k1, k2, d1, d2, delta, pure: bool, r: int) -> OptimalityVerdict:
    """Pure-optimality characterisation evaluated on plain integers."""
    kappa = k1 + k2 - n
    dist_eq = 2 * delta == q_singleton_rhs(n, kappa, r)
    dim_eq = kappa == q_singleton_dim_bound(n, delta, r)
    if not pure:
        return OptimalityVerdict(r, False, "impure code: characterisation not applicable", dist_eq, dim_eq)
    cond_a = is_singleton_optimal(n, k1, d1, r) and is_singleton_optimal(n, k2, d2, r)
    cond_b = k1 == k2 and ceil(k1 / r) == ceil(kappa / r)
    # equal dimensions plus Singleton optimality force d1 == d2, so the
    # biconditional already covers the unequal-distance case
    note = "ingredient distances differ: distance-form equality is impossible" if d1 != d2 else "pure"
    return OptimalityVerdict(r, True, note, dist_eq, dim_eq, cond_a, cond_b)


def pure_optimal_check(Q: CssQuantumCode, r: int, strict: bool = True) -> OptimalityVerdict:
    """Check both optimality conditions against equality in the distance form.

    With ``strict`` an inconsistent verdict raises :class:`VerificationError`.
    """
    if Q.purity == UNKNOWN:
        raise PreconditionError("optimality check needs certified distances")
    v = optimality_from_parameters(Q.n, Q.C1.k, Q.C2.k, Q.C1.d, Q.C2.d, Q.delta.value, Q.purity == PURE, r)
    if strict and not v.consistent:
        raise VerificationError(f"optimality characterisation violated on {Q!r}: {v.to_json()}")
    return v


# -- transfer relations -----------------------------------------------------------------

TRANSFER_FIELDS = (2, 3)

_dopt = lru_cache(maxsize=None)(dopt_local)
_kopt = lru_cache(maxsize=None)(kopt_local)
_nopt = lru_cache(maxsize=None)(nopt_local)


def transfer_feasible(q: int, k1: int, k2: int) -> bool:
    return q in TRANSFER_FIELDS and locality_oracle_feasible(q, max(k1, k2))


def transfer_reports(q: int, n: int, k1: int, k2: int, delta: int, r: int) -> list[BoundReport]:
    """The three classical-optimum relations as bound reports (possibly skipped)."""
    kappa = k1 + k2 - n
    names = ("T-distance", "T-dimension", "T-length")
    inputs = {"n": n, "k1": k1, "k2": k2, "kappa": kappa, "delta": delta, "r": r, "q": q}
    if not transfer_feasible(q, k1, k2):
        return [BoundReport(name, inputs, None, 0, SKIPPED) for name in names]
    try:
        d1, d2 = _dopt(q, k1, kappa, r), _dopt(q, k2, kappa, r)
        e1, e2 = _kopt(q, k1, delta, r), _kopt(q, k2, delta, r)
        m = _nopt(q, kappa, delta, r, max(k1, k2))
    except OracleInfeasible:  # pragma: no cover - guarded above
        return [BoundReport(name, inputs, None, 0, SKIPPED) for name in names]
    if None in (d1, d2, e1, e2, m):
        raise VerificationError(f"no classical code with the transferred parameters exists: {inputs}")
    return [
        BoundReport(names[0], inputs, d1 + d2, 2 * delta, "exact"),
        BoundReport(names[1], inputs, e1 + e2, 2 * kappa, "exact"),
        BoundReport(names[2], inputs, n + kappa, 2 * m, "exact"),
    ]


def transfer_relations_check(Q: CssQuantumCode, r: int) -> list[BoundReport]:
    if not Q.certified:
        raise PreconditionError("transfer relations need a certified delta")
    return require_sound(transfer_reports(Q.q, Q.n, Q.C1.k, Q.C2.k, Q.delta.value, r))


# -- toy enumeration over GF(2) ------------------------------------------------------------

@dataclass(frozen=True)
class ToyPair:
    """``C1 = A^perp`` and ``C2 = B`` for binary subspaces ``A`` strictly inside ``B``."""

    n: int
    A: tuple[int, ...]  # generators as bit masks (bit i = coordinate i)
    B: tuple[int, ...]
    k1: int
    k2: int
    delta: int
    r: int | None  # None when some coordinate has no witness pair


def _span(gens) -> frozenset[int]:
    words = {0}
    for g in gens:
        words |= {w ^ g for w in words}
    return frozenset(words)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _dual_span(words: frozenset[int], n: int) -> frozenset[int]:
    return frozenset(x for x in range(1 << n) if all(_popcount(x & w) % 2 == 0 for w in words))


def _binary_subspaces(n: int) -> list[tuple[tuple[int, ...], frozenset[int]]]:
    F = field_for_order(2)
    out = [((), frozenset({0}))]
    for k in range(1, n + 1):
        for G in iter_subspaces(F, n, k):
            gens = tuple(int(sum(int(b) << i for i, b in enumerate(row))) for row in G)
            out.append((gens, _span(gens)))
    return out


def iter_toy_pairs(n: int):
    """Yield every binary CSS pair of length ``n`` with its distance and minimal locality."""
    spaces = _binary_subspaces(n)
    duals = [_dual_span(words, n) for _, words in spaces]
    for a, (ga, A) in enumerate(spaces):
        Aperp = duals[a]
        for b, (gb, B) in enumerate(spaces):
            if len(B) <= len(A) or not A <= B:
                continue
            Bperp = duals[b]
            delta = min(min(_popcount(w) for w in B - A), min(_popcount(w) for w in Aperp - Bperp))
            k1 = n - len(ga)
            k2 = len(gb)
            yield ToyPair(n, ga, gb, k1, k2, delta, _toy_locality(A, Bperp, n))


def _toy_locality(A: frozenset[int], Bperp: frozenset[int], n: int) -> int | None:
    worst = 0
    for j in range(n):
        bit = 1 << j
        la = [w for w in A if w & bit]
        lb = [w for w in Bperp if w & bit]
        if not la or not lb:
            return None
        worst = max(worst, min(_popcount(x | y) for x in la for y in lb))
    return max(1, worst - 1)


def toy_pair_codes(p: ToyPair) -> tuple[LinearCode, LinearCode]:
    """The pair as ``LinearCode`` objects, for cross-checking with the general oracles."""
    F = field_for_order(2)

    def rows(gens):
        return np.array([[(g >> i) & 1 for i in range(p.n)] for g in gens], dtype=np.int64).reshape(-1, p.n)

    C1 = LinearCode.from_parity_check(F, rows(p.A), p.n) if p.A else LinearCode.from_generator(F, np.eye(p.n, dtype=np.int64))
    C2 = LinearCode.from_generator(F, rows(p.B), p.n)
    return C1, C2
