"""Classical locality: dual-codeword certificates, the Singleton-like and CM bounds.

A code has locality ``r`` when every coordinate ``i`` lies in the support of
some dual codeword of weight at most ``r + 1``.  That existential statement
is the only notion of locality used anywhere in the package.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import ceil, comb

import numpy as np

from .errors import BudgetExceeded, OracleInfeasible, PreconditionError, QlrcError, VerificationError
from .exhaustive import kopt_exact, kopt_feasible
from .matcode import (
    DEFAULT_BUDGET,
    LinearCode,
    iter_projective_words,
    null_space,
    projective_count,
    weight,
)

EQUALITY = "meets-with-equality"
STRICT = "satisfied-strict"
VIOLATED = "violated"
SKIPPED = "skipped"


class LocalityRefused(QlrcError):
    """Exhaustive search proved that some coordinate has no short repair word."""

    def __init__(self, r: int, coordinate: int):
        super().__init__(f"no dual codeword of weight <= {r + 1} covers coordinate {coordinate}")
        self.r = r
        self.coordinate = coordinate


@dataclass(frozen=True)
class LocalityWitness:
    coordinate: int
    word: tuple[int, ...]

    @property
    def weight(self) -> int:
        return sum(1 for x in self.word if x)

    def to_json(self) -> dict:
        return {"coordinate": self.coordinate, "word": list(self.word), "weight": self.weight}


@dataclass(frozen=True)
class LocalityCertificate:
    r: int
    witnesses: tuple[LocalityWitness, ...]
    method: str = ""

    def verify(self, C: LinearCode) -> bool:
        """Re-check each witness: dual membership, weight and coverage."""
        if len(self.witnesses) != C.n:
            return False
        if sorted(w.coordinate for w in self.witnesses) != list(range(C.n)):
            return False
        for w in self.witnesses:
            word = np.asarray(w.word, dtype=np.int64)
            if word.size != C.n or not word[w.coordinate] or w.weight > self.r + 1:
                return False
            if C.k and np.any(C.field.matmul(C.generator, word)):
                return False
        return True

    def to_json(self, verified: bool | None = None) -> dict:
        out = {"r": self.r, "witnesses": [w.to_json() for w in self.witnesses], "method": self.method}
        if verified is not None:
            out["verified"] = verified
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "LocalityCertificate":
        ws = tuple(LocalityWitness(int(w["coordinate"]), tuple(w["word"])) for w in obj["witnesses"])
        return cls(int(obj["r"]), ws, obj.get("method", ""))


def _lightest_by_enumeration(C: LinearCode, max_weight: int) -> dict[int, np.ndarray]:
    best: dict[int, tuple[int, np.ndarray]] = {}
    for W in iter_projective_words(C.parity_check, C.field):
        wts = np.count_nonzero(W, axis=1)
        light = wts <= max_weight
        if not light.any():
            continue
        W, wts = W[light], wts[light]
        for j in range(C.n):
            rows = np.flatnonzero(W[:, j])
            if rows.size:
                i = rows[np.argmin(wts[rows])]
                if j not in best or wts[i] < best[j][0]:
                    best[j] = (int(wts[i]), W[i])
    return {j: v[1] for j, v in best.items()}


def _by_support(C: LinearCode, j: int, size: int) -> np.ndarray | None:
    others = [i for i in range(C.n) if i != j]
    for rest in itertools.combinations(others, size - 1):
        S = sorted((j,) + rest)
        K = null_space(C.field, C.generator[:, S]) if C.k else np.eye(len(S), dtype=np.int64)
        pos = S.index(j)
        for row in K:
            if row[pos]:
                word = np.zeros(C.n, dtype=np.int64)
                word[S] = row
                return word
    return None


def locality_search_cost(C: LinearCode, r: int) -> tuple[int, int]:
    """(dual enumeration cost, support search cost)."""
    size = min(r + 1, C.n)
    return projective_count(C.q, C.n - C.k), C.n * comb(C.n - 1, size - 1)


def locality_certificate(C: LinearCode, r: int, budget: int = DEFAULT_BUDGET) -> LocalityCertificate:
    """Find, for every coordinate, a dual codeword of weight ``<= r+1`` covering it.

    Raises :class:`LocalityRefused` when the (complete) search proves some
    coordinate uncovered and :class:`BudgetExceeded` when it cannot finish.
    """
    if r < 0:
        raise ValueError("locality must be non-negative")
    if C.k == C.n:
        raise LocalityRefused(r, 0)
    enum_cost, supp_cost = locality_search_cost(C, r)
    if min(enum_cost, supp_cost) > budget:
        raise BudgetExceeded("locality search", min(enum_cost, supp_cost), budget)
    size = min(r + 1, C.n)
    witnesses = []
    if enum_cost <= supp_cost:
        found = _lightest_by_enumeration(C, size)
        method = "dual-enumeration"
        for j in range(C.n):
            if j not in found:
                raise LocalityRefused(r, j)
            witnesses.append(LocalityWitness(j, tuple(int(x) for x in found[j])))
    else:
        method = "support-search"
        for j in range(C.n):
            word = _by_support(C, j, size)
            if word is None:
                raise LocalityRefused(r, j)
            witnesses.append(LocalityWitness(j, tuple(int(x) for x in word)))
    cert = LocalityCertificate(r, tuple(witnesses), method)
    if not cert.verify(C):
        raise VerificationError("locality certificate failed its own re-check")
    return cert


def min_locality(C: LinearCode, budget: int = DEFAULT_BUDGET) -> LocalityCertificate:
    """Certificate for the smallest locality ``r >= 1`` the code has."""
    if C.k == C.n:
        raise LocalityRefused(C.n, 0)
    if projective_count(C.q, C.n - C.k) <= budget:
        found = _lightest_by_enumeration(C, C.n)
        if len(found) < C.n:
            raise LocalityRefused(C.n - 1, min(set(range(C.n)) - set(found)))
        r = max(1, max(weight(w) for w in found.values()) - 1)
        ws = tuple(LocalityWitness(j, tuple(int(x) for x in found[j])) for j in range(C.n))
        cert = LocalityCertificate(r, ws, "dual-enumeration")
        if not cert.verify(C):
            raise VerificationError("locality certificate failed its own re-check")
        return cert
    for r in range(1, C.n):
        try:
            return locality_certificate(C, r, budget)
        except LocalityRefused:
            continue
    raise LocalityRefused(C.n - 1, 0)


# -- bounds --------------------------------------------------------------------------

def singleton_like_bound(n: int, k: int, r: int) -> int:
    """Largest distance allowed for an ``[n, k]`` code with locality ``r``."""
    if not 1 <= k <= n or r < 1:
        raise ValueError("need 1 <= k <= n and r >= 1")
    return n - k - ceil(k / r) + 2


def _floor_log(x: Fraction, q: int) -> int:
    k = 0
    while Fraction(q) ** (k + 1) <= x:
        k += 1
    return k


def griesmer_max_k(q: int, n: int, d: int) -> int:
    k = 0
    total = 0
    while True:
        nxt = total + -(-d // q**k)
        if nxt > n:
            return k
        total = nxt
        k += 1


def kopt_upper(q: int, n: int, d: int) -> int:
    """Minimum of the Singleton, Griesmer and (when it applies) Plotkin dimension bounds."""
    if n < d or n <= 0:
        return 0
    if d <= 1:
        return n
    bounds = [n - d + 1, griesmer_max_k(q, n, d)]
    theta_n = Fraction(n * (q - 1), q)
    if d > theta_n:
        bounds.append(_floor_log(Fraction(d) / (d - theta_n), q))
    return min(bounds)


def resolve_oracle(q: int, max_length: int, oracle: str = "auto") -> str:
    if oracle == "auto":
        return "exact" if kopt_feasible(q, max_length) else "upper"
    if oracle not in ("exact", "upper"):
        raise ValueError(f"unknown oracle {oracle!r}")
    return oracle


def kopt(q: int, n: int, d: int, oracle: str) -> int:
    if n < d or n <= 0:
        return 0
    if oracle == "exact":
        return kopt_exact(q, n, d)
    return kopt_upper(q, n, d)


def cm_terms(n: int, d: int, r: int, q: int, oracle: str) -> list[int]:
    """Terms ``l*r + k_opt(n - l(r+1), d)`` for ``l = 0, 1, ...``.

    The scan stops after the first term whose remaining length is below ``d``;
    every later term only adds ``r`` per step.
    """
    terms = []
    ell = 0
    while True:
        rest = n - ell * (r + 1)
        terms.append(ell * r + kopt(q, rest, d, oracle))
        if rest < d:
            return terms
        ell += 1


def cm_bound(n: int, d: int, r: int, q: int, oracle: str = "auto") -> int:
    """Largest dimension allowed by the Cadambe-Mazumdar bound."""
    if n < d:
        return 0
    oracle = resolve_oracle(q, n, oracle)
    return min(cm_terms(n, d, r, q, oracle))


# -- reports --------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundReport:
    """One bound evaluated on one code: ``achieved <= value`` must hold.

    An ``oracle`` of ``"skipped"`` marks a bound whose oracle refused the size;
    its ``value`` is ``None`` and its verdict is ``"skipped"``.
    """

    bound: str
    inputs: dict
    value: int | None
    achieved: int
    oracle: str = "closed-form"
    verdict: str = dc_field(default="")

    def __post_init__(self):
        if self.oracle == SKIPPED:
            v = SKIPPED
        else:
            v = EQUALITY if self.achieved == self.value else STRICT if self.achieved < self.value else VIOLATED
        if self.verdict and self.verdict != v:
            raise VerificationError(f"{self.bound}: stored verdict {self.verdict} but values give {v}")
        object.__setattr__(self, "verdict", v)

    @property
    def violated(self) -> bool:
        return self.verdict == VIOLATED

    def to_json(self) -> dict:
        return {
            "bound": self.bound,
            "inputs": dict(self.inputs),
            "value": self.value,
            "achieved": self.achieved,
            "oracle": self.oracle,
            "verdict": self.verdict,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BoundReport":
        value = None if obj["value"] is None else int(obj["value"])
        return cls(obj["bound"], dict(obj["inputs"]), value, int(obj["achieved"]), obj["oracle"], obj["verdict"])


def require_sound(reports) -> list[BoundReport]:
    reports = list(reports)
    bad = [r for r in reports if r.violated]
    if bad:
        raise VerificationError("bound violated by a certified code: " + ", ".join(f"{b.bound} {b.inputs}" for b in bad))
    return reports


def classical_reports(n: int, k: int, d: int, r: int, q: int, oracle: str = "auto") -> list[BoundReport]:
    oracle = resolve_oracle(q, n, oracle)
    return [
        BoundReport("C-Singleton", {"n": n, "k": k, "r": r}, singleton_like_bound(n, k, r), d),
        BoundReport("C-CM", {"n": n, "d": d, "r": r, "q": q}, cm_bound(n, d, r, q, oracle), k, oracle),
    ]


def classify_classical(C: LinearCode, r: int, cert: LocalityCertificate, oracle: str = "auto") -> list[BoundReport]:
    """Singleton-like and CM reports for a code with certified distance and locality."""
    if C.distance is None or C.distance.provenance != "certified":
        raise PreconditionError("classification needs a certified minimum distance")
    if cert.r > r or not cert.verify(C):
        raise PreconditionError(f"locality {r} is not certified for this code")
    if C.degenerate:
        raise PreconditionError("degenerate codes (k = 0 or k = n) are not classified")
    return require_sound(classical_reports(C.n, C.k, C.d, r, C.q, oracle))


def is_singleton_optimal(n: int, k: int, d: int, r: int) -> bool:
    return d == singleton_like_bound(n, k, r)
