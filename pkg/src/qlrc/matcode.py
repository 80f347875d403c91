"""Linear codes over a :class:`~qlrc.galois.FieldSpec` and their weight oracles.

Two independent routes certify a minimum distance:

* message enumeration walks every projective message vector (first nonzero
  symbol equal to one) and multiplies by the generator;
* support search walks supports in increasing size and asks whether the
  parity-check columns on that support are linearly dependent.

Both routes return a witness codeword, so every distance is re-checkable.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import cached_property
from math import comb
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError, VerificationError
from .galois import FieldSpec

DEFAULT_BUDGET = 1 << 28
AUTO_ENUM_LIMIT = 1 << 20
CHUNK = 1 << 15


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("QLRC_THREADS", "1")))
    except ValueError:
        return 1


# -- matrices ------------------------------------------------------------------

def rref(field: FieldSpec, M) -> tuple[np.ndarray, int]:
    """Reduced row-echelon form and rank.

    Pivots are taken in the leftmost available column, using the first row
    (from the top) with a nonzero entry there.
    """
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-D matrix")
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        A[r] = field.vmul(field.inv(int(A[r, c])), A[r])
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = field.vsub(A[others], field.vmul(A[others, c][:, None], A[r][None, :]))
        r += 1
    return A, r


def pivots_of(R: np.ndarray) -> list[int]:
    piv = []
    for row in R:
        nz = np.flatnonzero(row)
        if nz.size:
            piv.append(int(nz[0]))
    return piv


def null_space(field: FieldSpec, M) -> np.ndarray:
    """Basis (as rows) of ``{x : M x^T = 0}``, itself in reduced echelon form."""
    M = np.asarray(M, dtype=np.int64)
    cols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, rank = rref(field, M)
    R = R[:rank]
    piv = pivots_of(R)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for t, f in enumerate(free):
        basis[t, f] = 1
        for i, pc in enumerate(piv):
            if R[i, f]:
                basis[t, pc] = field.neg(int(R[i, f]))
    if len(basis):
        basis, _ = rref(field, basis)
    return basis


def weight(word) -> int:
    return int(np.count_nonzero(word))


def support(word) -> frozenset[int]:
    return frozenset(int(i) for i in np.flatnonzero(word))


# -- linear codes ----------------------------------------------------------------

@dataclass(frozen=True)
class DistanceRecord:
    """Minimum distance (or relative weight) with the codeword that attains it."""

    value: int
    provenance: str  # "certified" | "claimed"
    witness: tuple[int, ...] | None = None
    method: str = ""

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "provenance": self.provenance,
            "witness": list(self.witness) if self.witness is not None else None,
            "method": self.method,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DistanceRecord":
        w = obj.get("witness")
        return cls(int(obj["value"]), obj["provenance"], tuple(w) if w is not None else None, obj.get("method", ""))


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Row space of ``generator`` (stored in reduced row-echelon form)."""

    field: FieldSpec
    generator: np.ndarray
    n: int
    distance: DistanceRecord | None = None

    @classmethod
    def from_generator(cls, field: FieldSpec, rows, n: int | None = None) -> "LinearCode":
        G = np.array(rows, dtype=np.int64)
        if G.ndim == 1:
            G = G.reshape(1, -1) if G.size else np.zeros((0, n or 0), dtype=np.int64)
        if n is None:
            n = G.shape[1]
        if G.shape[1] != n:
            raise ValueError("generator width does not match n")
        if G.size and (G.min() < 0 or G.max() >= field.q):
            raise ValueError(f"generator entries outside {field!r}")
        R, rank = rref(field, G) if len(G) else (G, 0)
        R = np.array(R[:rank])
        R.flags.writeable = False
        return cls(field, R, n)

    @classmethod
    def from_parity_check(cls, field: FieldSpec, H, n: int | None = None) -> "LinearCode":
        H = np.array(H, dtype=np.int64)
        if n is None:
            n = H.shape[1]
        if H.size == 0:
            H = np.zeros((0, n), dtype=np.int64)
        return cls.from_generator(field, null_space(field, H), n)

    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> "LinearCode":
        return cls.from_generator(field, np.zeros((0, n), dtype=np.int64), n)

    @property
    def k(self) -> int:
        return int(self.generator.shape[0])

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def degenerate(self) -> bool:
        return self.k == 0 or self.k == self.n

    @cached_property
    def parity_check(self) -> np.ndarray:
        """Generator of the dual code, in reduced echelon form."""
        if self.k == 0:
            H = np.eye(self.n, dtype=np.int64)
        elif self.k == self.n:
            H = np.zeros((0, self.n), dtype=np.int64)
        else:
            H = null_space(self.field, self.generator)
        H.flags.writeable = False
        return H

    @property
    def d(self) -> int | None:
        return self.distance.value if self.distance else None

    def with_distance(self, rec: DistanceRecord) -> "LinearCode":
        return replace(self, distance=rec)

    def same_space(self, other: "LinearCode") -> bool:
        return (
            self.field == other.field
            and self.n == other.n
            and self.generator.shape == other.generator.shape
            and bool(np.array_equal(self.generator, other.generator))
        )

    def encode(self, msgs) -> np.ndarray:
        return self.field.matmul(np.atleast_2d(msgs), self.generator)

    def __repr__(self):
        d = f", {self.d}" if self.distance else ""
        return f"LinearCode[{self.n}, {self.k}{d}]_{self.q}"

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "n": self.n,
            "k": self.k,
            "generator": self.generator.tolist(),
            "cached_d": self.distance.to_json() if self.distance else None,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LinearCode":
        F = FieldSpec.from_json(obj["field"])
        n = int(obj["n"])
        C = cls.from_generator(F, np.array(obj["generator"], dtype=np.int64).reshape(-1, n), n)
        if C.k != int(obj.get("k", C.k)):
            raise ValueError("generator rank does not match declared k")
        if obj.get("cached_d"):
            C = C.with_distance(DistanceRecord.from_json(obj["cached_d"]))
        return C


def dual_code(C: LinearCode) -> LinearCode:
    return LinearCode.from_generator(C.field, C.parity_check, C.n)


def contains(C: LinearCode, w) -> bool:
    w = np.asarray(w, dtype=np.int64).reshape(-1)
    if w.size != C.n:
        raise ValueError(f"word length {w.size} != code length {C.n}")
    H = C.parity_check
    if H.shape[0] == 0:
        return True
    return not np.any(C.field.matmul(H, w))


def contains_rows(C: LinearCode, W) -> np.ndarray:
    """Vectorised membership for each row of ``W``."""
    W = np.atleast_2d(np.asarray(W, dtype=np.int64))
    H = C.parity_check
    if H.shape[0] == 0:
        return np.ones(len(W), dtype=bool)
    return ~np.any(C.field.matmul(W, H.T), axis=1)


def is_subcode(A: LinearCode, B: LinearCode, strict: bool = False) -> bool:
    if A.n != B.n or A.field != B.field:
        raise ValueError("codes differ in length or field")
    if A.k and not np.all(contains_rows(B, A.generator)):
        return False
    return A.k < B.k if strict else True


# -- enumeration machinery -----------------------------------------------------------

def projective_count(q: int, k: int) -> int:
    return (q**k - 1) // (q - 1)


def _chunk_specs(q: int, k: int, chunk: int = CHUNK) -> list[tuple[int, int, int]]:
    specs = []
    for lead in range(k):
        total = q ** (k - 1 - lead)
        for lo in range(0, total, chunk):
            specs.append((lead, lo, min(total, lo + chunk)))
    return specs


def _messages(q: int, k: int, lead: int, lo: int, hi: int) -> np.ndarray:
    idx = np.arange(lo, hi, dtype=np.int64)
    M = np.zeros((hi - lo, k), dtype=np.int64)
    M[:, lead] = 1
    for j in range(k - 1, lead, -1):
        M[:, j] = idx % q
        idx //= q
    return M


def iter_projective_words(G: np.ndarray, field: FieldSpec) -> Iterator[np.ndarray]:
    """Yield chunks of the codewords ``m G`` with ``m`` projective."""
    k = G.shape[0]
    for lead, lo, hi in _chunk_specs(field.q, k):
        yield field.matmul(_messages(field.q, k, lead, lo, hi), G)


def _scan_min(
    G: np.ndarray,
    field: FieldSpec,
    keep: Callable[[np.ndarray], np.ndarray] | None,
    threads: int | None,
) -> tuple[int, np.ndarray] | None:
    """Minimum weight over projective codewords accepted by ``keep``."""
    k = G.shape[0]
    q = field.q

    def work(spec):
        W = field.matmul(_messages(q, k, *spec), G)
        wts = np.count_nonzero(W, axis=1)
        if keep is not None:
            wts = np.where(keep(W), wts, np.iinfo(np.int64).max)
        i = int(np.argmin(wts))
        return int(wts[i]), W[i]

    specs = _chunk_specs(q, k)
    threads = threads or default_threads()
    if threads > 1 and len(specs) > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(work, specs))
    else:
        results = [work(s) for s in specs]
    best = None
    for w, word in results:  # first strict minimum in spec order: thread-independent
        if best is None or w < best[0]:
            best = (w, word)
    if best is None or best[0] == np.iinfo(np.int64).max:
        return None
    return best


def min_weight(C: LinearCode, budget: int = DEFAULT_BUDGET, threads: int | None = None) -> tuple[int, tuple[int, ...]]:
    """Exact minimum distance by enumerating all ``(q^k-1)/(q-1)`` projective messages."""
    if C.k == 0:
        raise PreconditionError("zero code has no nonzero codeword")
    cost = projective_count(C.q, C.k)
    if cost > budget:
        raise BudgetExceeded("min_weight enumeration", cost, budget)
    w, word = _scan_min(C.generator, C.field, None, threads)
    return w, tuple(int(x) for x in word)


def _full_support_vector(field: FieldSpec, K: np.ndarray, budget: int) -> np.ndarray | None:
    for row in K:
        if np.all(row):
            return row
    if len(K) == 1:
        return None
    cost = projective_count(field.q, len(K))
    if cost > budget:
        raise BudgetExceeded("kernel enumeration", cost, budget)
    for W in iter_projective_words(K, field):
        full = np.flatnonzero(np.all(W != 0, axis=1))
        if full.size:
            return W[full[0]]
    return None


def support_search_cost(n: int, w_max: int) -> int:
    return sum(comb(n, w) for w in range(1, w_max + 1))


def low_weight_search(C: LinearCode, w_max: int, budget: int = DEFAULT_BUDGET) -> list[tuple[int, tuple[int, ...]]]:
    """All weights ``<= w_max`` carried by some codeword, each with a witness.

    A weight-``w`` codeword exists iff some ``w`` parity-check columns admit a
    dependency with every coefficient nonzero.  An empty result proves
    ``d > w_max``.
    """
    cost = support_search_cost(C.n, w_max)
    if cost > budget:
        raise BudgetExceeded("low_weight_search", cost, budget)
    F, H, n = C.field, C.parity_check, C.n
    found = []
    for w in range(1, w_max + 1):
        for S in itertools.combinations(range(n), w):
            K = null_space(F, H[:, S]) if H.shape[0] else np.eye(w, dtype=np.int64)
            if len(K) == 0:
                continue
            vec = _full_support_vector(F, K, budget)
            if vec is None:
                continue
            word = np.zeros(n, dtype=np.int64)
            word[list(S)] = vec
            found.append((w, tuple(int(x) for x in word)))
            break
    return found


def min_weight_support(C: LinearCode, budget: int = DEFAULT_BUDGET) -> tuple[int, tuple[int, ...]]:
    """Minimum distance by support search, stopping at the first hit."""
    if C.k == 0:
        raise PreconditionError("zero code has no nonzero codeword")
    return relative_min_weight(C, LinearCode.zero(C.field, C.n), budget, method="support")


def relative_min_weight(
    C: LinearCode,
    D: LinearCode,
    budget: int = DEFAULT_BUDGET,
    method: str = "auto",
    threads: int | None = None,
) -> tuple[int, tuple[int, ...]]:
    """Minimum weight of ``C \\ D`` for a strict subcode ``D`` of ``C``.

    The witness is re-verified to lie in ``C`` and outside ``D``.
    """
    if C.n != D.n or C.field != D.field:
        raise ValueError("codes differ in length or field")
    if not is_subcode(D, C, strict=True):
        raise PreconditionError("second code is not a strict subcode of the first")
    F, n = C.field, C.n
    if method == "auto":
        method = "enumerate" if C.q**C.k <= min(AUTO_ENUM_LIMIT, budget) else "support"
    if method == "enumerate":
        cost = projective_count(C.q, C.k)
        if cost > budget:
            raise BudgetExceeded("relative weight enumeration", cost, budget)
        best = _scan_min(C.generator, F, lambda W: ~contains_rows(D, W), threads)
        assert best is not None  # D strict subcode guarantees a word outside D
        w, word = best
    elif method == "support":
        H = C.parity_check
        visited = 0
        hit = None
        for w in range(1, n + 1):
            for S in itertools.combinations(range(n), w):
                visited += 1
                if visited > budget:
                    raise BudgetExceeded("relative weight support search", visited, budget)
                K = null_space(F, H[:, S]) if H.shape[0] else np.eye(w, dtype=np.int64)
                if len(K) == 0:
                    continue
                outside = np.flatnonzero(~contains_rows(D, _lift(K, S, n)))
                if outside.size:
                    hit = _lift(K[outside[:1]], S, n)[0]
                    break
            if hit is not None:
                break
        assert hit is not None
        if weight(hit) != w:
            raise VerificationError(f"support search witness has weight {weight(hit)} != {w}")
        word = hit
    else:
        raise ValueError(f"unknown method {method!r}")
    word = np.asarray(word, dtype=np.int64)
    if not contains(C, word) or contains(D, word):
        raise VerificationError("relative weight witness failed membership re-check")
    return int(w), tuple(int(x) for x in word)


def _lift(K: np.ndarray, S: Sequence[int], n: int) -> np.ndarray:
    out = np.zeros((len(K), n), dtype=np.int64)
    out[:, list(S)] = K
    return out


def certify_distance(
    C: LinearCode,
    budget: int = DEFAULT_BUDGET,
    method: str = "auto",
    cross_check: bool = True,
    threads: int | None = None,
) -> LinearCode:
    """Return ``C`` with a certified distance record.

    When both oracles are cheap they are both run and must agree.
    """
    if C.k == 0:
        raise PreconditionError("zero code has no minimum distance")
    enum_ok = C.q**C.k <= min(AUTO_ENUM_LIMIT, budget)
    if method == "auto":
        method = "enumerate" if enum_ok else "support"
    if method == "enumerate":
        d, wit = min_weight(C, budget, threads)
        if cross_check and support_search_cost(C.n, d) <= (1 << 16):
            hits = low_weight_search(C, d, budget)
            if not hits or hits[0][0] != d:
                raise VerificationError(f"oracles disagree on {C!r}: enumeration {d}, support {hits[:1]}")
    else:
        d, wit = min_weight_support(C, budget)
        if cross_check and enum_ok and projective_count(C.q, C.k) <= (1 << 16):
            d2, _ = min_weight(C, budget, threads)
            if d2 != d:
                raise VerificationError(f"oracles disagree on {C!r}: support {d}, enumeration {d2}")
    if weight(wit) != d or not contains(C, wit):
        raise VerificationError("distance witness failed re-check")
    return C.with_distance(DistanceRecord(d, "certified", wit, method))
