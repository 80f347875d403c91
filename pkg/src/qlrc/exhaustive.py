"""Exhaustive oracles over tiny parameter ranges.

``kopt_exact`` searches reduced echelon generator matrices row by row,
pruning as soon as the partial span already holds a word lighter than the
target distance.  The locality-aware optima ``d_opt``, ``k_opt`` and
``n_opt`` enumerate every subspace of ``GF(q)^L`` for small ``L`` and tabulate
``(dimension, distance, minimal locality)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import OracleInfeasible
from .galois import FieldSpec, field_for_order
from .matcode import iter_projective_words, null_space

KOPT_LOG2_LIMIT = 20


def _gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def kopt_feasible(q: int, n: int) -> bool:
    """Cheap guard: the largest echelon family has about ``q**(n*n/4)`` members."""
    return q ** ((n * n) // 4) <= (1 << KOPT_LOG2_LIMIT)


def _exists_code(field: FieldSpec, n: int, k: int, d: int) -> bool:
    for piv in itertools.combinations(range(n), k):
        pset = set(piv)
        frees = [[c for c in range(p + 1, n) if c not in pset] for p in piv]
        if any(1 + len(f) < d for f in frees):
            continue
        if _extend(field, n, d, piv, frees, 0, np.zeros((1, n), dtype=np.int64)):
            return True
    return False


def _extend(field, n, d, piv, frees, i, span) -> bool:
    if i == len(piv):
        return True
    f = frees[i]
    q = field.q
    cand = np.zeros((q ** len(f), n), dtype=np.int64)
    cand[:, piv[i]] = 1
    idx = np.arange(q ** len(f), dtype=np.int64)
    for j, col in enumerate(f):
        cand[:, col] = (idx // q**j) % q
    # every new word is a multiple of (row + s) for some s in the span
    ok = np.ones(len(cand), dtype=bool)
    for s in span:
        ok &= np.count_nonzero(field.vadd(cand, s[None, :]), axis=1) >= d
        if not ok.any():
            return False
    for row in cand[ok]:
        if _extend(field, n, d, piv, frees, i + 1, _grow(field, span, row)):
            return True
    return False


def _grow(field, span, row):
    layers = [span]
    for c in range(1, field.q):
        layers.append(field.vadd(span, field.vmul(c, row)[None, :]))
    return np.concatenate(layers)


@lru_cache(maxsize=None)
def kopt_exact(q: int, n: int, d: int) -> int:
    """Largest ``k`` such that some ``[n, k, >= d]_q`` linear code exists."""
    if n < d or n <= 0:
        return 0
    if d <= 1:
        return n
    if not kopt_feasible(q, n):
        raise OracleInfeasible(f"kopt_exact(q={q}, n={n}) is beyond the exhaustive guard")
    from .locality import kopt_upper

    field = field_for_order(q)
    for k in range(kopt_upper(q, n, d), 0, -1):
        if _exists_code(field, n, k, d):
            return k
    return 0  # pragma: no cover - the repetition code always exists


# -- locality-aware optima --------------------------------------------------------

def iter_subspaces(field: FieldSpec, L: int, k: int):
    """Yield every ``k``-dimensional subspace of ``GF(q)^L`` as an echelon basis."""
    q = field.q
    for piv in itertools.combinations(range(L), k):
        pset = set(piv)
        frees = [[c for c in range(p + 1, L) if c not in pset] for p in piv]
        slots = [(i, c) for i, f in enumerate(frees) for c in f]
        for vals in itertools.product(range(q), repeat=len(slots)):
            G = np.zeros((k, L), dtype=np.int64)
            for i, p in enumerate(piv):
                G[i, p] = 1
            for (i, c), v in zip(slots, vals):
                G[i, c] = v
            yield G


def _min_locality(field: FieldSpec, G: np.ndarray) -> int | None:
    """Smallest ``r`` such that every coordinate lies in a dual word of weight ``<= r+1``."""
    L = G.shape[1]
    H = null_space(field, G)
    if len(H) == 0:
        return None
    best = np.full(L, L + 1)
    for W in iter_projective_words(H, field):
        wts = np.count_nonzero(W, axis=1)
        for j in range(L):
            m = wts[W[:, j] != 0]
            if m.size:
                best[j] = min(best[j], int(m.min()))
    if np.any(best > L):
        return None
    return max(int(best.max()) - 1, 0)


@dataclass(frozen=True)
class CodeRecord:
    length: int
    k: int
    d: int
    locality: int | None


@lru_cache(maxsize=None)
def code_table(q: int, L: int) -> tuple[CodeRecord, ...]:
    """Every nonzero linear code of length ``L`` over GF(q)."""
    field = field_for_order(q)
    out = []
    for k in range(1, L + 1):
        for G in iter_subspaces(field, L, k):
            d = min(int(np.count_nonzero(W, axis=1).min()) for W in iter_projective_words(G, field))
            out.append(CodeRecord(L, k, d, _min_locality(field, G)))
    return tuple(out)


def locality_oracle_feasible(q: int, L: int) -> bool:
    total = sum(_gaussian_binomial(L, k, q) for k in range(1, L + 1))
    return total <= 40_000


def _records(q: int, L: int, r: int):
    if L <= 0:
        return ()
    if not locality_oracle_feasible(q, L):
        raise OracleInfeasible(f"locality optima over GF({q})^{L} are beyond the exhaustive guard")
    return tuple(c for c in code_table(q, L) if c.locality is not None and c.locality <= r)


def dopt_local(q: int, L: int, k: int, r: int) -> int | None:
    """Largest distance of an ``[L, k]_q`` code with locality ``r`` (None if none exists)."""
    ds = [c.d for c in _records(q, L, r) if c.k == k]
    return max(ds) if ds else None


def kopt_local(q: int, L: int, d: int, r: int) -> int | None:
    """Largest dimension of an ``[L, k, >= d]_q`` code with locality ``r``."""
    ks = [c.k for c in _records(q, L, r) if c.d >= d]
    return max(ks) if ks else None


def nopt_local(q: int, k: int, d: int, r: int, max_length: int) -> int | None:
    """Smallest length ``<= max_length`` of a ``[L, k, >= d]_q`` code with locality ``r``."""
    for L in range(max(k, 1), max_length + 1):
        if any(c.k == k and c.d >= d for c in _records(q, L, r)):
            return L
    return None
