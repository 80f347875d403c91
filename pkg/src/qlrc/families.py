"""The three optimal quantum LRC families and their classical ingredients.

Every builder checks its guards, constructs the codes, and then hands them to
the independent oracles.  A construction-claimed parameter that disagrees with
the certified one raises :class:`VerificationError`.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .css import (
    CssQuantumCode,
    OptimalityVerdict,
    all_reports,
    css_compose,
    pure_optimal_check,
    quantum_locality_certificate,
    transfer_relations_check,
)
from .cyclotomic import (
    CyclicCode,
    DefiningSet,
    bch_bound,
    cyclic_code_build,
    cyclic_locality,
    cyclic_locality_certificate,
    defining_set_make,
    dual_containing_matrix_check,
    is_dual_containing,
)
from .errors import PreconditionError, VerificationError
from .galois import FieldSpec, field_for_order, prime_power
from .locality import (
    BoundReport,
    LocalityCertificate,
    LocalityWitness,
    classify_classical,
    is_singleton_optimal,
    locality_certificate,
)
from .matcode import DEFAULT_BUDGET, LinearCode, certify_distance


def _field(q: int) -> FieldSpec:
    try:
        prime_power(q)
    except ValueError:
        raise PreconditionError(f"q = {q} is not a prime power") from None
    return field_for_order(q)


# -- generalized Reed-Solomon ------------------------------------------------------------

@dataclass(frozen=True)
class GrsSpec:
    k: int
    a: tuple[int, ...]
    v: tuple[int, ...]

    def validate(self, field: FieldSpec):
        n = len(self.a)
        if len(self.v) != n:
            raise PreconditionError("evaluation and multiplier vectors differ in length")
        if len(set(self.a)) != n:
            raise PreconditionError("evaluation points repeat")
        if n > field.q or any(not 0 <= x < field.q for x in self.a + self.v):
            raise PreconditionError("entries outside the field")
        if any(x == 0 for x in self.v):
            raise PreconditionError("zero column multiplier")
        if not 0 <= self.k <= n:
            raise PreconditionError("dimension out of range")


def grs_matrix(field: FieldSpec, k: int, a, v) -> np.ndarray:
    """Rows ``(v_j a_j^i)_j`` for ``i = 0 .. k-1``."""
    return np.array([[field.mul(vj, field.pow(aj, i)) for aj, vj in zip(a, v)] for i in range(k)], dtype=np.int64).reshape(k, len(a))


def grs_build(spec: GrsSpec, field: FieldSpec, budget: int = DEFAULT_BUDGET) -> LinearCode:
    spec.validate(field)
    n = len(spec.a)
    C = LinearCode.from_generator(field, grs_matrix(field, spec.k, spec.a, spec.v), n)
    if C.k != spec.k:
        raise VerificationError("GRS generator is rank deficient")
    if C.k == 0:
        return C
    C = certify_distance(C, budget)
    if C.d != n - spec.k + 1:
        raise VerificationError(f"GRS code has d = {C.d}, expected {n - spec.k + 1}")
    return C


def grs_dual_multipliers(field: FieldSpec, a, v) -> tuple[int, ...]:
    """Multipliers ``v'`` with ``GRS_k(a, v)`` orthogonal to ``GRS_{n-k}(a, v')`` for every ``k``."""
    GrsSpec(0, tuple(a), tuple(v)).validate(field)
    out = []
    for i, (ai, vi) in enumerate(zip(a, v)):
        prod = vi
        for j, aj in enumerate(a):
            if j != i:
                prod = field.mul(prod, field.sub(ai, aj))
        out.append(field.inv(prod))
    n = len(a)
    for k in range(1, n):
        P = field.matmul(grs_matrix(field, k, a, v), grs_matrix(field, n - k, a, out).T)
        if np.any(P):
            raise VerificationError(f"dual multipliers fail orthogonality at k = {k}")
    return tuple(out)


# -- block parity-check LRCs ----------------------------------------------------------------

Blocks = list[tuple[tuple[int, ...], tuple[int, ...]]]


def default_blocks(q: int, d: int, u: int, r: int) -> Blocks:
    """Shared points ``0..r`` for ``d <= 4``; disjoint point sets for ``d >= 5``."""
    if d <= 4:
        return [(tuple(range(r + 1)), (1,) * (r + 1))] * u
    if u * (r + 1) > q:
        raise PreconditionError(f"disjoint blocks need u(r+1) = {u * (r + 1)} <= q = {q}")
    return [(tuple(range(i * (r + 1), (i + 1) * (r + 1))), (1,) * (r + 1)) for i in range(u)]


def check_block_conditions(d: int, r: int, blocks: Blocks):
    """Validate the shared-block rule (``d <= 4``) or the union-size rule (``d >= 5``)."""
    if any(len(a) != r + 1 or len(v) != r + 1 for a, v in blocks):
        raise PreconditionError("every block must have length r + 1")
    if any(len(set(a)) != r + 1 for a, _ in blocks):
        raise PreconditionError("evaluation points repeat within a block")
    if d <= 4:
        if len(set(blocks)) > 1:
            raise PreconditionError("for d <= 4 every block must share the same points and multipliers")
        return
    for size in range(1, (d - 1) // 2 + 1):
        for S in itertools.combinations(range(len(blocks)), size):
            union = set().union(*(blocks[g][0] for g in S))
            if len(union) < r * size + 1:
                raise PreconditionError(f"blocks {S} cover {len(union)} points, need at least {r * size + 1}")


def block_parity_check(field: FieldSpec, d: int, blocks: Blocks) -> np.ndarray:
    """One multiplier row per block, then ``d - 2`` rows of higher GRS powers."""
    u = len(blocks)
    L = len(blocks[0][0])
    H = np.zeros((u + d - 2, u * L), dtype=np.int64)
    for i, (a, v) in enumerate(blocks):
        G = grs_matrix(field, d - 1, a, v)
        H[i, i * L : (i + 1) * L] = G[0]
        H[u:, i * L : (i + 1) * L] = G[1:]
    return H


def _check_lrc_params(q: int, d: int, u: int, r: int):
    if d < 2 or u < 1 or r < 1:
        raise PreconditionError("need d >= 2, u >= 1, r >= 1")
    if not r > d - 2:
        raise PreconditionError("guard r > d-2 violated")
    if r > q - 1:
        raise PreconditionError("guard r <= q-1 violated")


@dataclass(frozen=True, eq=False)
class ClassicalLrc:
    code: LinearCode
    locality: LocalityCertificate
    parity_check: np.ndarray
    reports: tuple[BoundReport, ...]


def _block_certificate(C: LinearCode, H: np.ndarray, u: int, r: int) -> LocalityCertificate:
    ws = tuple(LocalityWitness(j, tuple(int(x) for x in H[j // (r + 1)])) for j in range(C.n))
    cert = LocalityCertificate(r, ws, "block-rows")
    if not cert.verify(C):
        raise VerificationError("block rows are not locality witnesses")
    return cert


def block_lrc_build(q: int, d: int, u: int, r: int, blocks: Blocks | None = None, budget: int = DEFAULT_BUDGET) -> ClassicalLrc:
    """``[u(r+1), ur-d+2, d]`` LRC with locality ``r`` from a block parity-check matrix."""
    _check_lrc_params(q, d, u, r)
    F = _field(q)
    blocks = [(tuple(a), tuple(v)) for a, v in (blocks or default_blocks(q, d, u, r))]
    if len(blocks) != u:
        raise PreconditionError(f"expected {u} blocks, got {len(blocks)}")
    check_block_conditions(d, r, blocks)
    for a, v in blocks:
        GrsSpec(d - 1, a, v).validate(F)
    H = block_parity_check(F, d, blocks)
    n = u * (r + 1)
    C = LinearCode.from_parity_check(F, H, n)
    if C.k != u * r - d + 2:
        raise VerificationError(f"dimension {C.k} differs from ur-d+2 = {u * r - d + 2}")
    C = certify_distance(C, budget)
    if C.d != d:
        raise VerificationError(f"certified distance {C.d} differs from the target {d}")
    cert = _block_certificate(C, H, u, r)
    reports = tuple(classify_classical(C, r, cert))
    if not is_singleton_optimal(n, C.k, C.d, r):
        raise VerificationError("block LRC is not Singleton-optimal")
    return ClassicalLrc(C, cert, H, reports)


# -- family outputs ----------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FamilyBuild:
    family: str
    params: dict
    quantum: CssQuantumCode
    r: int
    reports: tuple[BoundReport, ...]
    verdict: OptimalityVerdict
    checks: dict = dc_field(default_factory=dict)

    @property
    def parameters(self) -> tuple[int, int, int]:
        return self.quantum.n, self.quantum.kappa, self.quantum.delta.value


def _finish(family, params, Q: CssQuantumCode, r: int, claimed: tuple[int, int, int], checks: dict, search_check: bool):
    if not Q.certified:
        raise VerificationError("quantum distance could not be certified")
    if (Q.n, Q.kappa, Q.delta.value) != claimed:
        raise VerificationError(f"certified {(Q.n, Q.kappa, Q.delta.value)} differs from claimed {claimed}")
    if Q.purity != "pure":
        raise VerificationError(f"{Q!r} is not pure")
    if search_check:
        searched = quantum_locality_certificate(Q, r)
        checks["locality_search_agrees"] = searched.verify(Q.C1, Q.C2)
    reports = all_reports(Q, r) + transfer_relations_check(Q, r)
    verdict = pure_optimal_check(Q, r)
    if not (verdict.distance_form_equality and verdict.dimension_form_equality):
        raise VerificationError(f"{Q!r} misses equality: {verdict.to_json()}")
    return FamilyBuild(family, params, Q, r, tuple(reports), verdict, checks)


def css_grs_pair_build(q: int, d: int, u: int, r: int, blocks: Blocks | None = None, budget: int = DEFAULT_BUDGET, search_check: bool = True) -> FamilyBuild:
    """``[[u(r+1), ur-2(d-2)-u, d]]`` pure code from two block LRCs with orthogonal checks."""
    _check_lrc_params(q, d, u, r)
    if not r > 2 * (d - 2) + u:
        raise PreconditionError("guard r>2(d-2)+u violated")
    F = _field(q)
    blocks = [(tuple(a), tuple(v)) for a, v in (blocks or default_blocks(q, d, u, r))]
    primed = [(a, grs_dual_multipliers(F, a, v)) for a, v in blocks]
    L1 = block_lrc_build(q, d, u, r, blocks, budget)
    L2 = block_lrc_build(q, d, u, r, primed, budget)
    H, Hp = L1.parity_check, L2.parity_check
    product = F.matmul(H, Hp.T)
    if np.any(product):
        raise VerificationError("H H'^T is not the zero matrix")
    Q = css_compose(L1.code, L2.code, budget)
    cert = quantum_locality_certificate(
        Q, r, budget, witnesses=[(j, H[j // (r + 1)], Hp[j // (r + 1)]) for j in range(Q.n)]
    )
    Q = Q.with_locality(cert)
    claimed = (u * (r + 1), u * r - 2 * (d - 2) - u, d)
    checks = {"check_product_zero": True, "product_shape": list(product.shape), "dual_multipliers": [list(v) for _, v in primed]}
    return _finish("grs-pair", {"q": q, "d": d, "u": u, "r": r}, Q, r, claimed, checks, search_check)


def _cyclic_pipeline(family, params, q, u, r, D: DefiningSet, claimed, budget, search_check, extra: dict):
    F = _field(q)
    n = u * (r + 1)
    cc: CyclicCode = cyclic_code_build(n, F, D)
    C = certify_distance(cc.code, budget)
    bch = bch_bound(D)
    if bch > C.d:
        raise VerificationError(f"BCH bound {bch} exceeds certified distance {C.d}")
    dual_set = is_dual_containing(D)
    dual_mat = dual_containing_matrix_check(cc)
    if dual_set != dual_mat:
        raise VerificationError("defining-set and matrix dual-containment tests disagree")
    if not dual_set:
        raise VerificationError("cyclic code is not dual-containing")
    if not cyclic_locality(D, u, r):
        raise VerificationError("defining set lacks the locality pattern")
    cert = cyclic_locality_certificate(cc, u, r)
    if search_check:
        locality_certificate(C, r, budget)
    Q = css_compose(C, C, budget)
    qcert = quantum_locality_certificate(Q, r, budget, witnesses=[(w.coordinate, w.word, w.word) for w in cert.witnesses])
    Q = Q.with_locality(qcert)
    checks = {
        "defining_set": D.to_json(),
        "generator_poly": list(cc.generator_poly.coeffs),
        "bch_bound": bch,
        "dual_containing": dual_set,
        "dual_containing_matrix": dual_mat,
        **extra,
    }
    return _finish(family, params, Q, r, claimed, checks, False)


def cyclic_family_one(q: int, u: int, r: int, ell: int, budget: int = DEFAULT_BUDGET, search_check: bool = True) -> FamilyBuild:
    """``[[u(r+1), u(r-1)-2(l-1), l+1]]`` from the cyclic code with defining set ``A | {1..l}``."""
    if min(u, r, ell) < 1:
        raise PreconditionError("u, r, l must be positive")
    if not u + 2 * ell < r + 2:
        raise PreconditionError("guard u+2l<r+2 violated")
    n = u * (r + 1)
    if (q - 1) % n:
        raise PreconditionError("guard u(r+1) | q-1 violated")
    _field(q)
    A = {i * (r + 1) + 1 for i in range(u)}
    B = set(range(1, ell + 1))
    D = defining_set_make(n, q, A | B)
    if D.enlarged:
        raise VerificationError("A | B is not a union of cyclotomic cosets")
    claimed = (n, u * (r - 1) - 2 * (ell - 1), ell + 1)
    build = _cyclic_pipeline("cyclic-1", {"q": q, "u": u, "r": r, "l": ell}, q, u, r, D, claimed, budget, search_check, {})
    if build.checks["bch_bound"] != ell + 1:
        raise VerificationError(f"BCH bound {build.checks['bch_bound']} differs from l+1 = {ell + 1}")
    return build


def solve_singleton_coset(q: int, u: int, r: int) -> int:
    """Smallest ``y`` in ``[0, u-1]`` with ``q(y(r+1)+2) = y(r+1)+2 (mod u(r+1))``."""
    n = u * (r + 1)
    for y in range(u):
        b = y * (r + 1) + 2
        if (q * b - b) % n == 0:
            return y
    raise VerificationError("singleton coset congruence has no solution")


def cyclic_family_two(q: int, u: int, r: int, budget: int = DEFAULT_BUDGET, search_check: bool = True) -> FamilyBuild:
    """``[[u(r+1), u(r-1)-2, 3]]`` from defining set ``A`` plus one singleton coset."""
    if min(u, r) < 1:
        raise PreconditionError("u, r must be positive")
    if not u + 2 < r:
        raise PreconditionError("guard u+2<r violated")
    _field(q)
    if math.gcd(u, q) != 1:
        raise PreconditionError("guard gcd(u,q)=1 violated")
    if (q - 1) % (r + 1):
        raise PreconditionError("guard (r+1) | q-1 violated")
    if (2 * (q - 1) // (r + 1)) % math.gcd(u, q - 1):
        raise PreconditionError("guard gcd(u,q-1) | 2(q-1)/(r+1) violated")
    n = u * (r + 1)
    A = {i * (r + 1) + 1 for i in range(u)}
    y = solve_singleton_coset(q, u, r)
    b = (y * (r + 1) + 2) % n
    DA = defining_set_make(n, q, A)
    DB = defining_set_make(n, q, {b})
    if DA.enlarged or len(DB.members) != 1:
        raise VerificationError("A or B is not closed under multiplication by q")
    D = defining_set_make(n, q, A | {b})
    claimed = (n, u * (r - 1) - 2, 3)
    extra = {"A": sorted(A), "B": [b], "y": y}
    return _cyclic_pipeline("cyclic-2", {"q": q, "u": u, "r": r}, q, u, r, D, claimed, budget, search_check, extra)
