import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField, binary_table, dual_words, min_distance, rank_mod_p
from qlrc.errors import BudgetExceeded, PreconditionError
from qlrc.exhaustive import kopt_exact, kopt_feasible
from qlrc.galois import field_for_order
from qlrc.locality import kopt_upper
from qlrc.matcode import (
    LinearCode,
    certify_distance,
    contains,
    dual_code,
    is_subcode,
    low_weight_search,
    min_weight,
    min_weight_support,
    null_space,
    relative_min_weight,
    rref,
    weight,
)


def naive(F):
    return NaiveField(F.p, F.modulus)


@st.composite
def small_codes(draw, orders=(2, 3, 4, 5, 7)):
    q = draw(st.sampled_from(orders))
    n = draw(st.integers(2, 6))
    k = draw(st.integers(1, min(n, 3)))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    return field_for_order(q), rows


def test_rref_of_identity_and_rank():
    F = field_for_order(7)
    R, rank = rref(F, [[2, 4, 6], [1, 2, 3], [0, 1, 1]])
    assert rank == 2
    assert R[:2].tolist() == [[1, 0, 1], [0, 1, 1]]


@settings(max_examples=100, deadline=None)
@given(small_codes(orders=(2, 3, 5, 7)))
def test_rref_rank_matches_reference(code):
    F, rows = code
    _, rank = rref(F, rows)
    assert rank == rank_mod_p(rows, F.p)


@settings(max_examples=100, deadline=None)
@given(small_codes())
def test_null_space_is_orthogonal_with_complementary_dimension(code):
    F, rows = code
    C = LinearCode.from_generator(F, rows)
    K = null_space(F, C.generator)
    assert len(K) == C.n - C.k
    if len(K):
        assert not np.any(F.matmul(C.generator, K.T))


@settings(max_examples=60, deadline=None)
@given(small_codes())
def test_dual_is_an_involution(code):
    F, rows = code
    C = LinearCode.from_generator(F, rows)
    assert dual_code(dual_code(C)).same_space(C)
    assert dual_code(C).k == C.n - C.k


@settings(max_examples=60, deadline=None)
@given(small_codes(orders=(2, 3, 4)))
def test_dual_matches_brute_force(code):
    F, rows = code
    C = LinearCode.from_generator(F, rows)
    if C.q**C.n > 4096:
        return
    brute = set(dual_words(C.generator.tolist(), C.n, naive(F)))
    assert len(brute) == C.q ** (C.n - C.k)
    assert all(contains(dual_code(C), w) for w in brute)


@settings(max_examples=80, deadline=None)
@given(small_codes())
def test_both_distance_oracles_match_reference(code):
    F, rows = code
    C = LinearCode.from_generator(F, rows)
    if C.k == 0:
        return
    ref = min_distance(C.generator.tolist(), naive(F))
    d1, w1 = min_weight(C)
    d2, w2 = min_weight_support(C)
    assert d1 == d2 == ref
    assert weight(w1) == weight(w2) == ref
    assert contains(C, w1) and contains(C, w2)


def test_repetition_and_parity_codes():
    F = field_for_order(2)
    rep = certify_distance(LinearCode.from_generator(F, [[1] * 5]))
    assert (rep.k, rep.d) == (1, 5)
    par = certify_distance(dual_code(rep))
    assert (par.k, par.d) == (4, 2)


def test_low_weight_search_on_hamming_code():
    F = field_for_order(2)
    H = [[int(b) for b in f"{c:03b}"] for c in range(1, 8)]
    C = LinearCode.from_parity_check(F, np.array(H).T)
    assert C.k == 4
    hits = low_weight_search(C, 3)
    assert [w for w, _ in hits] == [3]
    assert contains(C, hits[0][1])


def test_min_weight_budget_is_enforced():
    F = field_for_order(7)
    C = LinearCode.from_generator(F, np.eye(6, dtype=int))
    with pytest.raises(BudgetExceeded):
        min_weight(C, budget=10)


def test_zero_code_has_no_distance():
    with pytest.raises(PreconditionError):
        min_weight(LinearCode.zero(field_for_order(3), 4))


def test_relative_weight_exceeds_subcode_distance():
    # C = even-weight [4,3]; D = repetition [4,1] has weight 4; C \ D has weight 2
    F = field_for_order(2)
    C = LinearCode.from_generator(F, [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
    D = LinearCode.from_generator(F, [[1, 1, 1, 1]])
    assert is_subcode(D, C, strict=True)
    for method in ("enumerate", "support"):
        w, word = relative_min_weight(C, D, method=method)
        assert w == 2 and contains(C, word) and not contains(D, word)


def test_relative_weight_requires_strict_subcode():
    F = field_for_order(2)
    C = LinearCode.from_generator(F, [[1, 1, 1, 1]])
    with pytest.raises(PreconditionError):
        relative_min_weight(C, C)


def test_relative_weight_can_exceed_plain_distance():
    # C \ D = {00111, 11111}, while C itself holds 11000
    F = field_for_order(2)
    C = LinearCode.from_generator(F, [[1, 1, 0, 0, 0], [0, 0, 1, 1, 1]])
    D = LinearCode.from_generator(F, [[1, 1, 0, 0, 0]])
    w, _ = relative_min_weight(C, D)
    assert w == 3 and min_weight(C)[0] == 2


def test_json_round_trip_keeps_distance():
    F = field_for_order(4)
    C = certify_distance(LinearCode.from_generator(F, [[1, 0, 1, 1], [0, 1, 2, 3]]))
    back = LinearCode.from_json(C.to_json())
    assert back.same_space(C) and back.distance == C.distance


# -- dimension optima ---------------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 7))
def test_kopt_exact_matches_binary_subspace_table(n):
    table = binary_table(n)
    for d in range(1, n + 1):
        expect = max((k for k, dd, _ in table if dd >= d), default=0)
        assert kopt_exact(2, n, d) == expect


@pytest.mark.parametrize("q,n", [(2, 7), (2, 8), (3, 5), (3, 6), (4, 4), (4, 5), (5, 4)])
def test_kopt_upper_dominates_exact(q, n):
    assert kopt_feasible(q, n)
    for d in range(1, n + 1):
        assert kopt_upper(q, n, d) >= kopt_exact(q, n, d)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4]), st.integers(1, 6), st.data())
def test_kopt_is_monotone(q, n, data):
    if not kopt_feasible(q, n + 1):
        return
    d = data.draw(st.integers(1, n))
    assert kopt_exact(q, n, d) >= kopt_exact(q, n, d + 1) if d < n else True
    assert kopt_exact(q, n + 1, d) >= kopt_exact(q, n, d)
    assert kopt_upper(q, n, d) >= kopt_upper(q, n, d + 1)
