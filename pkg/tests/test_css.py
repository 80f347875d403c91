import pytest
from hypothesis import given, settings, strategies as st

from qlrc.css import (
    IMPURE,
    PURE,
    CssQuantumCode,
    LocalityPair,
    QuantumLocalityCertificate,
    all_reports,
    css_compose,
    iter_toy_pairs,
    optimality_from_parameters,
    pure_optimal_check,
    q_cm_bound,
    q_singleton_bound,
    q_singleton_dim_bound,
    q_singleton_rhs,
    quantum_locality_certificate,
    quantum_min_locality,
    toy_pair_codes,
    transfer_reports,
)
from qlrc.errors import PreconditionError
from qlrc.galois import field_for_order
from qlrc.locality import SKIPPED, LocalityRefused
from qlrc.matcode import LinearCode, contains, dual_code, min_weight

F2 = field_for_order(2)
EVEN4 = LinearCode.from_generator(F2, [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])


def test_even_weight_pair_gives_4_2_2():
    Q = css_compose(EVEN4, EVEN4)
    assert (Q.n, Q.kappa, Q.delta.value) == (4, 2, 2)
    assert Q.delta.provenance == "certified" and Q.purity == PURE
    assert repr(Q) == "[[4, 2, 2]]_2"
    for w in Q.delta.witnesses:
        assert contains(EVEN4, w) and not contains(dual_code(EVEN4), w)


def test_self_dual_pair_is_excluded():
    C = LinearCode.from_generator(F2, [[1, 1]])
    with pytest.raises(PreconditionError):
        css_compose(C, C)


def test_non_nested_pair_is_refused():
    C1 = LinearCode.from_generator(F2, [[1, 0, 0], [0, 1, 0]])
    C2 = LinearCode.from_generator(F2, [[1, 1, 0], [0, 1, 1]])
    with pytest.raises(PreconditionError):
        css_compose(C1, C2)


def test_budget_exhaustion_returns_claimed_delta():
    Q = css_compose(EVEN4, EVEN4, budget=2, claimed_delta=2)
    assert Q.delta.provenance == "claimed" and Q.delta.value == 2
    assert not Q.certified
    with pytest.raises(PreconditionError):
        pure_optimal_check(Q, 3)


def test_json_round_trip():
    Q = css_compose(EVEN4, EVEN4)
    Q = Q.with_locality(quantum_locality_certificate(Q, 3))
    back = CssQuantumCode.from_json(Q.to_json())
    assert back.to_json() == Q.to_json()
    assert back.locality.verify(back.C1, back.C2)


def test_locality_pairs_are_normalised_and_checked():
    F = field_for_order(5)
    C = LinearCode.from_generator(F, [[1, 0, 0, 1], [0, 1, 0, 2], [0, 0, 1, 3]])
    Q = css_compose(C, C)
    cert = quantum_locality_certificate(Q, 3)
    assert cert.verify(Q.C1, Q.C2)
    assert all(p.word1[p.coordinate] == 1 == p.word2[p.coordinate] for p in cert.pairs)
    # scaling a witness by 2 keeps it a dual codeword but breaks normalisation
    p0 = cert.pairs[0]
    scaled = LocalityPair(p0.coordinate, tuple(int(x) * 2 % 5 for x in p0.word1), p0.word2)
    assert not QuantumLocalityCertificate(3, (scaled,) + cert.pairs[1:]).verify(Q.C1, Q.C2)
    assert QuantumLocalityCertificate(3, (scaled,) + cert.pairs[1:], normalized=False).verify(Q.C1, Q.C2)


def test_locality_refused_when_too_small():
    Q = css_compose(EVEN4, EVEN4)
    with pytest.raises(LocalityRefused):
        quantum_locality_certificate(Q, 2)


def test_asymmetric_search_matches_toy_locality():
    pairs = [p for p in iter_toy_pairs(4) if p.r is not None and p.A and len(p.A) != 4 - len(p.B)]
    assert pairs
    for p in pairs[:40]:
        C1, C2 = toy_pair_codes(p)
        Q = css_compose(C1, C2)
        assert quantum_min_locality(Q).r == p.r


@pytest.mark.parametrize("n", [2, 3, 4])
def test_toy_route_agrees_with_general_route(n):
    for p in iter_toy_pairs(n):
        C1, C2 = toy_pair_codes(p)
        Q = css_compose(C1, C2)
        assert (Q.kappa, Q.delta.value, Q.C1.k, Q.C2.k) == (p.k1 + p.k2 - n, p.delta, p.k1, p.k2)


def test_impure_codes_exist_and_are_flagged():
    # length 5 is the shortest binary length with impure pairs
    found = 0
    for p in iter_toy_pairs(5):
        C1, C2 = toy_pair_codes(p)
        Q = css_compose(C1, C2)
        d = min(min_weight(C1)[0], min_weight(C2)[0])
        assert (Q.purity == IMPURE) == (Q.delta.value > d)
        found += Q.purity == IMPURE
    assert found


# -- bounds -----------------------------------------------------------------------------------

def test_bound_values():
    assert q_singleton_rhs(4, 2, 3) == 4
    assert q_singleton_rhs(28, 20, 6) == 4
    assert q_singleton_bound(12, 6, 5) == 3
    assert q_singleton_dim_bound(12, 3, 5) == 6
    assert q_singleton_dim_bound(5, 3, 4) == 1


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 60), st.integers(1, 10), st.data())
def test_dimension_bound_monotone_in_distance(n, r, data):
    delta = data.draw(st.integers(1, n // 2))
    assert q_singleton_dim_bound(n, delta + 1, r) <= q_singleton_dim_bound(n, delta, r)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 60), st.integers(1, 10), st.data())
def test_distance_bound_monotone_in_dimension(n, r, data):
    kappa = data.draw(st.integers(1, n - 1))
    if kappa + 1 < n:
        assert q_singleton_rhs(n, kappa + 1, r) <= q_singleton_rhs(n, kappa, r)


def test_q_cm_bound_on_even_weight_pair():
    assert q_cm_bound(3, 3, 2, 3, 2) >= 2


def test_reports_need_locality_and_certified_delta():
    Q = css_compose(EVEN4, EVEN4)
    with pytest.raises(PreconditionError):
        all_reports(Q, 3)
    Q = Q.with_locality(quantum_locality_certificate(Q, 3))
    reps = all_reports(Q, 3)
    assert [r.bound for r in reps] == ["C-Singleton", "C-CM", "C-Singleton", "C-CM", "Q-Singleton-dim", "Q-Singleton", "Q-CM"]
    assert not any(r.violated for r in reps)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_no_toy_pair_violates_any_bound(n):
    for p in iter_toy_pairs(n):
        if p.r is None or p.k1 + p.k2 - n < 1:
            continue
        C1, C2 = toy_pair_codes(p)
        Q = css_compose(C1, C2)
        Q = Q.with_locality(quantum_locality_certificate(Q, p.r))
        all_reports(Q, p.r)


def test_transfer_reports_skip_large_fields():
    reps = transfer_reports(13, 4, 3, 3, 2, 3)
    assert [r.verdict for r in reps] == [SKIPPED] * 3
    exact = transfer_reports(2, 4, 3, 3, 2, 3)
    assert all(r.oracle == "exact" and not r.violated for r in exact)


# -- optimality -----------------------------------------------------------------------------

def test_optimality_on_even_weight_pair():
    v = optimality_from_parameters(4, 3, 3, 2, 2, 2, True, 3)
    assert v.distance_form_equality and v.dimension_form_equality and v.conditions and v.consistent


def test_optimality_not_applicable_when_impure():
    v = optimality_from_parameters(4, 3, 3, 1, 1, 2, False, 3)
    assert not v.applicable and v.biconditional_holds is None


def test_unequal_dimensions_break_the_conditions():
    v = optimality_from_parameters(6, 5, 4, 2, 3, 2, True, 5)
    assert v.cond_dimensions is False
    assert v.consistent


def test_pure_optimal_check_on_toy_pairs():
    for n in (3, 4, 5):
        for p in iter_toy_pairs(n):
            if p.r is None or p.k1 + p.k2 - n < 1:
                continue
            C1, C2 = toy_pair_codes(p)
            Q = css_compose(C1, C2)
            if Q.purity != PURE:
                continue
            for r in range(p.r, n):
                pure_optimal_check(Q, r)
