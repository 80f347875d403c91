import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField, binary_table, min_locality as ref_min_locality
from qlrc.errors import PreconditionError, VerificationError
from qlrc.exhaustive import dopt_local, kopt_local, nopt_local
from qlrc.galois import field_for_order
from qlrc.locality import (
    EQUALITY,
    SKIPPED,
    STRICT,
    VIOLATED,
    BoundReport,
    LocalityCertificate,
    LocalityRefused,
    LocalityWitness,
    classical_reports,
    classify_classical,
    cm_bound,
    is_singleton_optimal,
    locality_certificate,
    min_locality,
    require_sound,
    singleton_like_bound,
)
from qlrc.matcode import LinearCode, certify_distance

EVEN4 = [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]]


def test_even_weight_code_has_locality_three():
    C = LinearCode.from_generator(field_for_order(2), EVEN4)
    cert = locality_certificate(C, 3)
    assert cert.verify(C)
    assert all(w.weight == 4 for w in cert.witnesses)
    with pytest.raises(LocalityRefused):
        locality_certificate(C, 2)


def test_full_space_has_no_locality():
    C = LinearCode.from_generator(field_for_order(3), np.eye(3, dtype=int))
    with pytest.raises(LocalityRefused):
        locality_certificate(C, 2)


def test_tampered_certificate_is_rejected():
    C = LinearCode.from_generator(field_for_order(2), EVEN4)
    cert = locality_certificate(C, 3)
    bad = LocalityWitness(0, (1, 1, 0, 0))
    forged = LocalityCertificate(3, (bad,) + cert.witnesses[1:])
    assert not forged.verify(C)
    assert not LocalityCertificate(3, cert.witnesses[:3]).verify(C)


def test_certificate_json_round_trip():
    C = LinearCode.from_generator(field_for_order(5), [[1, 0, 1, 1], [0, 1, 1, 2]])
    cert = min_locality(C)
    back = LocalityCertificate.from_json(cert.to_json())
    assert back == cert and back.verify(C)


@st.composite
def codes_with_small_dual(draw):
    q = draw(st.sampled_from([2, 3, 4]))
    n = draw(st.integers(3, 6))
    k = draw(st.integers(1, n - 1))
    rows = draw(st.lists(st.lists(st.integers(0, q - 1), min_size=n, max_size=n), min_size=k, max_size=k))
    return field_for_order(q), rows


@settings(max_examples=80, deadline=None)
@given(codes_with_small_dual())
def test_min_locality_matches_reference(code):
    F, rows = code
    C = LinearCode.from_generator(F, rows)
    if C.k == C.n or C.q**C.n > 5000:
        return
    ref = ref_min_locality(C.generator.tolist(), C.n, NaiveField(F.p, F.modulus))
    if ref is None:
        with pytest.raises(LocalityRefused):
            min_locality(C)
        return
    cert = min_locality(C)
    assert cert.r == max(1, ref)
    assert cert.verify(C)
    # the support route agrees with the enumeration route at the same r
    assert locality_certificate(C, cert.r).verify(C)
    if cert.r > 1:
        with pytest.raises(LocalityRefused):
            locality_certificate(C, cert.r - 1)


# -- bounds ----------------------------------------------------------------------------------

def test_singleton_like_values():
    assert singleton_like_bound(5, 3, 4) == 3  # 5 - 3 - 1 + 2
    assert singleton_like_bound(12, 6, 3) == 6  # 12 - 6 - 2 + 2
    assert singleton_like_bound(4, 3, 3) == 2
    with pytest.raises(ValueError):
        singleton_like_bound(4, 0, 2)


def test_is_singleton_optimal():
    assert is_singleton_optimal(5, 3, 3, 4)
    assert not is_singleton_optimal(5, 3, 2, 4)


@pytest.mark.parametrize("n", range(2, 7))
def test_bounds_hold_for_every_binary_code_with_locality(n):
    for k, d, loc in binary_table(n):
        if loc is None or k == n:
            continue
        r = max(loc, 1)
        assert d <= singleton_like_bound(n, k, r)
        assert k <= cm_bound(n, d, r, 2)
        assert not any(rep.violated for rep in classical_reports(n, k, d, r, 2))


@pytest.mark.parametrize("n", range(2, 6))
def test_local_optima_match_binary_table(n):
    table = [(k, d, loc) for k, d, loc in binary_table(n) if loc is not None]
    for r in range(1, n):
        ok = [(k, d) for k, d, loc in table if loc <= r]
        for k in range(1, n + 1):
            ds = [d for kk, d in ok if kk == k]
            assert dopt_local(2, n, k, r) == (max(ds) if ds else None)
        for d in range(1, n + 1):
            ks = [kk for kk, dd in ok if dd >= d]
            assert kopt_local(2, n, d, r) == (max(ks) if ks else None)


def test_nopt_local_smallest_length():
    # a single parity check over k+1 symbols gives locality k and distance 2
    assert nopt_local(2, 2, 2, 2, 6) == 3
    assert nopt_local(2, 2, 2, 1, 6) == 4
    assert nopt_local(2, 5, 3, 1, 4) is None


def test_report_verdicts():
    assert BoundReport("x", {}, 5, 5).verdict == EQUALITY
    assert BoundReport("x", {}, 5, 4).verdict == STRICT
    assert BoundReport("x", {}, 5, 6).verdict == VIOLATED
    assert BoundReport("x", {}, None, 6, SKIPPED).verdict == SKIPPED


def test_report_rejects_inconsistent_stored_verdict():
    with pytest.raises(VerificationError):
        BoundReport("x", {}, 5, 6, verdict=EQUALITY)


def test_report_json_round_trip():
    rep = BoundReport("C-CM", {"n": 5, "d": 3, "r": 4, "q": 7}, 3, 3, "exact")
    assert BoundReport.from_json(rep.to_json()) == rep


def test_require_sound_raises_on_violation():
    with pytest.raises(VerificationError):
        require_sound([BoundReport("x", {}, 1, 2)])


def test_classify_needs_certified_distance():
    C = LinearCode.from_generator(field_for_order(2), EVEN4)
    cert = locality_certificate(C, 3)
    with pytest.raises(PreconditionError):
        classify_classical(C, 3, cert)
    reps = classify_classical(certify_distance(C), 3, cert)
    assert [r.verdict for r in reps] == [EQUALITY, EQUALITY]
