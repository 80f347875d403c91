import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import NaiveField, all_codewords, dot, min_distance
from qlrc.errors import PreconditionError
from qlrc.families import (
    GrsSpec,
    block_lrc_build,
    css_grs_pair_build,
    cyclic_family_one,
    cyclic_family_two,
    default_blocks,
    grs_build,
    grs_dual_multipliers,
    grs_matrix,
    solve_singleton_coset,
)
from qlrc.galois import field_for_order
from qlrc.locality import is_singleton_optimal


def naive(q):
    F = field_for_order(q)
    return NaiveField(F.p, F.modulus)


@pytest.mark.parametrize("q,n,k", [(5, 4, 2), (7, 5, 3), (4, 4, 2), (8, 6, 3), (9, 5, 2)])
def test_grs_is_mds(q, n, k):
    F = field_for_order(q)
    C = grs_build(GrsSpec(k, tuple(range(n)), tuple([1] * n)), F)
    assert C.d == n - k + 1
    assert min_distance(C.generator.tolist(), naive(q)) == n - k + 1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([4, 5, 7, 8, 9]), st.data())
def test_dual_multipliers_give_orthogonal_grs(q, data):
    F = field_for_order(q)
    n = data.draw(st.integers(2, q))
    a = data.draw(st.permutations(range(q)))[:n]
    v = data.draw(st.lists(st.integers(1, q - 1), min_size=n, max_size=n))
    vp = grs_dual_multipliers(F, a, v)
    k = data.draw(st.integers(1, n - 1))
    G = grs_matrix(F, k, a, v).tolist()
    Gp = grs_matrix(F, n - k, a, vp).tolist()
    ref = naive(q)
    assert all(dot(x, y, ref) == 0 for x in G for y in Gp)


def test_grs_spec_validation():
    F = field_for_order(5)
    with pytest.raises(PreconditionError):
        GrsSpec(2, (0, 0, 1), (1, 1, 1)).validate(F)
    with pytest.raises(PreconditionError):
        GrsSpec(2, (0, 1, 2), (1, 0, 1)).validate(F)
    with pytest.raises(PreconditionError):
        GrsSpec(4, (0, 1, 2), (1, 1, 1)).validate(F)


@pytest.mark.parametrize("q,d,u,r", [(4, 2, 1, 3), (7, 3, 1, 4), (5, 3, 2, 3), (7, 4, 2, 5), (11, 5, 2, 4)])
def test_block_lrc_is_singleton_optimal(q, d, u, r):
    L = block_lrc_build(q, d, u, r)
    n = u * (r + 1)
    assert (L.code.n, L.code.k, L.code.d) == (n, u * r - d + 2, d)
    assert is_singleton_optimal(n, L.code.k, L.code.d, r)
    assert L.locality.verify(L.code)
    assert not any(rep.violated for rep in L.reports)


def test_block_lrc_distance_by_brute_force():
    L = block_lrc_build(7, 3, 1, 4)
    words = list(all_codewords(L.code.generator.tolist(), naive(7)))
    assert len(words) == 343
    assert min(sum(1 for x in w if x) for w in words if any(w)) == 3


@pytest.mark.parametrize(
    "args,msg",
    [((7, 3, 1, 1), "r > d-2"), ((4, 2, 1, 4), "r <= q-1"), ((5, 5, 2, 3), "r > d-2")],
)
def test_block_lrc_guards(args, msg):
    with pytest.raises(PreconditionError, match=msg):
        block_lrc_build(*args)


def test_disjoint_blocks_need_enough_points():
    with pytest.raises(PreconditionError):
        default_blocks(7, 5, 2, 4)


def test_shared_blocks_required_for_small_distance():
    blocks = [((0, 1, 2, 3), (1, 1, 1, 1)), ((0, 1, 2, 3), (1, 2, 1, 1))]
    with pytest.raises(PreconditionError):
        block_lrc_build(5, 3, 2, 3, blocks)


# -- quantum families -------------------------------------------------------------------------

def test_grs_pair_instances():
    b = css_grs_pair_build(4, 2, 1, 3)
    assert b.parameters == (4, 2, 2)
    b = css_grs_pair_build(7, 3, 1, 4)
    assert b.parameters == (5, 1, 3)
    assert b.checks["check_product_zero"] and b.checks["locality_search_agrees"]


def test_grs_pair_guard():
    with pytest.raises(PreconditionError, match=r"r>2\(d-2\)\+u"):
        css_grs_pair_build(7, 3, 2, 4)


def test_grs_pair_on_two_blocks():
    b = css_grs_pair_build(8, 2, 2, 5)
    assert b.parameters == (12, 8, 2)
    assert b.verdict.distance_form_equality and b.verdict.dimension_form_equality


@pytest.mark.parametrize("q,u,r,ell,expect", [(13, 1, 3, 1, (4, 2, 2)), (29, 4, 6, 1, (28, 20, 2)), (13, 1, 11, 2, (12, 8, 3)), (13, 2, 5, 1, (12, 8, 2))])
def test_first_cyclic_family(q, u, r, ell, expect):
    b = cyclic_family_one(q, u, r, ell, search_check=False)
    assert b.parameters == expect
    assert b.checks["bch_bound"] == ell + 1
    assert b.checks["dual_containing"] and b.checks["dual_containing_matrix"]


@pytest.mark.parametrize("args,msg", [((13, 3, 3, 1), r"u\+2l<r\+2"), ((11, 1, 3, 1), r"u\(r\+1\) \| q-1")])
def test_first_cyclic_family_guards(args, msg):
    with pytest.raises(PreconditionError, match=msg):
        cyclic_family_one(*args)


def test_second_cyclic_family():
    b = cyclic_family_two(13, 2, 5)
    assert b.parameters == (12, 6, 3)
    assert b.checks["A"] == [1, 7]
    y = b.checks["y"]
    assert b.checks["B"] == [y * 6 + 2]
    assert (13 * b.checks["B"][0]) % 12 == b.checks["B"][0]


def test_singleton_coset_solution_is_smallest():
    y = solve_singleton_coset(13, 2, 5)
    for z in range(y):
        b = z * 6 + 2
        assert (13 * b - b) % 12
    assert ((13 - 1) * (y * 6 + 2)) % 12 == 0


@pytest.mark.parametrize("args,msg", [((13, 3, 4), r"u\+2<r"), ((13, 2, 6), r"\(r\+1\) \| q-1")])
def test_second_cyclic_family_guards(args, msg):
    with pytest.raises(PreconditionError, match=msg):
        cyclic_family_two(*args)


def test_non_prime_power_field_refused():
    with pytest.raises(PreconditionError):
        css_grs_pair_build(6, 2, 1, 3)


def test_family_builds_carry_sound_reports():
    for b in (css_grs_pair_build(4, 2, 1, 3), cyclic_family_one(13, 1, 3, 1), cyclic_family_two(13, 2, 5)):
        assert b.reports and not any(r.violated for r in b.reports)
        assert b.quantum.locality.verify(b.quantum.C1, b.quantum.C2)
        assert np.all(np.asarray(b.quantum.C1.generator) < b.quantum.q)
