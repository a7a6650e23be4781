import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcs_cohomology.abelian import check_group_table
from lcs_cohomology.cycleset import LCSError, center, classify_subgroup, socle, validate_lcs

from conftest import Z, brace, brace_dot, trivial

# (n, c) with c^2 = 0 mod n, so x(h, l) = h + l + c h l is a brace on Z_n
BRACES = [(n, c) for n in range(2, 33) for c in range(n) if (c * c) % n == 0]


def test_trivial_cycle_set():
    H = trivial(2, 2)
    assert H.is_trivial
    assert np.array_equal(H.times, H.add)
    assert socle(H).members == tuple(range(4))
    assert center(H).is_central


def test_brace_adjoint_differs_from_additive_group():
    H = brace(4, 2)
    assert not H.is_trivial
    # 1 x 1 = 1 + 1 + 2 = 0 mod 4, so the adjoint group is Z2 + Z2
    assert H.times_op(1, 1) == 0
    assert sorted(H.adjoint_orders) == [2, 2]


def test_broken_dot_names_axiom_and_witness():
    dot = brace_dot(4, 2)
    dot[1, [2, 3]] = dot[1, [3, 2]]
    with pytest.raises(LCSError) as exc:
        validate_lcs(Z(4), dot)
    assert exc.value.axiom and exc.value.witness


def test_dot_shape_is_checked():
    with pytest.raises(LCSError, match="shape"):
        validate_lcs(Z(4), np.zeros((3, 3), dtype=int))


def test_yleft_vanishes_exactly_on_socle():
    H = brace(8, 4)
    soc = set(socle(H).members)
    for y in range(H.order):
        zero = all(H.yleft(y, h) == 0 for h in range(H.order))
        assert zero == (y in soc)


def test_subgroup_that_is_not_closed_is_rejected():
    from lcs_cohomology.abelian import GroupError

    with pytest.raises(GroupError):
        classify_subgroup(trivial(4), [0, 1])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BRACES))
def test_brace_tables_satisfy_axioms(nc):
    n, c = nc
    H = brace(n, c)
    idx = np.arange(n)
    # bijective left translations and (h+l).m = (h.l).(h.m)
    assert all(sorted(row) == list(idx) for row in H.dot)
    lhs = H.dot[H.add[:, :, None], idx[None, None, :]]
    rhs = H.dot[H.dot[:, :, None], H.dot[:, None, :]]
    assert np.array_equal(lhs, rhs)
    # the adjoint operation is an abelian group with identity 0
    assert check_group_table(H.times) == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(BRACES), st.integers(1, 32))
def test_ideal_flags_match_definition(nc, step):
    n, c = nc
    H = brace(n, c)
    members = sorted({(k * step) % n for k in range(n)})
    w = classify_subgroup(H, members)
    S = set(members)
    stable = all(H.dot[h, y] in S for h in range(n) for y in members)
    yl = all(H.yleft(y, h) in S for y in members for h in range(n))
    assert w.is_ideal == (stable and yl)
