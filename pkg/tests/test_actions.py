import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcs_cohomology.abelian import Homomorphism
from lcs_cohomology.actions import (
    ActionError,
    BudgetExceeded,
    EndoActionSpec,
    action_from_endos,
    enumerate_actions_trivial,
    trivial_action,
    unit_roots,
    unit_roots_bruteforce,
    validate_action,
)

from conftest import SMALL_ORDERS, Z, all_actions, brace, cyclic_brace_actions, trivial, trivial_actions


@settings(max_examples=80, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 6), st.integers(1, 6))
def test_unit_roots_closed_form(p, r, eta):
    if p**r > 20000:
        return
    assert unit_roots(p, r, eta) == unit_roots_bruteforce(p, r, eta)


def test_unit_roots_rejects_non_prime():
    with pytest.raises(ValueError):
        unit_roots(4, 1, 1)


@pytest.mark.parametrize("h", SMALL_ORDERS)
@pytest.mark.parametrize("i", [[2], [3], [4]])
def test_enumeration_matches_brute_force(h, i):
    H, I = trivial(*h), Z(*i)
    fast = {(a.diamond_tab.tobytes(), a.yleft_tab.tobytes()) for a in trivial_actions(H, I)}
    slow = {(a.diamond_tab.tobytes(), a.yleft_tab.tobytes()) for a in all_actions(H, I)}
    assert fast == slow


def test_enumeration_is_sorted_and_restriction_is_a_subset():
    H, I = trivial(2, 2), Z(4)
    specs = enumerate_actions_trivial(H, I)
    assert [s.key() for s in specs] == sorted(s.key() for s in specs)
    zero = enumerate_actions_trivial(H, I, restrict_yleft_zero=True)
    assert {s.key() for s in zero} == {s.key() for s in specs if not any(b.matrix.any() for b in s.B)}


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_actions_trivial(trivial(2, 2), Z(2, 2), budget=100)


def test_enumeration_needs_trivial_h():
    with pytest.raises(ActionError):
        enumerate_actions_trivial(brace(4, 2), Z(2))


def test_endo_spec_round_trip():
    H, I = trivial(2, 2), Z(4)
    for spec in enumerate_actions_trivial(H, I):
        assert action_from_endos(H, I, spec).endo_spec().key() == spec.key()


def test_failed_identity_is_named():
    I = Z(4)
    three = Homomorphism.scalar(I, 3)
    one = Homomorphism.scalar(I, 1)
    # A = 3 on Z4 has A^2 = 1 but a B of 1 breaks 2 B = 0
    spec = EndoActionSpec((three,), (one,))
    assert spec.failed_identity((2,)) == "2 B_1 = 0"
    with pytest.raises(ActionError, match="2 B_1 = 0"):
        action_from_endos(trivial(2), I, spec)


def test_validate_action_reports_identity_and_witness():
    H, I = trivial(2), Z(3)
    # row 1 sends both 1 and 2 to 2, so it is not additive
    diamond = np.array([[0, 1, 2], [0, 2, 2]])
    with pytest.raises(ActionError) as exc:
        validate_action(H, I, diamond, np.zeros((3, 2), dtype=int))
    assert "h <> (y+z)" in exc.value.args[0]


def test_trivial_action_on_brace():
    H, I = brace(4, 2), Z(2)
    act = trivial_action(H, I)
    assert act.yleft_zero
    assert (act.diamond_tab == np.arange(I.order)[None, :]).all()


@pytest.mark.parametrize("n,c", [(4, 2), (8, 4), (9, 3)])
def test_actions_on_braces_are_consistent(n, c):
    H, I = brace(n, c), Z(2)
    acts = all_actions(H, I, limit=50)
    assert acts
    for act in acts:
        # each h <> - is an automorphism and the triangle action is a right action of (H, x)
        assert all(sorted(row) == list(range(I.order)) for row in act.diamond_tab)
        T = act.triangle_tab
        assert np.array_equal(T[:, H.times], T[T[:, :, None], np.arange(n)[None, None, :]])


@pytest.mark.parametrize("n,c,i", [(4, 2, 2), (4, 2, 4), (8, 4, 2), (4, 2, 3)])
def test_structured_brace_actions_match_brute_force(n, c, i):
    H, I = brace(n, c), Z(i)
    key = lambda a: (a.diamond_tab.tobytes(), a.yleft_tab.tobytes())
    assert {key(a) for a in cyclic_brace_actions(H, I)} == {key(a) for a in all_actions(H, I)}
