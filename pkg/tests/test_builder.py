import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcs_cohomology.abelian import Homomorphism
from lcs_cohomology.actions import EndoActionSpec, action_from_endos, trivial_action
from lcs_cohomology.builder import (
    BuilderError,
    CocycleSeed,
    binom_alt_sum,
    build_T_bundle,
    check_T1,
    cocycle_from_seed,
    compute_h2,
    f_table,
    is_coboundary,
    kernel_seeds,
)

from conftest import Z, brace, cyclic_brace_actions, trivial, trivial_actions


def cyclic_action(H, I, a, b=0):
    """A_i = a, B_i = b on every factor."""
    spec = EndoActionSpec(
        tuple(Homomorphism.scalar(I, a) for _ in H.additive.orders),
        tuple(Homomorphism.scalar(I, b) for _ in H.additive.orders),
    )
    return action_from_endos(H, I, spec)


def seed(I, gamma, fgen):
    return CocycleSeed(tuple((g,) for g in gamma), tuple(tuple((x,) for x in row) for row in fgen))


@pytest.fixture
def z2_z4_minus_one():
    H, I = trivial(2), Z(4)
    return H, I, cyclic_action(H, I, 3)


def test_trivial_h2_z2_z2():
    H, I = trivial(2), Z(2)
    assert compute_h2(H, I, trivial_action(H, I)).invariant_factors == (2, 2)


def test_all_maps_vanish_for_elementary_coefficients():
    H, I = trivial(3, 3), Z(3)
    b = build_T_bundle(H, I, trivial_action(H, I))
    for M in (b.T1, b.T2, b.T3, b.S):
        assert not M.matrix.any()


def test_single_generator_has_no_commutator_condition(z2_z4_minus_one):
    b = build_T_bundle(*z2_z4_minus_one)
    assert b.n == b.s == 1
    assert b.T3.codomain.rank == 0


def test_z2_z4_minus_one(z2_z4_minus_one):
    H, I, act = z2_z4_minus_one
    b = build_T_bundle(H, I, act)
    # S(t) = (2t, 2t) and the norm 1 + 3 kills T2
    assert b.S((1,)) == (2, 2)
    assert not b.T2.matrix.any()
    assert compute_h2(H, I, act).order == 4
    assert check_T1(seed(I, [1], [[0]]), H, I, act) == [(2,)]
    assert is_coboundary(seed(I, [2], [[2]]), H, I, act) in [((1,),), ((3,),)]
    # (0, 2) satisfies the kernel conditions but is not S of anything
    assert check_T1(seed(I, [0], [[2]]), H, I, act) == [(0,)]
    assert is_coboundary(seed(I, [0], [[2]]), H, I, act) is None


def test_zero_seed_gives_zero_pair(z2_z4_minus_one):
    H, I, act = z2_z4_minus_one
    pair = cocycle_from_seed(CocycleSeed.zero(I, 1, 1), H, I, act)
    assert pair.alpha.is_zero() and not pair.f_table.any()
    assert is_coboundary(CocycleSeed.zero(I, 1, 1), H, I, act) == ((0,),)


def test_seed_outside_kernel_names_the_condition(z2_z4_minus_one):
    H, I, act = z2_z4_minus_one
    with pytest.raises(BuilderError) as exc:
        cocycle_from_seed(seed(I, [1], [[0]]), H, I, act)
    assert exc.value.condition == "T1"


def test_trivial_action_f_is_bilinear():
    H, I = trivial(4), Z(4)
    pair = cocycle_from_seed(seed(I, [0], [[1]]), H, I, trivial_action(H, I))
    h = np.arange(4)
    assert np.array_equal(pair.f_table, np.outer(h, h) % 4)


def test_minus_one_action_f_depends_on_parity():
    H, I = trivial(4), Z(4)
    pair = cocycle_from_seed(seed(I, [0], [[1]]), H, I, cyclic_action(H, I, 3))
    h = np.arange(4)
    expected = np.where(h[:, None] % 2 == 1, h[None, :], 0) % 4
    assert np.array_equal(pair.f_table, expected)


def test_binom_alt_sum():
    assert binom_alt_sum(1, 0) == 1
    # C(2,2) - C(3,2)
    assert binom_alt_sum(4, 2) == -2
    for eta in range(1, 6):
        assert binom_alt_sum(2**eta, 0) == 0
        assert binom_alt_sum(2**eta, 1) == -(2 ** (eta - 1))


@pytest.mark.parametrize("eta", range(1, 6))
def test_binom_alt_sum_power_of_two_closed_form(eta):
    from fractions import Fraction
    from math import comb

    n = 2**eta
    for l in range(1, n):
        closed = sum(comb(n, i) * Fraction(-1, 2) ** (l + 1 - i) for i in range(1, l + 1))
        assert binom_alt_sum(n, l) == closed


def test_seed_vector_round_trip():
    I = Z(2, 4)
    s = CocycleSeed(((1, 3), (0, 2)), (((1, 1), (0, 0)),))
    assert CocycleSeed.from_vector(I, 2, 1, s.to_vector()) == s


def test_representative_coordinates_round_trip():
    H, I = trivial(2, 2), Z(4)
    for act in trivial_actions(H, I)[::7]:
        for order in ("lex", "snf"):
            h2 = compute_h2(H, I, act, seed_order=order)
            coords = [c for c, _ in h2.representatives()]
            assert len(set(coords)) == h2.order
            for c, s in h2.representatives():
                assert h2.coordinates(s) == tuple(c)


def test_seed_order_changes_representatives_not_the_group():
    H, I = trivial(4), Z(4)
    act = cyclic_action(H, I, 3)
    lex, snf = compute_h2(H, I, act, "lex"), compute_h2(H, I, act, "snf")
    assert lex.invariant_factors == snf.invariant_factors
    for (c1, s1), (c2, s2) in zip(lex.representatives(), snf.representatives()):
        assert c1 == c2 and is_coboundary(_diff(I, s1, s2), H, I, act) is not None
    # lex picks the smallest seed vector in each coset
    assert all(s.to_vector() <= t.to_vector() for (_, s), (_, t) in zip(lex.representatives(), snf.representatives()))


def _diff(I, a, b):
    n, s = a.n, a.s
    va, vb = np.array(a.to_vector()), np.array(b.to_vector())
    return CocycleSeed.from_vector(I, n, s, list(np.asarray(I.power(n + n * s).reduce_array((va - vb)[None, :]))[0]))


NONTRIVIAL = [(brace(4, 2), Z(2)), (brace(4, 2), Z(4)), (brace(4, 2), Z(2, 2)), (brace(8, 4), Z(4)), (brace(9, 3), Z(3)),
              (brace(16, 8), Z(8))]


@pytest.mark.parametrize("case", range(len(NONTRIVIAL)))
def test_nontrivial_h_representatives_verify(case):
    H, I = NONTRIVIAL[case]
    for act in cyclic_brace_actions(H, I):
        h2 = compute_h2(H, I, act)
        for _, s in h2.representatives():
            pair = cocycle_from_seed(s, H, I, act)
            assert pair.violations() == []
            assert np.array_equal(f_table(s, H, I, act, "product"), pair.f_table)
        with pytest.raises(BuilderError):
            f_table(CocycleSeed.zero(I, h2.bundle.n, h2.bundle.s), H, I, act, "closed")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([([2, 2], [4]), ([4], [2, 2]), ([2, 4], [2]), ([3], [3]), ([8], [4])]),
       st.integers(0, 10**6), st.integers(0, 10**6))
def test_random_coboundary_is_recognised(shape, pick, tseed):
    h, i = shape
    H, I = trivial(*h), Z(*i)
    acts = trivial_actions(H, I)
    act = acts[pick % len(acts)]
    b = build_T_bundle(H, I, act)
    rng = np.random.default_rng(tseed)
    t = tuple(int(c) for c in rng.integers(0, 1 << 20, b.S.domain.rank) % np.array(b.S.domain.orders))
    s = CocycleSeed.from_vector(I, b.n, b.s, b.S(t))
    w = is_coboundary(s, H, I, act, b)
    assert w is not None
    assert b.S(tuple(c for x in w for c in x)) == b.S(t)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([([2, 2], [4]), ([4], [4]), ([2], [2, 2]), ([4], [2])]), st.integers(0, 10**6))
def test_kernel_seeds_satisfy_every_identity(shape, pick):
    h, i = shape
    H, I = trivial(*h), Z(*i)
    acts = trivial_actions(H, I)
    act = acts[pick % len(acts)]
    b = build_T_bundle(H, I, act)
    seeds = kernel_seeds(b)
    for vec in seeds[:: max(1, len(seeds) // 8)]:
        s = CocycleSeed.from_vector(I, b.n, b.s, [int(v) for v in vec])
        pair = cocycle_from_seed(s, H, I, act)
        assert pair.violations() == []
        for path in ("product", "closed"):
            assert np.array_equal(f_table(s, H, I, act, path), pair.f_table)
