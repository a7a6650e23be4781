import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcs_cohomology.abelian import (
    FiniteAbelianGroup,
    GroupError,
    Homomorphism,
    Subgroup,
    _snf_columns,
    check_group_table,
    image,
    invariant_factors_from_orders,
    kernel,
    preimage,
    structure_from_table,
    subgroup_by_enumeration,
    subquotient,
)

orders_st = st.lists(st.sampled_from([2, 3, 4, 6, 8, 9]), min_size=1, max_size=3)


def is_chain(factors):
    return all(b % a == 0 for a, b in zip(factors, factors[1:])) and all(f > 1 for f in factors)


def test_mixed_group_addition():
    G = FiniteAbelianGroup([2, 3])
    assert G.add((1, 2), (1, 2)) == (0, 1)
    assert G.order == 6 and G.exponent == 6
    assert G.element_order((1, 1)) == 6


def test_index_order_is_lexicographic():
    G = FiniteAbelianGroup([2, 3])
    assert [G.element_at(i) for i in range(6)] == list(itertools.product(range(2), range(3)))
    assert G.index(G.zero()) == 0


def test_rejects_trivial_cyclic_factor():
    with pytest.raises(GroupError):
        FiniteAbelianGroup([1, 2])


def test_homomorphism_order_condition():
    Z2, Z4 = FiniteAbelianGroup([2]), FiniteAbelianGroup([4])
    with pytest.raises(GroupError):
        Homomorphism(Z2, Z4, np.array([[1]]))
    assert Homomorphism(Z2, Z4, np.array([[2]]))((1,)) == (2,)


def test_snf_pivot_regression():
    # a pivot dividing its partner must not oscillate; the lattice is all of Z^5 mod 2
    rel = [[0, 1, 0, 0, 0], [1, 0, 0, 0, 1], [1, 0, 0, 1, 0], [0, 0, 1, 1, 0],
           [2, 0, 0, 0, 0], [0, 2, 0, 0, 0], [0, 0, 2, 0, 0], [0, 0, 0, 2, 0], [0, 0, 0, 0, 2]]
    diag, V, Vi = _snf_columns(rel, 5, 2)
    assert [math.gcd(d, 2) for d in diag].count(2) == 1
    V, Vi = np.array(V), np.array(Vi)
    assert ((V @ Vi) % 2 == np.eye(5, dtype=int)).all()


def test_kernel_and_image_of_doubling_on_z4():
    Z4 = FiniteAbelianGroup([4])
    twice = Homomorphism.scalar(Z4, 2)
    for method in ("lattice", "enumerate"):
        assert sorted(kernel(twice, method).elements()) == [(0,), (2,)]
        assert sorted(image(twice, method).elements()) == [(0,), (2,)]
    assert preimage(twice, (2,)) in [(1,), (3,)]
    assert preimage(twice, (1,)) is None


def test_subquotient_requires_containment():
    G = FiniteAbelianGroup([4])
    with pytest.raises(GroupError):
        subquotient(Subgroup(G, [(2,)]), Subgroup(G, [(1,)]))


def test_invariant_factors_from_orders():
    G = FiniteAbelianGroup([2, 4])
    assert invariant_factors_from_orders([G.element_order(x) for x in G.elements()]) == (2, 4)


def test_check_group_table_reports_noncommutative():
    # S3 multiplication is not abelian
    perms = list(itertools.permutations(range(3)))
    table = np.array([[perms.index(tuple(p[q[i]] for i in range(3))) for q in perms] for p in perms])
    with pytest.raises(GroupError, match="commutative"):
        check_group_table(table)


def test_structure_from_table_cyclic_gets_one_generator():
    table = np.add.outer(np.arange(6), np.arange(6)) % 6
    s = structure_from_table(table)
    assert s.group.orders == (6,)
    assert structure_from_table(table, primary=True).group.orders == (2, 3)


@settings(max_examples=60, deadline=None)
@given(orders_st, st.data())
def test_subgroup_order_matches_enumeration(orders, data):
    G = FiniteAbelianGroup(orders)
    gens = data.draw(st.lists(st.tuples(*[st.integers(0, d - 1) for d in orders]), max_size=3))
    S = Subgroup(G, gens)
    assert S.order == len(subgroup_by_enumeration(G, gens))
    assert set(S.elements()) == subgroup_by_enumeration(G, gens)


@settings(max_examples=60, deadline=None)
@given(orders_st, st.data())
def test_subquotient_snf_matches_enumeration(orders, data):
    G = FiniteAbelianGroup(orders)
    elem = st.tuples(*[st.integers(0, d - 1) for d in orders])
    kgens = data.draw(st.lists(elem, max_size=3))
    K = Subgroup(G, kgens)
    # J is generated by multiples of K's generators, so J <= K
    mults = data.draw(st.lists(st.integers(0, 5), min_size=len(kgens), max_size=len(kgens)))
    J = Subgroup(G, [G.scale(m, g) for m, g in zip(mults, kgens)])
    snf = subquotient(K, J)
    enum = subquotient(K, J, method="enumerate")
    assert snf.invariant_factors == enum.invariant_factors
    assert is_chain(snf.invariant_factors)
    assert snf.order == K.order // J.order
    # coordinates invert lift, and every coset of J is hit once
    seen = set()
    for c in snf.abstract_elements():
        x = snf.lift(c)
        assert K.contains(x)
        assert snf.coordinates(x) == tuple(c)
        seen.add(c)
    assert len(seen) == snf.order
    for x in K.elements():
        for j in itertools.islice(J.elements(), 4):
            assert snf.coordinates(G.add(x, j)) == snf.coordinates(x)


@settings(max_examples=40, deadline=None)
@given(orders_st, orders_st, st.data())
def test_kernel_methods_agree(dom_orders, cod_orders, data):
    dom, cod = FiniteAbelianGroup(dom_orders), FiniteAbelianGroup(cod_orders)
    # images of generators must satisfy d_i * image = 0
    images = []
    for d in dom_orders:
        choices = [y for y in cod.elements() if cod.scale(d, y) == cod.zero()]
        images.append(data.draw(st.sampled_from(choices)))
    phi = Homomorphism.from_images(dom, cod, images)
    ker_l, ker_e = kernel(phi), kernel(phi, "enumerate")
    assert set(ker_l.elements()) == set(ker_e.elements())
    assert set(image(phi).elements()) == set(image(phi, "enumerate").elements())
    assert ker_l.order * image(phi).order == dom.order
