import pytest

from lcs_cohomology.abelian import Homomorphism
from lcs_cohomology.actions import EndoActionSpec, action_from_endos, unit_roots
from lcs_cohomology.classify import case_rule, classify, classify_case, regime, stated_roots
from lcs_cohomology.oracle import count_classes

from conftest import Z, trivial


def test_two_two_two():
    report = classify(2, 2, 2)
    assert report.roots == (1, 3)
    assert {c.a: c.h2_order for c in report.cases} == {1: 16, 3: 4}
    assert report.ok


def test_three_one_one():
    report = classify(3, 1, 1)
    assert [(c.a, c.h2_order) for c in report.cases] == [(1, 9)]
    assert report.ok


@pytest.mark.parametrize("p,eta,r,expected", [
    (3, 2, 1, "r <= eta"),
    (3, 1, 2, "eta < r"),
    (2, 1, 2, "eta < r"),
    (2, 2, 3, "p = 2, 3 <= r <= eta + 1"),
    (2, 1, 3, "p = 2, r > eta + 1"),
])
def test_regimes(p, eta, r, expected):
    assert regime(p, eta, r) == expected


@pytest.mark.parametrize("p,eta,r", [(2, 1, 3), (2, 2, 3), (2, 3, 5), (3, 1, 2), (3, 2, 3), (5, 1, 2)])
def test_stated_roots_match_unit_roots(p, eta, r):
    assert stated_roots(p, eta, r) == tuple(unit_roots(p, r, eta))


def test_trivial_action_lists_every_pair():
    rule = case_rule(2, 2, 2, 1)
    assert len(rule.pairs) == 16


def test_threads_keep_root_order():
    one, two = classify(2, 2, 3), classify(2, 2, 3, threads=2)
    assert [c.a for c in one.cases] == [c.a for c in two.cases]
    assert one.to_json_dict() == two.to_json_dict()


@pytest.mark.parametrize("p,eta,r", [(2, 1, 1), (2, 1, 2), (2, 1, 3), (2, 2, 1), (3, 1, 1), (3, 1, 2)])
def test_counts_agree_with_brute_force(p, eta, r):
    H, I = trivial(p**eta), Z(p**r)
    for a in unit_roots(p, r, eta):
        case = classify_case(p, eta, r, a)
        spec = EndoActionSpec((Homomorphism.scalar(I, a),), (Homomorphism.zero(I, I),))
        assert case.h2_order == count_classes(H, I, action_from_endos(H, I, spec))
