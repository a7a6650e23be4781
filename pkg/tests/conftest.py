import itertools

import numpy as np

from lcs_cohomology.abelian import FiniteAbelianGroup, Homomorphism
from lcs_cohomology.actions import (
    ActionError,
    action_from_endos,
    endomorphisms,
    enumerate_actions_trivial,
    validate_action,
)
from lcs_cohomology.cycleset import trivial_lcs, validate_lcs

# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []

# |H| <= 4 and |I| <= 4, up to isomorphism
SMALL_ORDERS = [[2], [3], [4], [2, 2]]


def Z(*orders) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(list(orders))


def trivial(*orders):
    return trivial_lcs(Z(*orders))


def brace_dot(n: int, c: int) -> np.ndarray:
    """Dot table of the cyclic brace on Z_n with h x l = h + l + c h l (c^2 = 0 mod n)."""
    times = np.array([[(a + b + c * a * b) % n for b in range(n)] for a in range(n)])
    inv = [int(np.flatnonzero(times[a] == 0)[0]) for a in range(n)]
    return np.array([[times[inv[h], (h + l) % n] for l in range(n)] for h in range(n)])


def brace(n: int, c: int):
    return validate_lcs(Z(n), brace_dot(n, c))


def trivial_actions(H, I, yleft_zero=False):
    return [action_from_endos(H, I, s) for s in enumerate_actions_trivial(H, I, restrict_yleft_zero=yleft_zero)]


def all_actions(H, I, limit=None):
    """Admissible actions by scanning per-element endomorphisms (any H, small cases)."""
    ends = endomorphisms(I)
    autos = [e for e in ends if e.is_bijective()]
    out = []
    for dm in itertools.product(autos, repeat=H.order - 1):
        for yl in itertools.product(ends, repeat=H.order - 1):
            try:
                out.append(validate_action(H, I, [Homomorphism.identity(I), *dm], [Homomorphism.zero(I, I), *yl]))
            except ActionError:
                continue
            if limit and len(out) >= limit:
                return out
    return out


def small_trivial_cases():
    """Every (H, I, action) with trivial H, |H| <= 4, |I| <= 4."""
    for h in SMALL_ORDERS:
        for i in SMALL_ORDERS:
            H, I = trivial(*h), Z(*i)
            for act in trivial_actions(H, I):
                yield H, I, act


def cyclic_brace_actions(H, I):
    """Admissible actions for H with cyclic additive group, built from commuting
    automorphisms on the adjoint generators and y < h = h B y, then validated."""
    ends = endomorphisms(I)
    autos = [e for e in ends if e.is_bijective()]
    gens, orders = H.adjoint_generators, H.adjoint_orders
    ident = Homomorphism.identity(I)
    out = []
    for ds in itertools.product(autos, repeat=len(gens)):
        if any(d.power(r) != ident for d, r in zip(ds, orders)):
            continue
        if any(a.compose(b) != b.compose(a) for a, b in itertools.combinations(ds, 2)):
            continue
        diamond = []
        for h in range(H.order):
            M = ident
            for d, k in zip(ds, H.adjoint_coords(h)):
                M = d.power(k).compose(M)
            diamond.append(M)
        for B in ends:
            if B.scaled(H.order) != Homomorphism.zero(I, I):
                continue
            try:
                out.append(validate_action(H, I, diamond, [B.scaled(h) for h in range(H.order)]))
            except ActionError:
                continue
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
