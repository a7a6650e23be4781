"""The action pairs (diamond, yleft) of H on a coefficient group I.

``h <> y`` is stored as one automorphism of I per element of H and
``y < h`` as one endomorphism of I per element of H (bilinearity makes the
second determined by its values on the additive generators of H).  Both are
also kept as index tables, which is what the exhaustive checks and the
oracle consume.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from sympy import isprime

from .abelian import FiniteAbelianGroup, GroupError, Homomorphism, lcm
from .cycleset import LinearCycleSet

DEFAULT_BUDGET = 2**30


class ActionError(ValueError):
    """An admissibility identity fails; ``identity`` names it, ``witness`` gives indices."""

    def __init__(self, message: str, identity: str, witness: tuple = ()):
        super().__init__(message)
        self.identity = identity
        self.witness = witness


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class EndoActionSpec:
    """Endomorphisms A_i = e_i <> - and B_i = - < e_i for a trivial H."""

    A: tuple[Homomorphism, ...]
    B: tuple[Homomorphism, ...]

    def key(self) -> tuple:
        return tuple(int(v) for M in self.A + self.B for v in M.matrix.ravel())

    def failed_identity(self, orders: Sequence[int]) -> str | None:
        """Name of the first violated defining identity, or None."""
        n = len(orders)
        if len(self.A) != n or len(self.B) != n:
            return "one A_i and one B_i per cyclic factor of H"
        I = self.A[0].domain if n else None
        for i in range(n):
            a, b, d = self.A[i], self.B[i], orders[i]
            ident = Homomorphism.identity(I)
            if a.power(d) != ident:
                return f"A_{i + 1}^{d} = Id"
            if b.scaled(d) != Homomorphism.zero(I, I):
                return f"{d} B_{i + 1} = 0"
            c = a - a.compose(b)
            if c.power(d) != ident:
                return f"(A_{i + 1} - A_{i + 1} B_{i + 1})^{d} = Id"
            if b.compose(a) - a.compose(b) != b.compose(a).compose(b):
                return f"[B_{i + 1}, A_{i + 1}] = B_{i + 1} A_{i + 1} B_{i + 1}"
        for i, j in itertools.permutations(range(n), 2):
            name = _pair_failure(self.A[i], self.B[i], self.A[j], self.B[j])
            if name:
                return name.format(i=i + 1, j=j + 1)
        return None


def _pair_failure(ai, bi, aj, bj) -> str | None:
    if ai.compose(aj) != aj.compose(ai):
        return "[A_{i}, A_{j}] = 0"
    ci, cj = ai - ai.compose(bi), aj - aj.compose(bj)
    if ci.compose(cj) != cj.compose(ci):
        return "[A_{i} - A_{i} B_{i}, A_{j} - A_{j} B_{j}] = 0"
    if bi.compose(aj) - aj.compose(bi) != bi.compose(aj).compose(bj):
        return "[B_{i}, A_{j}] = B_{i} A_{j} B_{j}"
    return None


class ActionPair:
    """A validated pair (diamond, yleft).  Build through :func:`validate_action`."""

    def __init__(self, H: LinearCycleSet, I: FiniteAbelianGroup, diamond_tab: np.ndarray, yleft_tab: np.ndarray):
        self.H = H
        self.I = I
        self.diamond_tab = diamond_tab  # [h, y] -> h <> y
        self.yleft_tab = yleft_tab  # [y, h] -> y < h
        gens = [I.index(e) for e in I.generators()]
        self.diamond = tuple(
            Homomorphism.from_images(I, I, [I.element_at(int(diamond_tab[h, g])) for g in gens])
            for h in range(H.order)
        )
        self.yleft = tuple(
            Homomorphism.from_images(I, I, [I.element_at(int(yleft_tab[g, h])) for g in gens])
            for h in range(H.order)
        )

    def __repr__(self) -> str:
        return f"ActionPair(H={self.H!r}, I={self.I}, yleft_zero={self.yleft_zero})"

    @cached_property
    def yleft_zero(self) -> bool:
        return not self.yleft_tab.any()

    @cached_property
    def triangle_tab(self) -> np.ndarray:
        """[y, h] -> y <| h = h <> (y - y < h)."""
        I = self.I
        hs = np.arange(self.H.order)[None, :]
        ys = np.arange(I.order)[:, None]
        return self.diamond_tab[hs, I.add_table[ys, I.neg_table[self.yleft_tab]]]

    def act(self, h: int, y: int) -> int:
        return int(self.diamond_tab[h, y])

    def yl(self, y: int, h: int) -> int:
        return int(self.yleft_tab[y, h])

    @cached_property
    def diamond_matrices(self) -> np.ndarray:
        return np.stack([M.matrix for M in self.diamond]) if self.I.rank else np.zeros((self.H.order, 0, 0), np.int64)

    @cached_property
    def yleft_matrices(self) -> np.ndarray:
        return np.stack([M.matrix for M in self.yleft]) if self.I.rank else np.zeros((self.H.order, 0, 0), np.int64)

    def endo_spec(self) -> EndoActionSpec:
        """A_i, B_i read off the additive generators (meaningful for trivial H)."""
        G = self.H.additive
        idx = [G.index(e) for e in G.generators()]
        return EndoActionSpec(tuple(self.diamond[i] for i in idx), tuple(self.yleft[i] for i in idx))


def _as_table(H: LinearCycleSet, I: FiniteAbelianGroup, spec, name: str, transpose: bool) -> np.ndarray:
    """Accept per-h Homomorphisms/matrices or a full index table."""
    homs = len(spec) and isinstance(spec[0], Homomorphism)
    if homs or np.ndim(spec) == 3:
        mats = [M.matrix if isinstance(M, Homomorphism) else np.asarray(M, dtype=np.int64) for M in spec]
        if len(mats) != H.order:
            raise ActionError(f"{name}: need one matrix per element of H", "shape")
        cols = []
        coords = I.coords_array
        for h, M in enumerate(mats):
            try:
                hom = Homomorphism(I, I, M)
            except GroupError as exc:
                raise ActionError(f"{name}: matrix for h={h} is not an endomorphism of I", "endomorphism", (h,)) from exc
            cols.append(I.index_array(hom.apply_array(coords)))
        tab = np.stack(cols)  # [h, y]
        return tab.T.copy() if transpose else tab
    tab = np.asarray(spec, dtype=np.int64)
    shape = (I.order, H.order) if transpose else (H.order, I.order)
    if tab.shape != shape:
        raise ActionError(f"{name}: table must have shape {shape}, got {tab.shape}", "shape")
    if tab.size and (tab.min() < 0 or tab.max() >= I.order):
        raise ActionError(f"{name}: entries outside I", "closure")
    return tab


def _first(mask: np.ndarray):
    hit = np.argwhere(mask)
    return tuple(int(v) for v in hit[0]) if len(hit) else None


def validate_action(H: LinearCycleSet, I: FiniteAbelianGroup, diamond, yleft) -> ActionPair:
    """Exhaustively check the admissibility identities.

    ``diamond`` is one matrix/Homomorphism per element of H, or a table
    ``[h][y] -> index of h <> y``; ``yleft`` is one matrix per element of H
    (``y < h = M_h y``), or a table ``[y][h]``.
    """
    D = _as_table(H, I, diamond, "diamond", transpose=False)
    L = _as_table(H, I, yleft, "yleft", transpose=True)
    ia, ineg = I.add_table, I.neg_table
    ha, dot, times = H.add, H.dot, H.times
    nh, ni = H.order, I.order
    hs, ys = np.arange(nh), np.arange(ni)

    def fail(identity, w):
        raise ActionError(f"{identity} fails at {w}", identity, w)

    w = _first(D[:, ia] != ia[D[:, :, None], D[:, None, :]])
    if w:
        fail("h <> (y+z) = h <> y + h <> z", w)
    w = _first(D[0] != ys)
    if w:
        fail("0 <> y = y", w)
    w = _first(D[times[:, :, None], ys[None, None, :]] != D[hs[None, :, None], D[:, None, :]])
    if w:
        fail("(l x h) <> y = h <> (l <> y)", w)
    w = _first(L[ia, :] != ia[L[:, None, :], L[None, :, :]])
    if w:
        fail("(y+z) < h = y < h + z < h", w)
    w = _first(L[:, ha] != ia[L[:, :, None], L[:, None, :]])
    if w:
        fail("y < (h+l) = y < h + y < l", w)
    # triangle compatibility, indexed [h, l, y]
    hl = dot[:, :, None]
    lhs = L[D[:, None, :], hl]
    rhs = ia[D[hs[:, None, None], L[ys[None, None, :], hs[None, :, None]]], L[D[hs[:, None, None], L[ys[None, None, :], hs[:, None, None]]], hl]]
    w = _first(lhs != rhs)
    if w:
        fail("(h <> y) < h.l = h <> (y < l) + (h <> (y < h)) < h.l", w)
    A = ActionPair(H, I, D, L)
    _check_derived(A)
    return A


def _check_derived(A: ActionPair) -> None:
    """Identities implied by the ones above; checked, not assumed."""
    H, I = A.H, A.I
    T, L = A.triangle_tab, A.yleft_tab
    ia, ineg = I.add_table, I.neg_table
    ys = np.arange(I.order)

    def fail(identity, w):
        raise ActionError(f"{identity} fails at {w}", identity, w)

    w = _first(T[:, H.times] != T[T[:, :, None], np.arange(H.order)[None, None, :]])
    if w:
        fail("y <| (h x l) = (y <| h) <| l", w)
    w = _first(T[ia, :] != ia[T[:, None, :], T[None, :, :]])
    if w:
        fail("(y+z) <| h = y <| h + z <| h", w)
    w = _first(T[:, 0] != ys)
    if w:
        fail("y <| 0 = y", w)
    up = ia[ys[:, None], ineg[L]]  # y^h
    w = _first(ia[up[:, H.add], ys[:, None, None]] != ia[up[:, :, None], up[:, None, :]])
    if w:
        fail("y^(h+l) + y = y^h + y^l", w)
    if A.yleft_zero:
        assert np.array_equal(T, A.diamond_tab.T)


def trivial_action(H: LinearCycleSet, I: FiniteAbelianGroup) -> ActionPair:
    ident = [Homomorphism.identity(I)] * H.order
    zero = [Homomorphism.zero(I, I)] * H.order
    return validate_action(H, I, ident, zero)


def action_from_endos(H: LinearCycleSet, I: FiniteAbelianGroup, spec: EndoActionSpec) -> ActionPair:
    """h <> y = A_1^{l_1} ... A_n^{l_n} y and y < h = sum l_i B_i y for h = sum l_i e_i."""
    if not H.is_trivial:
        raise ActionError("endomorphism description needs a trivial cycle set H", "trivial H")
    orders = H.additive.orders
    bad = spec.failed_identity(orders)
    if bad:
        raise ActionError(f"endomorphism spec violates {bad}", bad)
    ident = Homomorphism.identity(I)
    powers = [[ident] for _ in orders]
    for i, d in enumerate(orders):
        for _ in range(d - 1):
            powers[i].append(spec.A[i].compose(powers[i][-1]))
    diamond, yl = [], []
    for lam in H.additive.elements():
        M = ident
        for i in reversed(range(len(orders))):
            M = powers[i][lam[i]].compose(M)
        diamond.append(M)
        B = Homomorphism.zero(I, I)
        for i, k in enumerate(lam):
            B = B + spec.B[i].scaled(k)
        yl.append(B)
    return validate_action(H, I, diamond, yl)


# --------------------------------------------------------------------------
# enumeration


def endomorphisms(I: FiniteAbelianGroup) -> list[Homomorphism]:
    """All endomorphisms of I, in lexicographic order of their reduced matrices."""
    d = I.orders
    ranges = []
    for i in range(I.rank):  # row = codomain coordinate
        for j in range(I.rank):  # column = image of e_j
            step = d[i] // np.gcd(d[i], d[j])
            ranges.append(range(0, d[i], step))
    return [Homomorphism(I, I, np.array(v, dtype=np.int64).reshape(I.rank, I.rank)) for v in itertools.product(*ranges)]


def enumerate_actions_trivial(H: LinearCycleSet, I: FiniteAbelianGroup, restrict_yleft_zero: bool = False,
                              budget: int = DEFAULT_BUDGET) -> list[EndoActionSpec]:
    """Every admissible (A, B) for a trivial H, sorted by flattened matrices."""
    if not H.is_trivial:
        raise ActionError("action enumeration needs a trivial cycle set H", "trivial H")
    orders = H.additive.orders
    n = len(orders)
    ends = endomorphisms(I)
    raw = len(ends) ** (n if restrict_yleft_zero else 2 * n)
    if raw > budget:
        raise BudgetExceeded(f"{raw} candidate endomorphism tuples exceed the budget {budget}")
    ident, zero = Homomorphism.identity(I), Homomorphism.zero(I, I)
    autos = [a for a in ends if a.is_bijective()]
    per_factor = []
    for i, d in enumerate(orders):
        bs = [zero] if restrict_yleft_zero else [b for b in ends if b.scaled(d) == zero]
        ok = []
        for a in autos:
            if a.power(d) != ident:
                continue
            for b in bs:
                c = a - a.compose(b)
                if c.power(d) == ident and b.compose(a) - a.compose(b) == b.compose(a).compose(b):
                    ok.append((a, b))
        per_factor.append(ok)
    found = []

    def extend(chosen):
        k = len(chosen)
        if k == n:
            found.append(EndoActionSpec(tuple(a for a, _ in chosen), tuple(b for _, b in chosen)))
            return
        for a, b in per_factor[k]:
            if all(_pair_failure(a0, b0, a, b) is None and _pair_failure(a, b, a0, b0) is None for a0, b0 in chosen):
                extend(chosen + [(a, b)])

    extend([])
    found.sort(key=EndoActionSpec.key)
    return found


# --------------------------------------------------------------------------
# unit roots


def unit_roots(p: int, r: int, eta: int) -> list[int]:
    """Residues a mod p^r with a^(p^eta) = 1, from the closed form."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if r < 1 or eta < 1:
        raise ValueError("r and eta must be positive")
    mod = p**r
    if p != 2 or r <= 2:
        eta0 = min(r - 1, eta)
        step = p ** (r - eta0)
        return list(range(1, mod, step))
    eta0 = min(r - 2, eta)
    step = 2 ** (r - eta0)
    return sorted({x % mod for k in range(0, mod, step) for x in (1 + k, -1 + k)})


def unit_roots_bruteforce(p: int, r: int, eta: int) -> list[int]:
    mod = p**r
    return [a for a in range(mod) if pow(a, p**eta, mod) == 1 % mod]


def exponent_of(I: FiniteAbelianGroup) -> int:
    return lcm(I.orders) if I.rank else 1
