"""Extensions of a linear cycle set H by a trivial one I, as explicit tables.

The carrier is I x H with index ``y * |H| + h``.  Its addition is twisted
by beta and its dot by f, so the additive group of the result is computed
from the table and relabelled onto a canonical FiniteAbelianGroup.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import kernels
from .abelian import FiniteAbelianGroup, GroupError, structure_from_table
from .actions import ActionError, ActionPair, validate_action
from .builder import CocyclePair
from .cochain import Cochain
from .cycleset import LCSError, LinearCycleSet, trivial_lcs, validate_lcs

class ExtensionError(ValueError):
    def __init__(self, message: str, condition: str | None = None, witness: tuple = ()):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


@dataclass(frozen=True, eq=False)
class Morphism:
    """A map of linear cycle sets given by an index table."""

    domain: LinearCycleSet
    codomain: LinearCycleSet
    table: np.ndarray

    def failure(self) -> tuple[str, tuple[int, int]] | None:
        t = self.table
        if t.shape != (self.domain.order,):
            return "shape", ()
        add_ok = t[self.domain.add] == self.codomain.add[t[:, None], t[None, :]]
        dot_ok = t[self.domain.dot] == self.codomain.dot[t[:, None], t[None, :]]
        for name, ok in (("additive", add_ok), ("dot", dot_ok)):
            if not ok.all():
                x, y = np.argwhere(~ok)[0]
                return name, (int(x), int(y))
        return None

    def is_morphism(self) -> bool:
        return self.failure() is None


@dataclass(frozen=True, eq=False)
class ExtensionData:
    """(diamond, yleft, beta, f) read off an extension through a section."""

    action: ActionPair
    beta: Cochain
    f: Cochain


@dataclass(eq=False)
class ExtensionStructure:
    B: LinearCycleSet
    iota: Morphism
    pi: Morphism
    section: np.ndarray  # H index -> B index of (0, h)
    H: LinearCycleSet
    I: FiniteAbelianGroup
    action: ActionPair
    beta: np.ndarray  # I indices on H x H
    f: np.ndarray
    to_B: np.ndarray  # carrier index -> B index
    from_B: np.ndarray = field(repr=False)

    def carrier_pair(self, b: int) -> tuple[int, int]:
        """(y-index, h-index) of a B element."""
        c = int(self.from_B[b])
        return divmod(c, self.H.order)

    def element(self, y, h) -> int:
        """B index of y + w_h."""
        return int(self.to_B[self.I.index(y) * self.H.order + self.H.index(h)])

    def to_json_dict(self) -> dict[str, Any]:
        nh = self.H.order
        carrier = [
            [list(self.I.element_at(c // nh)), list(self.H.element(c % nh))]
            for c in range(len(self.to_B))
        ]
        fb = self.from_B
        # tables in carrier indexing so that they read directly against the pairs
        add = fb[self.B.add[np.ix_(self.to_B, self.to_B)]]
        dot = fb[self.B.dot[np.ix_(self.to_B, self.to_B)]]
        return {
            "carrier": carrier,
            "additive_invariant_factors": list(self.B.additive.orders),
            "add": add.tolist(),
            "dot": dot.tolist(),
            "iota": fb[self.iota.table].tolist(),
            "pi": self.pi.table[self.to_B].tolist(),
            "section": fb[self.section].tolist(),
        }


def _same_cycle_set(a: LinearCycleSet, b: LinearCycleSet) -> bool:
    return a.additive == b.additive and np.array_equal(a.dot, b.dot)


def _same_action(a: ActionPair, b: ActionPair) -> bool:
    return np.array_equal(a.diamond_tab, b.diamond_tab) and np.array_equal(a.yleft_tab, b.yleft_tab)


def build_extension_tables(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair,
                           beta: np.ndarray, f: np.ndarray) -> ExtensionStructure:
    """Materialize I x_{beta,f} H and verify it exhaustively."""
    nh, ni = H.order, I.order
    beta = np.asarray(beta, dtype=np.int64)
    f = np.asarray(f, dtype=np.int64)
    if beta.shape != (nh, nh) or f.shape != (nh, nh):
        raise ExtensionError("beta and f must be |H| x |H| tables", "shape")
    ia = I.add_table
    dm, yl = action.diamond_tab, action.yleft_tab
    c = np.arange(ni * nh)
    y, h = c // nh, c % nh
    Y, Z = y[:, None], y[None, :]
    Hh, L = h[:, None], h[None, :]
    s = H.add[Hh, L]
    add_c = ia[ia[Y, Z], beta[Hh, L]] * nh + s
    hl = H.dot[Hh, L]
    dot_c = ia[ia[dm[Hh, Z], f[Hh, L]], yl[dm[Hh, Y], hl]] * nh + hl
    try:
        st = structure_from_table(add_c)
    except GroupError as exc:
        raise ExtensionError(f"twisted addition is not an abelian group: {exc}", "additive group") from exc
    G = st.group
    to_B = G.index_array(st.coords)
    from_B = np.empty_like(to_B)
    from_B[to_B] = c
    dot_B = np.empty_like(dot_c)
    dot_B[np.ix_(to_B, to_B)] = to_B[dot_c]
    try:
        B = validate_lcs(G, dot_B)
    except LCSError as exc:
        w = tuple(divmod(int(from_B[b]), nh) for b in exc.witness)
        raise ExtensionError(f"extension fails the cycle set axioms: {exc}", exc.axiom, w) from exc
    iota = Morphism(trivial_lcs(I), B, to_B[np.arange(ni) * nh])
    pi = Morphism(B, H, from_B % nh)
    section = to_B[np.arange(nh)]
    ext = ExtensionStructure(B, iota, pi, section, H, I, action, beta, f, to_B, from_B)
    for name, m in (("iota", iota), ("pi", pi)):
        bad = m.failure()
        if bad:
            raise ExtensionError(f"{name} is not a morphism ({bad[0]})", name, bad[1])
    return ext


def build_extension(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair, pair: CocyclePair) -> ExtensionStructure:
    if pair.H is not H and not _same_cycle_set(pair.H, H):
        raise ExtensionError("cocycle pair belongs to a different H", "H")
    if pair.I != I or not _same_action(pair.action, action):
        raise ExtensionError("cocycle pair belongs to a different (I, action)", "action")
    ext = build_extension_tables(H, I, action, pair.alpha.table, pair.f_table)
    rec = recover_data(ext.B, ext.iota, ext.pi, ext.section, H=H)
    if not (_same_action(rec.action, action) and np.array_equal(rec.beta.table, ext.beta)
            and np.array_equal(rec.f.table, ext.f)):
        raise ExtensionError("recovered data differs from the source data", "round trip")
    return ext


def _exact_sequence_check(B: LinearCycleSet, iota: Morphism, pi: Morphism) -> None:
    if iota.codomain is not B and not _same_cycle_set(iota.codomain, B):
        raise ExtensionError("iota does not land in B", "iota")
    if pi.domain is not B and not _same_cycle_set(pi.domain, B):
        raise ExtensionError("pi does not start at B", "pi")
    if not iota.domain.is_trivial:
        raise ExtensionError("the coefficient cycle set must be trivial", "trivial I")
    for name, m in (("iota", iota), ("pi", pi)):
        bad = m.failure()
        if bad:
            raise ExtensionError(f"{name} is not a morphism ({bad[0]} fails at {bad[1]})", name, bad[1])
    if len(np.unique(iota.table)) != iota.domain.order:
        raise ExtensionError("iota is not injective", "exactness")
    if len(np.unique(pi.table)) != pi.codomain.order:
        raise ExtensionError("pi is not surjective", "exactness")
    ker = np.flatnonzero(pi.table == 0)
    if not np.array_equal(np.sort(iota.table), ker):
        raise ExtensionError("image of iota differs from the kernel of pi", "exactness")


def recover_data(B: LinearCycleSet, iota: Morphism, pi: Morphism, section=None,
                 H: LinearCycleSet | None = None) -> ExtensionData:
    """Read (diamond, yleft, beta, f) off a short exact sequence 0 -> I -> B -> H -> 0.

    ``section`` maps H indices to B indices with section[0] = 0; by default the
    smallest preimage of each h is used.  The actions do not depend on it.
    """
    _exact_sequence_check(B, iota, pi)
    H = H or pi.codomain
    I = iota.domain.additive
    nh = H.order
    if section is None:
        section = np.full(nh, -1, dtype=np.int64)
        for b in range(B.order - 1, -1, -1):
            section[pi.table[b]] = b
        section[0] = 0
    s = np.asarray(section, dtype=np.int64)
    if s.shape != (nh,) or s[0] != 0 or not np.array_equal(pi.table[s], np.arange(nh)):
        raise ExtensionError("section must satisfy pi(s(h)) = h and s(0) = 0", "section")
    back = np.full(B.order, -1, dtype=np.int64)
    back[iota.table] = np.arange(I.order)

    def into_I(b: np.ndarray, what: str) -> np.ndarray:
        out = back[b]
        if (out < 0).any():
            raise ExtensionError(f"{what} leaves the image of iota", "exactness")
        return out

    iy = iota.table
    add, neg, dot = B.add, B.neg, B.dot
    diamond = into_I(dot[s[:, None], iy[None, :]], "s(h).y")
    yleft = into_I(add[dot[iy[:, None], s[None, :]], neg[s][None, :]], "y.s(h) - s(h)")
    beta = into_I(add[add[s[:, None], s[None, :]], neg[s[H.add]]], "beta")
    f = into_I(add[dot[s[:, None], s[None, :]], neg[s[H.dot]]], "f")
    try:
        action = validate_action(H, I, diamond, yleft)
    except ActionError as exc:
        raise ExtensionError(f"recovered actions are not admissible: {exc}", "action") from exc
    return ExtensionData(action, Cochain("02", I, beta), Cochain("11", I, f))


def _candidates(I: FiniteAbelianGroup, n: int) -> np.ndarray:
    """All n-tuples of I indices, lexicographic."""
    grids = np.meshgrid(*[np.arange(I.order)] * n, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64) if n else np.zeros((1, 0), np.int64)


def _check_shared(E1: ExtensionStructure, E2: ExtensionStructure) -> None:
    if E1.H is E2.H and E1.action is E2.action:
        return
    if not _same_cycle_set(E1.H, E2.H) or E1.I != E2.I or not _same_action(E1.action, E2.action):
        raise ExtensionError("extensions do not share (H, I, action)", "mismatch")


class ExtensionBatch:
    """Extensions over one (H, I, action), stacked for repeated equivalence queries."""

    def __init__(self, extensions: list[ExtensionStructure]):
        if not extensions:
            raise ExtensionError("empty batch", "mismatch")
        self.extensions = list(extensions)
        head = self.extensions[0]
        for E in self.extensions[1:]:
            _check_shared(head, E)
        self.head = head
        self.beta = np.stack([E.beta for E in self.extensions])
        self.f = np.stack([E.f for E in self.extensions])
        H, I = head.H, head.I
        G = H.additive
        self.gens = np.array([G.index(e) for e in G.generators()], dtype=np.int64)
        coords = G.coords_array
        # parent of h: subtract the first generator with a non-zero coordinate
        self.parent = np.zeros(H.order, dtype=np.int64)
        self.step = np.zeros(H.order, dtype=np.int64)
        for h in range(1, H.order):
            i = int(np.flatnonzero(coords[h])[0])
            self.step[h] = i
            self.parent[h] = h - self.gens[i]
        self.cand = _candidates(I, G.rank)

    def __len__(self) -> int:
        return len(self.extensions)

    def phi(self, E: ExtensionStructure, k: int, c: int) -> np.ndarray:
        """The map built from candidate c for the pair (E, target k)."""
        ia, ineg = E.I.add_table, E.I.neg_table
        phi = np.zeros(E.H.order, dtype=np.int64)
        for h in range(1, E.H.order):
            p, i = self.parent[h], self.step[h]
            g = self.gens[i]
            db = ia[E.beta[p, g], ineg[self.beta[k, p, g]]]
            phi[h] = ia[ia[phi[p], self.cand[c, i]], ineg[db]]
        return phi


def equivalence_witnesses(E: ExtensionStructure, others) -> list[np.ndarray | None]:
    """For each E2 in ``others`` (a list or an :class:`ExtensionBatch`), a map
    phi: H -> I (as I indices) with phi(0) = 0,
    phi(h) - phi(h+l) + phi(l) = beta(h,l) - beta2(h,l) and
    phi(h.l) + f(h,l) = h<>phi(l) + f2(h,l) + (h<>phi(h)) < h.l, or None.

    phi is fixed on the additive generators of H (lexicographic order of the
    values) and extended along phi(h + e) = phi(h) + phi(e) - (beta - beta2)(h, e);
    both equations are then checked on all pairs.
    """
    if not isinstance(others, ExtensionBatch):
        if not others:
            return []
        others = ExtensionBatch(others)
    _check_shared(E, others.head)
    act, I, H = E.action, E.I, E.H
    hits = kernels.equivalence_search(
        I.add_table, I.neg_table, H.add, H.dot, act.diamond_tab, act.yleft_tab,
        others.parent, others.step, others.gens, E.beta, E.f, others.beta, others.f, others.cand,
    )
    return [None if c < 0 else others.phi(E, k, int(c)) for k, c in enumerate(hits)]


def are_equivalent(E1: ExtensionStructure, E2: ExtensionStructure) -> np.ndarray | None:
    """A map phi: H -> I (as I indices) witnessing E1 ~ E2, or None.

    The first witness in lexicographic order of (phi(e_1), ..., phi(e_n)) is returned.
    """
    return equivalence_witnesses(E1, [E2])[0]


def socle_contains_coefficients(E: ExtensionStructure) -> bool:
    """Whether iota(I) lies in the socle of B, i.e. y.b = b for all y in I, b in B."""
    rows = E.B.dot[E.iota.table]
    return bool((rows == np.arange(E.B.order)[None, :]).all())
