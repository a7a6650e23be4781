"""Linear cycle sets on finite abelian groups, stored as dense index tables."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import kernels
from .abelian import FiniteAbelianGroup, GroupError, Structure, Subgroup, structure_from_table

AXIOM_NAMES = {
    0: "left translation l -> h.l is not bijective",
    1: "h.(l+m) != h.l + h.m",
    2: "(h+l).m != (h.l).(h.m)",
}


class LCSError(ValueError):
    """An axiom failure; ``witness`` holds element indices."""

    def __init__(self, message: str, axiom: str | None = None, witness: tuple = ()):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


@dataclass(frozen=True)
class IdealWitness:
    members: tuple[int, ...]  # sorted element indices
    is_ideal: bool
    is_central: bool
    is_trivial_ideal: bool


class LinearCycleSet:
    """A validated linear cycle set.  Build through :func:`validate_lcs` or :func:`trivial_lcs`."""

    def __init__(self, additive: FiniteAbelianGroup, dot: np.ndarray, _adjoint: Structure | None = None):
        self.additive = additive
        self.dot = np.ascontiguousarray(dot, dtype=np.int64)
        self.dot.setflags(write=False)
        self.add = additive.add_table
        self.neg = additive.neg_table
        n = additive.order
        inv = np.empty_like(self.dot)
        rows = np.arange(n)[:, None]
        inv[rows, self.dot] = np.arange(n)[None, :]
        self.inv_dot = inv  # inv_dot[h, h.l] = l
        self.times = self.add[self.inv_dot, rows]  # h x l = ^h l + h
        self._adjoint = _adjoint

    def __repr__(self) -> str:
        kind = "trivial" if self.is_trivial else "non-trivial"
        return f"LinearCycleSet({self.additive}, {kind})"

    @property
    def order(self) -> int:
        return self.additive.order

    @cached_property
    def is_trivial(self) -> bool:
        return bool((self.dot == np.arange(self.order)[None, :]).all())

    def index(self, x) -> int:
        return x if isinstance(x, (int, np.integer)) else self.additive.index(x)

    def element(self, i: int):
        return self.additive.element_at(i)

    def dot_op(self, h: int, l: int) -> int:
        return int(self.dot[h, l])

    def times_op(self, h: int, l: int) -> int:
        return int(self.times[h, l])

    def times_power(self, h: int, k: int) -> int:
        """h^{x k} for k >= 0."""
        acc = 0
        for _ in range(k):
            acc = int(self.times[acc, h])
        return acc

    @cached_property
    def times_inverse(self) -> np.ndarray:
        inv = np.empty(self.order, dtype=np.int64)
        hits = np.argwhere(self.times == 0)
        inv[hits[:, 0]] = hits[:, 1]
        return inv

    def yleft(self, y: int, h: int) -> int:
        """y < h = y.h - h."""
        return int(self.add[self.dot[y, h], self.neg[h]])

    # -- adjoint group

    @property
    def adjoint(self) -> Structure:
        if self._adjoint is None:
            self._adjoint = adjoint_basis(self)
        return self._adjoint

    @property
    def adjoint_generators(self) -> tuple[int, ...]:
        return self.adjoint.basis

    @property
    def adjoint_orders(self) -> tuple[int, ...]:
        return self.adjoint.group.orders

    def adjoint_coords(self, h: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.adjoint.coords[h])


def validate_lcs(additive: FiniteAbelianGroup, dot) -> LinearCycleSet:
    """Check the axioms exhaustively and return the cycle set with derived tables."""
    n = additive.order
    table = np.asarray(dot, dtype=np.int64)
    if table.shape != (n, n):
        raise LCSError(f"dot table must have shape ({n}, {n}), got {table.shape}", "shape")
    if n and (table.min() < 0 or table.max() >= n):
        raise LCSError("dot table has entries outside the group", "closure")
    code, *w = kernels.lcs_violation(additive.add_table, table)
    if code >= 0:
        raise LCSError(f"{AXIOM_NAMES[code]} at {tuple(w)}", AXIOM_NAMES[code], tuple(w))
    H = LinearCycleSet(additive, table)
    _check_derived(H)
    return H


def _check_derived(H: LinearCycleSet) -> None:
    # implied by the axioms; a failure here is a bug, not bad input
    n = H.order
    d, t, inv = H.dot, H.times, H.inv_dot
    idx = np.arange(n)
    cyc = d[d[:, :, None], d[:, None, :]]  # (h.l).(h.m)
    assert (cyc == cyc.transpose(1, 0, 2)).all()
    assert (inv[idx[:, None], d] == idx[None, :]).all()
    assert (d[t[:, :, None], idx[None, None, :]] == d[idx[None, :, None], d[:, None, :]]).all()
    assert (t[:, 0] == idx).all() and (t[0, :] == idx).all()


def trivial_lcs(G: FiniteAbelianGroup) -> LinearCycleSet:
    """h.l = l; the adjoint basis is the canonical additive basis."""
    n = G.order
    dot = np.tile(np.arange(n, dtype=np.int64), (n, 1))
    return LinearCycleSet(G, dot, _canonical_structure(G))


def _canonical_structure(G: FiniteAbelianGroup) -> Structure:
    basis = tuple(G.index(e) for e in G.generators())
    return Structure(G, basis, G.coords_array, 0)


def yleft(H: LinearCycleSet, y, h) -> int:
    return H.yleft(H.index(y), H.index(h))


def adjoint_basis(H: LinearCycleSet) -> Structure:
    """Independent generators a_1..a_s of (H, x) with their orders and coordinates."""
    if H.is_trivial:
        return _canonical_structure(H.additive)
    t = H.times
    if not np.array_equal(t, t.T):
        h, l = np.argwhere(t != t.T)[0]
        raise LCSError(f"adjoint group is not abelian: {h} x {l} != {l} x {h}", "adjoint", (int(h), int(l)))
    return structure_from_table(t)


# --------------------------------------------------------------------------
# ideals


def _member_list(H: LinearCycleSet, S) -> np.ndarray:
    if isinstance(S, Subgroup):
        return np.array(sorted(H.additive.index(x) for x in S.elements()), dtype=np.int64)
    return np.array(sorted({H.index(x) for x in S}), dtype=np.int64)


def classify_subgroup(H: LinearCycleSet, S: Subgroup | Iterable) -> IdealWitness:
    members = _member_list(H, S)
    mask = np.zeros(H.order, dtype=bool)
    mask[members] = True
    if not mask[0] or not mask[H.add[np.ix_(members, members)]].all() or not mask[H.neg[members]].all():
        raise GroupError("the given set is not a subgroup")
    idx = np.arange(H.order)
    acts_in = mask[H.dot[:, members]].all()  # h.y in S
    yl = H.add[H.dot[members, :], H.neg[None, :]]  # y.h - h
    is_ideal = bool(acts_in and mask[yl].all())
    is_central = bool((H.dot[:, members] == members[None, :]).all() and (H.dot[members, :] == idx[None, :]).all())
    is_trivial = bool((H.dot[np.ix_(members, members)] == members[None, :]).all())
    return IdealWitness(tuple(int(v) for v in members), is_ideal, is_central, is_ideal and is_trivial)


def socle(H: LinearCycleSet) -> IdealWitness:
    idx = np.arange(H.order)
    members = np.flatnonzero((H.dot == idx[None, :]).all(axis=1))
    return classify_subgroup(H, members)


def center(H: LinearCycleSet) -> IdealWitness:
    idx = np.arange(H.order)
    in_soc = (H.dot == idx[None, :]).all(axis=1)
    fixed = (H.dot == idx[None, :]).all(axis=0)
    return classify_subgroup(H, np.flatnonzero(in_soc & fixed))
