"""Brute-force ground truth for extension classes.

Raw cocycles are found by exhaustive search over every value assignment of
(beta, f) on pairs of non-zero elements, filtered only by the defining
identities of an extension: the cocycle identity of beta, quasi-linearity
of f, and the horizontal identity.  Classes are the orbits of the
equivalence relation given by maps phi: H -> I with phi(0) = 0.

Nothing here depends on the seed machinery: the whole point is to be an
independent witness for it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .abelian import FiniteAbelianGroup
from .actions import ActionPair
from .cycleset import LinearCycleSet

DEFAULT_BUDGET = 2**30


class OracleBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class RawSpace:
    """Variable layout: beta on pairs h <= l (both non-zero), then f on all non-zero pairs."""

    order: int
    beta_vars: tuple[tuple[int, int], ...]
    f_vars: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, order: int) -> "RawSpace":
        bv = tuple((h, l) for h in range(1, order) for l in range(h, order))
        fv = tuple((h, l) for h in range(1, order) for l in range(1, order))
        return cls(order, bv, fv)

    @property
    def n_vars(self) -> int:
        return len(self.beta_vars) + len(self.f_vars)

    def beta_var(self, h: int, l: int) -> int | None:
        if h == 0 or l == 0:
            return None
        h, l = min(h, l), max(h, l)
        # position of (h, l) in the upper triangle of (1..n-1)^2
        n = self.order - 1
        return (h - 1) * n - (h - 1) * (h - 2) // 2 + (l - h)

    def f_var(self, h: int, l: int) -> int | None:
        if h == 0 or l == 0:
            return None
        return len(self.beta_vars) + (h - 1) * (self.order - 1) + (l - 1)

    def tables(self, row: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(beta, f) as full |H| x |H| index tables from one solution row."""
        n = self.order
        beta = np.zeros((n, n), dtype=np.int64)
        f = np.zeros((n, n), dtype=np.int64)
        for k, (h, l) in enumerate(self.beta_vars):
            beta[h, l] = beta[l, h] = row[k]
        off = len(self.beta_vars)
        for k, (h, l) in enumerate(self.f_vars):
            f[h, l] = row[off + k]
        return beta, f

    def vector(self, beta: np.ndarray, f: np.ndarray) -> np.ndarray:
        return np.array([beta[h, l] for h, l in self.beta_vars] + [f[h, l] for h, l in self.f_vars], dtype=np.int64)


class _System:
    """Homogeneous equations sum_t endo_t(x_var_t) = 0 over I."""

    def __init__(self, I: FiniteAbelianGroup):
        self.I = I
        self.ident = np.arange(I.order, dtype=np.int64)
        self.endos: list[np.ndarray] = []
        self._endo_ids: dict[bytes, int] = {}
        self.equations: set[tuple[tuple[int, int], ...]] = set()

    def endo_id(self, table: np.ndarray) -> int:
        key = table.tobytes()
        if key not in self._endo_ids:
            self._endo_ids[key] = len(self.endos)
            self.endos.append(table)
        return self._endo_ids[key]

    def add(self, terms: list[tuple[int | None, np.ndarray]]) -> None:
        """terms: (variable or None for a zero argument, map applied to it)."""
        merged: dict[int, np.ndarray] = {}
        for var, table in terms:
            if var is None:
                continue
            merged[var] = self.I.add_table[merged[var], table] if var in merged else table
        eq = tuple(sorted((v, self.endo_id(t)) for v, t in merged.items() if t.any()))
        if eq:
            self.equations.add(eq)

    def compile(self, n_vars: int):
        eqs = sorted(self.equations)
        trig = [[] for _ in range(n_vars)]
        for c, eq in enumerate(eqs):
            trig[max(v for v, _ in eq)].append(c)
        trig_ptr = np.zeros(n_vars + 1, dtype=np.int64)
        trig_ptr[1:] = np.cumsum([len(t) for t in trig])
        trig_ids = np.array([c for t in trig for c in t], dtype=np.int64)
        term_ptr = np.zeros(len(eqs) + 1, dtype=np.int64)
        term_ptr[1:] = np.cumsum([len(eq) for eq in eqs])
        term_var = np.array([v for eq in eqs for v, _ in eq], dtype=np.int64)
        term_endo = np.array([e for eq in eqs for _, e in eq], dtype=np.int64)
        endo = np.stack(self.endos) if self.endos else np.zeros((1, self.I.order), dtype=np.int64)
        return endo, trig_ptr, trig_ids, term_ptr, term_var, term_endo


def _equations(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair, space: RawSpace) -> _System:
    sysm = _System(I)
    ident, neg = sysm.ident, I.neg_table
    dm, yl = action.diamond_tab, action.yleft_tab
    add, dot = H.add, H.dot
    B, F = space.beta_var, space.f_var
    n = H.order
    for h in range(n):
        for l in range(n):
            for m in range(n):
                # beta(l,m) - beta(h+l,m) + beta(h,l+m) - beta(h,l) = 0
                sysm.add([(B(l, m), ident), (B(add[h, l], m), neg), (B(h, add[l, m]), ident), (B(h, l), neg)])
                # f(h,l+m) - f(h,l) - f(h,m) - beta(h.l,h.m) + h<>beta(l,m) = 0
                hl, hm = dot[h, l], dot[h, m]
                sysm.add([
                    (F(h, add[l, m]), ident), (F(h, l), neg), (F(h, m), neg),
                    (B(hl, hm), neg), (B(l, m), dm[h]),
                ])
                # f(h+l,m) - f(h.l,h.m) - (h.l)<>f(h,m) - ((h.l)<>f(h,l))<x + ((h+l)<>beta(h,l))<x = 0
                s = add[h, l]
                x = dot[s, m]
                sysm.add([
                    (F(s, m), ident), (F(hl, hm), neg), (F(h, m), neg[dm[hl]]),
                    (F(h, l), neg[yl[dm[hl], x]]), (B(h, l), yl[dm[s], x]),
                ])
    return sysm


def enumerate_raw_cocycles(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair,
                           budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Every normalized (beta, f) satisfying the extension identities, as rows
    of variable values (see :class:`RawSpace`), in lexicographic order."""
    space = RawSpace.of(H.order)
    candidates = I.order ** space.n_vars
    if candidates > budget:
        raise OracleBudgetExceeded(f"{candidates} candidate assignments exceed the oracle budget {budget}")
    sysm = _equations(H, I, action, space)
    return kernels.solve_linear(space.n_vars, I.add_table, *sysm.compile(space.n_vars))


def raw_coboundary(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair, phi: np.ndarray,
                   space: RawSpace | None = None) -> np.ndarray:
    """The shift (beta, f) -> (beta', f') induced by phi, as a variable vector.

    From phi(h) - phi(h+l) + phi(l) = beta - beta' and
    phi(h.l) + f = h<>phi(l) + f' + (h<>phi(h)) < h.l.
    """
    space = space or RawSpace.of(H.order)
    ia, neg = I.add_table, I.neg_table
    dm, yl = action.diamond_tab, action.yleft_tab
    n = H.order
    dbeta = np.zeros((n, n), dtype=np.int64)
    df = np.zeros((n, n), dtype=np.int64)
    for h in range(n):
        for l in range(n):
            dbeta[h, l] = neg[ia[ia[phi[h], neg[phi[H.add[h, l]]]], phi[l]]]
            hl = H.dot[h, l]
            df[h, l] = ia[ia[phi[hl], neg[dm[h, phi[l]]]], neg[yl[dm[h, phi[h]], hl]]]
    return space.vector(dbeta, df)


def _keys(rows: np.ndarray, base: int) -> np.ndarray:
    key = np.zeros(rows.shape[0], dtype=np.int64)
    for c in range(rows.shape[1]):
        key = key * base + rows[:, c]
    return key


@dataclass
class OracleClasses:
    rows: np.ndarray  # raw cocycles
    labels: np.ndarray  # class label per row (smallest member index)
    space: RawSpace

    @property
    def count(self) -> int:
        return int(len(np.unique(self.labels)))

    def index_of(self, vector: np.ndarray) -> int | None:
        key = _keys(np.asarray(vector, dtype=np.int64)[None, :], self._base)[0]
        pos = int(np.searchsorted(self._sorted_keys, key))
        if pos < len(self._sorted_keys) and self._sorted_keys[pos] == key:
            return int(self._order[pos])
        return None

    def __post_init__(self):
        self._base = int(self.rows.max()) + 1 if self.rows.size else 1

    def _set_base(self, base: int):
        self._base = base
        keys = _keys(self.rows, base)
        self._order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._order]


def classify_raw(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair,
                 budget: int = DEFAULT_BUDGET) -> OracleClasses:
    """Raw cocycles with their equivalence classes (union-find over single-point shifts)."""
    space = RawSpace.of(H.order)
    rows = enumerate_raw_cocycles(H, I, action, budget)
    keys = _keys(rows, I.order)
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    eu, ev = [], []
    gens = [I.index(g) for g in I.generators()]
    for h in range(1, H.order):
        for g in gens:
            phi = np.zeros(H.order, dtype=np.int64)
            phi[h] = g
            shift = raw_coboundary(H, I, action, phi, space)
            moved = I.add_table[rows, shift[None, :]]
            mk = _keys(moved, I.order)
            pos = np.searchsorted(sorted_keys, mk)
            pos = np.minimum(pos, len(sorted_keys) - 1)
            if not (sorted_keys[pos] == mk).all():
                raise AssertionError("raw cocycles are not closed under coboundary shifts")
            eu.append(np.arange(len(rows)))
            ev.append(order[pos])
    if eu:
        labels = kernels.components(len(rows), np.concatenate(eu), np.concatenate(ev))
    else:
        labels = np.arange(len(rows))
    out = OracleClasses(rows, np.asarray(labels, dtype=np.int64), space)
    out._set_base(I.order)
    return out


def count_classes(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair, budget: int = DEFAULT_BUDGET) -> int:
    return classify_raw(H, I, action, budget).count
