"""Second cohomology from finite seed data.

A cocycle ``(alpha, -f)`` is pinned down by a *seed*: the values gamma_i
fixing the standard symmetric cocycle ``alpha`` and the values
``f(a_j, e_i)`` on pairs (adjoint generator, additive generator).  The
seed space is ``I^n + I^(sn)``; four homomorphisms T1, T2, T3 (conditions
on a seed) and S (seeds of coboundaries) present H^2 as

    (ker T1 & ker T2 & ker T3) / im S.

Throughout, ``f`` is the dot correction of the extension, i.e. the cocycle
is ``(alpha, -f)``; see :mod:`lcs_cohomology.cochain` for the sign.

Three independent evaluators of ``f`` are provided and compared in tests:
the pairwise recursion over the adjoint group, the closed product
expansion over the adjoint factorization, and (for trivial H only) the
explicit formula in the endomorphisms A_i, B_i.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .abelian import (
    ENUMERATION_THRESHOLD,
    FiniteAbelianGroup,
    GroupError,
    GroupElement,
    Homomorphism,
    SubquotientResult,
    image,
    kernel,
    preimage,
    subquotient,
)
from .actions import ActionPair
from .cochain import Cochain, alpha_standard, d_v03
from .cycleset import LinearCycleSet

PATHS = ("recursion", "product", "closed")
LEX_COSET_LIMIT = 10**5


class BuilderError(ValueError):
    """A seed or action fails a required condition; ``condition`` names it."""

    def __init__(self, message: str, condition: str | None = None, witness: tuple = ()):
        super().__init__(message)
        self.condition = condition
        self.witness = witness


@dataclass(frozen=True)
class CocycleSeed:
    gamma: tuple[GroupElement, ...]  # one element of I per additive generator e_i
    f_gen: tuple[tuple[GroupElement, ...], ...]  # f_gen[j][i] = f(a_j, e_i)

    @classmethod
    def zero(cls, I: FiniteAbelianGroup, n: int, s: int) -> "CocycleSeed":
        z = I.zero()
        return cls((z,) * n, ((z,) * n,) * s)

    @classmethod
    def from_vector(cls, I: FiniteAbelianGroup, n: int, s: int, vec: Sequence[int]) -> "CocycleSeed":
        r = I.rank
        blocks = [I.element(vec[b * r:(b + 1) * r]) for b in range(n + s * n)]
        return cls(tuple(blocks[:n]), tuple(tuple(blocks[n + j * n:n + (j + 1) * n]) for j in range(s)))

    def to_vector(self) -> tuple[int, ...]:
        flat = list(self.gamma) + [x for row in self.f_gen for x in row]
        return tuple(int(c) for x in flat for c in x)

    @property
    def n(self) -> int:
        return len(self.gamma)

    @property
    def s(self) -> int:
        return len(self.f_gen)


# --------------------------------------------------------------------------
# structure shared by every seed over a fixed (H, I, action)


class _Frame:
    """Generators, structure constants and small helpers for (H, I, action)."""

    def __init__(self, H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair):
        if action.H is not H and not np.array_equal(action.H.dot, H.dot):
            raise BuilderError("action is defined over a different cycle set", "action")
        self.H, self.I, self.action = H, I, action
        G = H.additive
        self.e = [G.index(g) for g in G.generators()]
        self.d = list(G.orders)
        self.a = list(H.adjoint_generators)
        self.r = list(H.adjoint_orders)
        self.n, self.s = len(self.e), len(self.a)
        self.hcoords = G.coords_array
        # a_j = sum_i lam[i, j] e_i and a_j . e_i = sum_k Gamma[i, j, k] e_k
        self.lam = np.array([self.hcoords[a] for a in self.a], dtype=np.int64).T.reshape(self.n, self.s)
        self.Gamma = np.array(
            [[self.hcoords[H.dot[a, e]] for a in self.a] for e in self.e], dtype=np.int64
        ).reshape(self.n, self.s, self.n)
        self.ia, self.ineg = I.add_table, I.neg_table
        self.dm, self.yl = action.diamond_tab, action.yleft_tab
        # a_j^{x k} for 0 <= k <= r_j
        self.apow = [[H.times_power(a, k) for k in range(r + 1)] for a, r in zip(self.a, self.r)]

    def hmul(self, k: int, x) -> np.ndarray | int:
        G = self.H.additive
        return G.index_array(G.reduce_array(k * self.hcoords[x]))

    def imul(self, k: int, y) -> np.ndarray | int:
        return self.I.index_array(self.I.reduce_array(k * self.I.coords_array[y]))

    def isum(self, values) -> int | np.ndarray:
        acc = 0
        for v in values:
            acc = self.ia[acc, v]
        return acc

    def seed_indices(self, seed: CocycleSeed) -> tuple[np.ndarray, np.ndarray]:
        if seed.n != self.n or seed.s != self.s or any(len(row) != self.n for row in seed.f_gen):
            raise BuilderError(f"seed must have {self.n} gammas and a {self.s} x {self.n} f-matrix", "shape")
        I = self.I
        gam = np.array([I.index(I.check(g)) for g in seed.gamma], dtype=np.int64)
        fg = np.array([[I.index(I.check(x)) for x in row] for row in seed.f_gen], dtype=np.int64).reshape(self.s, self.n)
        return gam, fg

    @cached_property
    def seed_space(self) -> FiniteAbelianGroup:
        return self.I.power(self.n + self.s * self.n)


def _frame(H, I, action) -> _Frame:
    return _Frame(H, I, action)


class _SeedEval:
    """Everything about one seed: alpha, f_1 rows and the three f paths."""

    def __init__(self, fr: _Frame, seed: CocycleSeed):
        self.fr = fr
        self.seed = seed
        self.gam, self.fgen = fr.seed_indices(seed)
        self.alpha = alpha_standard(fr.H.additive, list(seed.gamma), fr.I).table
        self.f1 = np.stack([self._f1_row(j) for j in range(fr.s)]) if fr.s else np.zeros((0, fr.H.order), np.int64)

    def _f1_row(self, j: int) -> np.ndarray:
        """f_1(a_j, m) for every m, from additive coordinates of m."""
        fr, H = self.fr, self.fr.H
        al, ia = self.alpha, fr.ia
        aj = fr.a[j]
        ae = [int(H.dot[aj, e]) for e in fr.e]  # a_j . e_i
        out = np.zeros(H.order, dtype=np.int64)
        for m in range(H.order):
            lam = fr.hcoords[m]
            acc = 0
            for i in range(fr.n):
                acc = ia[acc, fr.imul(int(lam[i]), int(self.fgen[j, i]))]
                for l in range(1, int(lam[i])):
                    acc = ia[acc, al[ae[i], fr.hmul(l, ae[i])]]
            prefix = 0
            for k in range(fr.n):
                part = fr.hmul(int(lam[k]), ae[k])
                if k:
                    acc = ia[acc, al[prefix, part]]
                prefix = int(H.add[prefix, part])
            out[m] = acc
        return out

    # -- f on powers of a single generator

    def power_row(self, j: int, k: int, base: np.ndarray | None = None) -> np.ndarray:
        """f(a_j^{x k}, m) for all m, from f(a_j, -) = ``base`` (default f_1)."""
        fr, H = self.fr, self.fr.H
        base = self.f1[j] if base is None else base
        ia, ineg, dm, yl, al = fr.ia, fr.ineg, fr.dm, fr.yl, self.alpha
        pw = fr.apow[j] if k <= fr.r[j] else [H.times_power(fr.a[j], q) for q in range(k + 2)]
        aj = fr.a[j]
        ms = np.arange(H.order)
        target = H.dot[pw[k], ms]  # a^{x k} . m
        out = np.zeros(H.order, dtype=np.int64)
        for l in range(k):
            out = ia[out, dm[pw[k - l - 1], base[H.dot[pw[l], ms]]]]
        for l in range(1, k):
            bar = int(H.add[pw[l + 1], H.neg[aj]])
            out = ia[out, yl[dm[pw[l], base[bar]], target]]
            out = ia[out, ineg[yl[dm[pw[l + 1], al[aj, bar]], target]]]
        return out

    # -- path (i): pairwise recursion over the adjoint group

    @cached_property
    def table_recursion(self) -> np.ndarray:
        fr, H = self.fr, self.fr.H
        ia, ineg, dm, yl, al = fr.ia, fr.ineg, fr.dm, fr.yl, self.alpha
        n = H.order
        F = np.zeros((n, n), dtype=np.int64)
        known = np.zeros(n, dtype=bool)
        known[0] = True
        ms = np.arange(n)
        for j, aj in enumerate(fr.a):
            F[aj] = self.f1[j]
            known[aj] = True
        frontier = [0] + list(fr.a)
        while frontier:
            nxt = []
            for g in frontier:
                for j, aj in enumerate(fr.a):
                    h = int(H.times[aj, g])
                    if known[h]:
                        continue
                    # f(a x g, m) with a = a_j known on all of H
                    x = H.dot[h, ms]
                    pre = int(H.inv_dot[aj, g])
                    row = ia[F[g, H.dot[aj, ms]], dm[g, F[aj]]]
                    row = ia[row, yl[dm[g, F[aj, pre]], x]]
                    row = ia[row, ineg[yl[dm[h, al[aj, pre]], x]]]
                    F[h] = row
                    known[h] = True
                    nxt.append(h)
            frontier = nxt
        if not known.all():
            raise BuilderError("adjoint generators do not generate (H, x)", "adjoint")
        return F

    # -- path (ii): product expansion over the adjoint factorization

    @cached_property
    def _power_rows(self) -> list[list[np.ndarray]]:
        return [[self.power_row(j, k) for k in range(r)] for j, r in enumerate(self.fr.r)]

    @cached_property
    def table_product(self) -> np.ndarray:
        fr, H = self.fr, self.fr.H
        ia, ineg, dm, yl, al = fr.ia, fr.ineg, fr.dm, fr.yl, self.alpha
        n = H.order
        ms = np.arange(n)
        F = np.zeros((n, n), dtype=np.int64)
        coords = H.adjoint.coords
        for h in range(1, n):
            ks = [int(c) for c in coords[h]]
            factors = [(j, k) for j, k in enumerate(ks) if k]
            elems = [fr.apow[j][k] for j, k in factors]
            L = len(elems)
            prefix = [0]
            for x in elems:
                prefix.append(int(H.times[prefix[-1], x]))
            suffix = [0] * (L + 1)
            for q in range(L - 1, -1, -1):
                suffix[q] = int(H.times[elems[q], suffix[q + 1]])
            assert prefix[L] == h
            target = H.dot[h, ms]
            row = np.zeros(n, dtype=np.int64)
            for q, (j, k) in enumerate(factors):
                rows = self._power_rows[j][k]
                sfx = suffix[q + 1]
                row = ia[row, dm[sfx, rows[H.dot[prefix[q], ms]]]]
                if q < L - 1:
                    pre = int(H.inv_dot[elems[q], sfx])
                    row = ia[row, yl[dm[sfx, rows[pre]], target]]
                    row = ia[row, ineg[yl[dm[suffix[q], al[elems[q], pre]], target]]]
            F[h] = row
        return F

    # -- path (iii): explicit formula for trivial H

    @cached_property
    def table_closed(self) -> np.ndarray:
        fr, H, I = self.fr, self.fr.H, self.fr.I
        if not H.is_trivial:
            raise BuilderError("the explicit formula needs a trivial cycle set H", "trivial H")
        n = fr.n
        spec = fr.action.endo_spec()
        A = [M.matrix for M in spec.A]
        B = [M.matrix for M in spec.B]
        mod = I.orders_array
        fval = I.coords_array[self.fgen]  # (s, n, rank)
        eye = np.eye(I.rank, dtype=np.int64)

        def mpow(M, k):
            out = eye
            for _ in range(k):
                out = np.mod(M @ out, mod[:, None])
            return out

        Apow = [[mpow(A[j], k) for k in range(fr.d[j])] for j in range(n)]
        N = H.order
        F = np.zeros((N, N), dtype=np.int64)
        for h in range(N):
            k = [int(c) for c in fr.hcoords[h]]
            # tail[j] = A_{j+1}^{k_{j+1}} ... A_n^{k_n}
            tail = [eye] * (n + 1)
            for j in range(n - 1, -1, -1):
                tail[j] = np.mod(Apow[j][k[j]] @ tail[j + 1], mod[:, None])
            # the value is linear in the coordinates of m: v = sum_u lam_u W[u]
            W = np.zeros((n, I.rank), dtype=np.int64)
            for j in range(n):
                for l in range(k[j]):
                    P = Apow[j][k[j] - l - 1] @ tail[j + 1]
                    for u in range(n):
                        W[u] += P @ fval[j, u]
                        for i in range(j + 1, n):
                            W[u] += k[i] * (B[u] @ P @ fval[j, i])
                for l in range(1, k[j]):
                    P = Apow[j][l] @ tail[j + 1]
                    for u in range(n):
                        W[u] += l * (B[u] @ P @ fval[j, j])
            lam = np.asarray(fr.hcoords, dtype=np.int64)  # (N, n)
            F[h] = I.index_array(np.mod(lam @ np.mod(W, mod), mod))
        return F

    def table(self, path: str = "recursion") -> np.ndarray:
        if path not in PATHS:
            raise ValueError(f"unknown evaluation path {path!r}")
        return getattr(self, f"table_{path}")

    # -- seed conditions

    def T1(self) -> np.ndarray:
        """(j, i) -> d_i f(a_j, e_i) + sum_k alpha(a_j.e_i, k a_j.e_i) - a_j <> gamma_i."""
        fr, H = self.fr, self.fr.H
        ia, ineg, al = fr.ia, fr.ineg, self.alpha
        out = np.zeros((fr.s, fr.n), dtype=np.int64)
        for j, aj in enumerate(fr.a):
            for i, e in enumerate(fr.e):
                x = int(H.dot[aj, e])
                acc = fr.imul(fr.d[i], int(self.fgen[j, i]))
                for k in range(1, fr.d[i]):
                    acc = ia[acc, al[x, fr.hmul(k, x)]]
                out[j, i] = ia[acc, ineg[fr.dm[aj, self.gam[i]]]]
        return out

    def T2(self) -> np.ndarray:
        """(j, i) -> f(a_j^{x r_j}, e_i) computed by the power formula."""
        fr = self.fr
        out = np.zeros((fr.s, fr.n), dtype=np.int64)
        for j in range(fr.s):
            row = self.power_row(j, fr.r[j])
            out[j] = row[fr.e]
        return out

    def F1(self, l: int, m: int, d: np.ndarray) -> np.ndarray:
        """F_1(a_l, a_m, d) for adjoint generator positions l, m."""
        fr, H = self.fr, self.fr.H
        ia, ineg, dm, yl, al = fr.ia, fr.ineg, fr.dm, fr.yl, self.alpha
        al_, am = fr.a[l], fr.a[m]
        prod = int(H.times[al_, am])
        pre = int(H.inv_dot[al_, am])
        x = H.dot[prod, d]
        out = ia[self.f1[m][H.dot[al_, d]], dm[am, self.f1[l][d]]]
        out = ia[out, yl[dm[am, self.f1[l][pre]], x]]
        return ia[out, ineg[yl[dm[prod, al[al_, pre]], x]]]

    def T3(self) -> np.ndarray:
        """((i, j) with i < j, k) -> F_1(a_j, a_i, e_k) - F_1(a_i, a_j, e_k)."""
        fr = self.fr
        e = np.array(fr.e, dtype=np.int64)
        rows = []
        for i, j in itertools.combinations(range(fr.s), 2):
            rows.append(fr.ia[self.F1(j, i, e), fr.ineg[self.F1(i, j, e)]])
        return np.array(rows, dtype=np.int64).reshape(len(rows), fr.n)


# --------------------------------------------------------------------------
# public evaluation API


def f1_eval(seed: CocycleSeed, H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair, j: int, m) -> GroupElement:
    """f_1(a_j, m) from the additive coordinates of m (``j`` is 0-based)."""
    ev = _SeedEval(_frame(H, I, action), seed)
    return I.element_at(int(ev.f1[j, H.index(m)]))


def check_T1(seed: CocycleSeed, H, I, action) -> list[GroupElement]:
    """Residuals of the divisibility condition, ordered (j, i); all zero iff it holds."""
    ev = _SeedEval(_frame(H, I, action), seed)
    return [I.element_at(int(v)) for v in ev.T1().ravel()]


def binom_alt_sum(h: int, l: int) -> int:
    """sum_{j=l}^{h-1} (-1)^j C(j, l)."""
    return sum((-1) ** j * math.comb(j, l) for j in range(l, h))


def f_table(seed: CocycleSeed, H, I, action, path: str = "recursion") -> np.ndarray:
    """Dense table of f(h, m) as I-indices, by the chosen evaluation path."""
    return _SeedEval(_frame(H, I, action), seed).table(path)


# --------------------------------------------------------------------------
# cocycle pairs


@dataclass(eq=False)
class CocyclePair:
    """alpha (standard symmetric cocycle) and f with (alpha, -f) a 2-cocycle."""

    H: LinearCycleSet
    I: FiniteAbelianGroup
    action: ActionPair
    seed: CocycleSeed
    alpha: Cochain
    _eval: _SeedEval = field(repr=False)
    _table: np.ndarray | None = field(default=None, repr=False)

    @property
    def f_table(self) -> np.ndarray:
        if self._table is None:
            self._table = self._eval.table_recursion
            self._table.setflags(write=False)
        return self._table

    @property
    def f(self) -> Cochain:
        return Cochain("11", self.I, self.f_table)

    def f_value(self, h, m) -> GroupElement:
        return self.I.element_at(int(self.f_table[self.H.index(h), self.H.index(m)]))

    def violations(self) -> list[str]:
        """Names of every failed cocycle condition; empty when verified."""
        H, I, act = self.H, self.I, self.action
        bad = []
        al, f = self.alpha, self.f_table
        if not (al.is_normalized() and al.is_symmetric()):
            bad.append("alpha normalized and symmetric")
        if f[0].any() or f[:, 0].any():
            bad.append("f normalized")
        if not d_v03(H.additive, al).is_zero():
            bad.append("alpha vertical cocycle")
        code, *w = kernels.cocycle_violation(
            H.add, H.dot, I.add_table, I.neg_table, act.diamond_tab, act.yleft_tab, al.table, f
        )
        if code == 1:
            bad.append(f"f quasi-linear in the second variable, witness {tuple(w)}")
        elif code == 2:
            bad.append(f"horizontal identity, witness {tuple(w)}")
        elif code == 0:
            bad.append(f"alpha cocycle, witness {tuple(w)}")
        if code != 2 and not horizontal_identity_holds(H, act, al.table, f):
            bad.append("horizontal identity")
        for j, r in enumerate(self._eval.fr.r):
            if self._eval.power_row(j, r, base=f[self._eval.fr.a[j]]).any():
                bad.append(f"f(a_{j + 1}^(x {r}), -) = 0")
        return bad

    def verify(self) -> None:
        bad = self.violations()
        if bad:
            raise BuilderError("cocycle verification failed: " + "; ".join(bad), bad[0])


def horizontal_identity_holds(H: LinearCycleSet, action: ActionPair, alpha: np.ndarray, f: np.ndarray) -> bool:
    """Direct numpy check of the horizontal identity (second opinion next to the kernel scan)."""
    ia, ineg = action.I.add_table, action.I.neg_table
    dm, yl = action.diamond_tab, action.yleft_tab
    n = H.order
    h, l, m = np.ix_(range(n), range(n), range(n))
    s, hl = H.add[h, l], H.dot[h, l]
    x = H.dot[s, m]
    rhs = ia[ia[f[hl, H.dot[h, m]], dm[hl, f[h, m]]], ia[yl[dm[hl, f[h, l]], x], ineg[yl[dm[s, alpha[h, l]], x]]]]
    return bool((f[s, m] == rhs).all())


def times_form_holds(H: LinearCycleSet, action: ActionPair, alpha: np.ndarray, f: np.ndarray) -> bool:
    """The equivalent form f(h x l, m) = f(l, h.m) + l <> f(h, m) + (l <> f(h, ^h l)) < (h x l).m
    - ((h x l) <> alpha(h, ^h l)) < (h x l).m, over all h, l, m."""
    ia, ineg = action.I.add_table, action.I.neg_table
    dm, yl = action.diamond_tab, action.yleft_tab
    n = H.order
    h, l, m = np.ix_(range(n), range(n), range(n))
    hl = H.times[h, l]
    pre = H.inv_dot[h, l]
    x = H.dot[hl, m]
    rhs = ia[ia[f[l, H.dot[h, m]], dm[l, f[h, m]]], ia[yl[dm[l, f[h, pre]], x], ineg[yl[dm[hl, alpha[h, pre]], x]]]]
    return bool((f[hl, m] == rhs).all())


def cocycle_from_seed(seed: CocycleSeed, H, I, action, verify: bool = True) -> CocyclePair:
    """The cocycle pair of a seed in ker T1 & ker T2 & ker T3."""
    fr = _frame(H, I, action)
    ev = _SeedEval(fr, seed)
    for name, res in (("T1", ev.T1()), ("T2", ev.T2()), ("T3", ev.T3())):
        if res.any():
            w = tuple(int(v) for v in np.argwhere(res)[0])
            raise BuilderError(f"seed is not in ker {name} (first non-zero residual at {w})", name, w)
    pair = CocyclePair(H, I, action, seed, Cochain("02", I, ev.alpha), ev)
    if verify:
        pair.verify()
    return pair


# --------------------------------------------------------------------------
# the four homomorphisms and H^2


@dataclass(frozen=True)
class TBundle:
    T1: Homomorphism
    T2: Homomorphism
    T3: Homomorphism
    S: Homomorphism
    lam: np.ndarray  # lam[i, j]: a_j = sum_i lam[i, j] e_i
    Gamma: np.ndarray  # Gamma[i, j, k]: a_j . e_i = sum_k Gamma[i, j, k] e_k
    n: int
    s: int

    @property
    def seed_space(self) -> FiniteAbelianGroup:
        return self.T1.domain

    @cached_property
    def T(self) -> Homomorphism:
        """(T1, T2, T3) stacked into one map."""
        cod = FiniteAbelianGroup(self.T1.codomain.orders + self.T2.codomain.orders + self.T3.codomain.orders)
        return Homomorphism(self.seed_space, cod, np.vstack([self.T1.matrix, self.T2.matrix, self.T3.matrix]))


def _unit_vectors(G: FiniteAbelianGroup) -> list[tuple[int, ...]]:
    return [tuple(int(i == j) for j in range(G.rank)) for i in range(G.rank)]


def _as_coords(I: FiniteAbelianGroup, idx: np.ndarray) -> np.ndarray:
    return I.coords_array[np.asarray(idx, dtype=np.int64).ravel()].reshape(-1)


def _S_image(fr: _Frame, t: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """S(t) as (gamma indices, f_gen indices) from t_i = t(e_i) (I-indices)."""
    H, ia, ineg, dm, yl = fr.H, fr.ia, fr.ineg, fr.dm, fr.yl
    gam = np.array([fr.imul(fr.d[i], int(t[i])) for i in range(fr.n)], dtype=np.int64)
    fg = np.zeros((fr.s, fr.n), dtype=np.int64)
    for j, aj in enumerate(fr.a):
        for i, e in enumerate(fr.e):
            x = int(H.dot[aj, e])
            acc = dm[aj, t[i]]
            for k in range(fr.n):
                acc = ia[acc, ineg[fr.imul(int(fr.Gamma[i, j, k]), int(t[k]))]]
                acc = ia[acc, fr.imul(int(fr.lam[k, j]), int(yl[dm[aj, t[k]], x]))]
            fg[j, i] = acc
    return gam, fg


def build_T_bundle(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair) -> TBundle:
    """Matrices of T1, T2, T3 and S, from their values on unit seeds."""
    fr = _frame(H, I, action)
    n, s = fr.n, fr.s
    dom = fr.seed_space
    cols = {"T1": [], "T2": [], "T3": []}
    for u in _unit_vectors(dom):
        ev = _SeedEval(fr, CocycleSeed.from_vector(I, n, s, u))
        cols["T1"].append(_as_coords(I, ev.T1()))
        cols["T2"].append(_as_coords(I, ev.T2()))
        cols["T3"].append(_as_coords(I, ev.T3()))
    maps = {}
    sizes = {"T1": n * s, "T2": n * s, "T3": n * math.comb(s, 2)}
    for name, c in cols.items():
        cod = I.power(sizes[name])
        mat = np.array(c, dtype=np.int64).T.reshape(cod.rank, dom.rank)
        try:
            maps[name] = Homomorphism(dom, cod, mat)
        except GroupError as exc:
            raise BuilderError(f"{name} is not additive on the seed space; the action is not admissible", name) from exc
    tdom = I.power(n)
    scols = []
    for u in _unit_vectors(tdom):
        t = np.array([I.index(u[b * I.rank:(b + 1) * I.rank]) for b in range(n)], dtype=np.int64)
        gam, fg = _S_image(fr, t)
        scols.append(np.concatenate([_as_coords(I, gam), _as_coords(I, fg)]))
    try:
        S = Homomorphism(tdom, dom, np.array(scols, dtype=np.int64).T.reshape(dom.rank, tdom.rank))
    except GroupError as exc:
        raise BuilderError("S is not additive; the action is not admissible", "S") from exc
    bundle = TBundle(maps["T1"], maps["T2"], maps["T3"], S, fr.lam, fr.Gamma, n, s)
    _check_linearity(fr, bundle)
    return bundle


def _check_linearity(fr: _Frame, bundle: TBundle, samples: int = 3) -> None:
    """The matrices must reproduce direct evaluation on non-unit seeds."""
    rng = np.random.default_rng(0)
    dom = bundle.seed_space
    I = fr.I
    for _ in range(samples):
        vec = tuple(int(rng.integers(0, o)) for o in dom.orders)
        ev = _SeedEval(fr, CocycleSeed.from_vector(I, fr.n, fr.s, vec))
        for name, res in (("T1", ev.T1()), ("T2", ev.T2()), ("T3", ev.T3())):
            hom = getattr(bundle, name)
            got = hom.apply_array(np.array([vec]))[0] if hom.codomain.rank else np.zeros(0, np.int64)
            if not np.array_equal(got, _as_coords(I, res)):
                raise BuilderError(f"{name} is not additive on the seed space; the action is not admissible", name)


@dataclass
class H2Result:
    """H^2 as a subquotient of the seed space with chosen representative seeds."""

    quotient: SubquotientResult
    bundle: TBundle
    I: FiniteAbelianGroup
    seed_order: str = "lex"

    @property
    def order(self) -> int:
        return self.quotient.order

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return self.quotient.invariant_factors

    @cached_property
    def _boundaries(self) -> np.ndarray | None:
        Sg = image(self.bundle.S)
        if Sg.order > LEX_COSET_LIMIT:
            return None
        return Sg.element_array()

    def representative_seed(self, coords: Sequence[int]) -> CocycleSeed:
        vec = np.array(self.quotient.lift(coords), dtype=np.int64)
        if self.seed_order == "lex" and self._boundaries is not None:
            dom = self.bundle.seed_space
            coset = dom.reduce_array(vec[None, :] + self._boundaries)
            order = np.lexsort(coset.T[::-1])
            vec = coset[order[0]]
        return CocycleSeed.from_vector(self.I, self.bundle.n, self.bundle.s, [int(v) for v in vec])

    def representatives(self) -> Iterator[tuple[tuple[int, ...], CocycleSeed]]:
        for c in self.quotient.abstract_elements():
            yield c, self.representative_seed(c)

    def coordinates(self, seed: CocycleSeed) -> tuple[int, ...]:
        return self.quotient.coordinates(seed.to_vector())


def compute_h2(H: LinearCycleSet, I: FiniteAbelianGroup, action: ActionPair, seed_order: str = "lex") -> H2Result:
    """(ker T1 & ker T2 & ker T3) / im S with representative seeds."""
    if seed_order not in ("lex", "snf"):
        raise ValueError("seed_order must be 'lex' or 'snf'")
    bundle = build_T_bundle(H, I, action)
    K = kernel(bundle.T)
    J = image(bundle.S)
    if not J.is_subgroup_of(K):
        raise BuilderError("im S is not contained in the kernel of T1, T2, T3", "S")
    return H2Result(subquotient(K, J, check=False), bundle, I, seed_order)


def is_coboundary(seed: CocycleSeed, H, I, action, bundle: TBundle | None = None) -> tuple[GroupElement, ...] | None:
    """Some (t_1, ..., t_n) with S(t) = seed, or None."""
    bundle = bundle or build_T_bundle(H, I, action)
    t = preimage(bundle.S, seed.to_vector())
    if t is None:
        return None
    r = I.rank
    return tuple(I.element(t[b * r:(b + 1) * r]) for b in range(bundle.n))


def kernel_seeds(bundle: TBundle) -> np.ndarray:
    """All seed vectors in the triple kernel (enumeration; small cases only)."""
    K = kernel(bundle.T)
    if K.order > ENUMERATION_THRESHOLD:
        raise GroupError("kernel too large to enumerate")
    return K.element_array()
