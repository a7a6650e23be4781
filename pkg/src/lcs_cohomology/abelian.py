"""Exact arithmetic for finite abelian groups Z_{d1} + ... + Z_{dn}.

Elements are plain tuples of reduced coordinates.  Homomorphisms carry an
integer matrix whose column j is the image of the j-th canonical generator.
Kernels, images and subquotients are computed with integer column/row
elimination (echelon forms for subgroups, a Smith form for quotients); a
brute-force path exists for every one of them so the two can be compared.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np
from sympy import factorint

ENUMERATION_THRESHOLD = 10**6

GroupElement = tuple  # tuple[int, ...], always reduced


class GroupError(ValueError):
    pass


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


class FiniteAbelianGroup:
    """Z_{d1} + ... + Z_{dn}; n = 0 is the trivial group.

    Element indices use mixed radix with the last coordinate varying fastest,
    so index order is lexicographic order on coordinate tuples and index 0 is
    the zero element.
    """

    __slots__ = ("orders", "__dict__")

    def __init__(self, orders: Sequence[int]):
        orders = tuple(int(d) for d in orders)
        if any(d < 2 for d in orders):
            raise GroupError(f"cyclic orders must be >= 2, got {orders}")
        self.orders = orders

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.orders)})"

    def __str__(self) -> str:
        return " + ".join(f"Z{d}" for d in self.orders) if self.orders else "0"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteAbelianGroup) and self.orders == other.orders

    def __hash__(self) -> int:
        return hash(self.orders)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def order(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def exponent(self) -> int:
        return lcm(self.orders)

    @cached_property
    def orders_array(self) -> np.ndarray:
        return np.array(self.orders, dtype=np.int64)

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        strides = []
        acc = 1
        for d in reversed(self.orders):
            strides.append(acc)
            acc *= d
        return tuple(reversed(strides))

    def zero(self) -> GroupElement:
        return (0,) * self.rank

    def generators(self) -> list[GroupElement]:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def element(self, coords: Iterable[int]) -> GroupElement:
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise GroupError(f"element {coords} does not belong to {self}")
        return tuple(c % d for c, d in zip(coords, self.orders))

    def check(self, x: Sequence[int]) -> GroupElement:
        if len(x) != self.rank or any(not 0 <= c < d for c, d in zip(x, self.orders)):
            raise GroupError(f"{tuple(x)} is not a reduced element of {self}")
        return tuple(int(c) for c in x)

    def add(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self.check(x)
        self.check(y)
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: GroupElement) -> GroupElement:
        return tuple((-a) % d for a, d in zip(self.check(x), self.orders))

    def sub(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.add(x, self.neg(y))

    def scale(self, k: int, x: GroupElement) -> GroupElement:
        return tuple((k * a) % d for a, d in zip(self.check(x), self.orders))

    def element_order(self, x: GroupElement) -> int:
        return lcm(d // math.gcd(a, d) for a, d in zip(x, self.orders))

    def index(self, x: Sequence[int]) -> int:
        return sum(int(c) * s for c, s in zip(x, self._strides))

    def element_at(self, i: int) -> GroupElement:
        out = []
        for s, d in zip(self._strides, self.orders):
            out.append((i // s) % d)
        return tuple(out)

    def elements(self) -> Iterator[GroupElement]:
        return itertools.product(*(range(d) for d in self.orders))

    @cached_property
    def coords_array(self) -> np.ndarray:
        """All elements as an (order, rank) array, in index order."""
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grids = np.meshgrid(*(np.arange(d) for d in self.orders), indexing="ij")
        return np.stack([g.reshape(-1) for g in grids], axis=1).astype(np.int64)

    def index_array(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized index of reduced coordinate rows."""
        coords = np.asarray(coords, dtype=np.int64)
        if self.rank == 0:
            return np.zeros(coords.shape[:-1], dtype=np.int64)
        return coords @ np.array(self._strides, dtype=np.int64)

    def reduce_array(self, coords: np.ndarray) -> np.ndarray:
        return np.mod(coords, self.orders_array)

    @cached_property
    def add_table(self) -> np.ndarray:
        c = self.coords_array
        s = self.reduce_array(c[:, None, :] + c[None, :, :])
        return self.index_array(s)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self.index_array(self.reduce_array(-self.coords_array))

    def power(self, k: int) -> "FiniteAbelianGroup":
        """Direct sum of k copies."""
        return FiniteAbelianGroup(self.orders * k)


def direct_sum(*groups: FiniteAbelianGroup) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(tuple(itertools.chain.from_iterable(g.orders for g in groups)))


def add(G: FiniteAbelianGroup, x: GroupElement, y: GroupElement) -> GroupElement:
    return G.add(x, y)


# --------------------------------------------------------------------------
# homomorphisms


def hom_is_well_defined(matrix, dom: FiniteAbelianGroup, cod: FiniteAbelianGroup) -> bool:
    m = np.asarray(matrix, dtype=np.int64).reshape(cod.rank, dom.rank)
    if m.size == 0:
        return True
    scaled = m * dom.orders_array[None, :]
    return not np.mod(scaled, cod.orders_array[:, None]).any()


@dataclass(frozen=True)
class Homomorphism:
    domain: FiniteAbelianGroup
    codomain: FiniteAbelianGroup
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.int64).reshape(self.codomain.rank, self.domain.rank)
        if self.codomain.rank:
            m = np.mod(m, self.codomain.orders_array[:, None])
        if not hom_is_well_defined(m, self.domain, self.codomain):
            raise GroupError("matrix does not define a homomorphism (order condition fails)")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_images(cls, domain, codomain, images: Sequence[GroupElement]) -> "Homomorphism":
        m = np.array(images, dtype=np.int64).reshape(domain.rank, codomain.rank).T
        return cls(domain, codomain, m)

    @classmethod
    def identity(cls, G: FiniteAbelianGroup) -> "Homomorphism":
        return cls(G, G, np.eye(G.rank, dtype=np.int64))

    @classmethod
    def zero(cls, dom: FiniteAbelianGroup, cod: FiniteAbelianGroup) -> "Homomorphism":
        return cls(dom, cod, np.zeros((cod.rank, dom.rank), dtype=np.int64))

    @classmethod
    def scalar(cls, G: FiniteAbelianGroup, k: int) -> "Homomorphism":
        return cls(G, G, k * np.eye(G.rank, dtype=np.int64))

    def __call__(self, x: GroupElement) -> GroupElement:
        return hom_apply(self, x)

    def apply_array(self, xs: np.ndarray) -> np.ndarray:
        """Apply to rows of an (N, domain.rank) coordinate array."""
        return self.codomain.reduce_array(np.asarray(xs, dtype=np.int64) @ self.matrix.T)

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """self o other."""
        if other.codomain != self.domain:
            raise GroupError("composition of incompatible homomorphisms")
        return Homomorphism(other.domain, self.codomain, self.matrix @ other.matrix)

    def __add__(self, other: "Homomorphism") -> "Homomorphism":
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise GroupError("sum of incompatible homomorphisms")
        return Homomorphism(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: "Homomorphism") -> "Homomorphism":
        return self + other.scaled(-1)

    def scaled(self, k: int) -> "Homomorphism":
        return Homomorphism(self.domain, self.codomain, k * self.matrix)

    def power(self, k: int) -> "Homomorphism":
        if self.domain != self.codomain:
            raise GroupError("power of a non-endomorphism")
        out = Homomorphism.identity(self.domain)
        for _ in range(k):
            out = self.compose(out)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Homomorphism)
            and self.domain == other.domain
            and self.codomain == other.codomain
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.matrix.tobytes()))

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and kernel(self).order == 1


def hom_apply(phi: Homomorphism, x: GroupElement) -> GroupElement:
    x = phi.domain.check(x)
    if phi.codomain.rank == 0:
        return ()
    y = phi.matrix @ np.array(x, dtype=np.int64) if x else np.zeros(phi.codomain.rank, np.int64)
    return tuple(int(v) % d for v, d in zip(y, phi.codomain.orders))


# --------------------------------------------------------------------------
# subgroups


@dataclass
class _Pivot:
    col: int
    vec: np.ndarray  # reduced ambient vector
    coeff: np.ndarray  # combination of the original generators
    order: int  # order of vec[col] in Z_{d_col}


def _reduce(v: np.ndarray, orders: np.ndarray) -> np.ndarray:
    return np.mod(v, orders)


class Subgroup:
    """Subgroup of ``ambient`` generated by ``generators``.

    An echelon basis is built lazily: pivot p_i has its first non-zero
    coordinate in column c_i, later pivots vanish on earlier pivot columns,
    and every element is uniquely sum t_i p_i with 0 <= t_i < order_i.
    """

    def __init__(self, ambient: FiniteAbelianGroup, generators: Iterable[Sequence[int]]):
        self.ambient = ambient
        self.generators = tuple(ambient.element(g) for g in generators)

    def __repr__(self) -> str:
        return f"Subgroup({self.ambient}, order={self.order})"

    @cached_property
    def _echelon(self) -> list[_Pivot]:
        G = self.ambient
        orders = G.orders_array
        modulus = G.exponent
        k = len(self.generators)
        rows = []
        for i, g in enumerate(self.generators):
            v = np.array(g, dtype=np.int64)
            if v.any():
                c = np.zeros(k, dtype=np.int64)
                c[i] = 1
                rows.append((v, c))
        pivots = []
        for col, d in enumerate(G.orders):
            live = [(v, c) for v, c in rows if v[col] % d]
            rest = [(v, c) for v, c in rows if not v[col] % d]
            if not live:
                continue
            pv, pc = live[0]
            for v, c in live[1:]:
                a, b = int(pv[col]), int(v[col])
                g, x, y = egcd(a, b)
                new_p = _reduce(x * pv + y * v, orders)
                new_c = np.mod(x * pc + y * c, modulus)
                other = _reduce((b // g) * pv - (a // g) * v, orders)
                other_c = np.mod((b // g) * pc - (a // g) * c, modulus)
                pv, pc = new_p, new_c
                if other.any():
                    rest.append((other, other_c))
            q = d // math.gcd(int(pv[col]), d)
            tail = _reduce(q * pv, orders)
            if tail.any():
                rest.append((tail, np.mod(q * pc, modulus)))
            pivots.append(_Pivot(col, pv, pc, q))
            rows = rest
        return pivots

    @cached_property
    def order(self) -> int:
        return math.prod(p.order for p in self._echelon)

    def express(self, x: Sequence[int]) -> np.ndarray | None:
        """Coefficients c with sum c_i g_i = x, or None if x is not a member."""
        G = self.ambient
        orders = G.orders_array
        v = np.array(G.check(tuple(x)), dtype=np.int64)
        coeff = np.zeros(len(self.generators), dtype=np.int64)
        for p in self._echelon:
            t = self._solve_pivot(p, int(v[p.col]))
            if t is None:
                return None
            v = _reduce(v - t * p.vec, orders)
            coeff = np.mod(coeff + t * p.coeff, G.exponent)
        if v.any():
            return None
        return coeff

    def pivot_coordinates(self, x: Sequence[int]) -> tuple[int, ...] | None:
        """The unique (t_i) with x = sum t_i p_i, 0 <= t_i < order_i."""
        G = self.ambient
        v = np.array(G.check(tuple(x)), dtype=np.int64)
        out = []
        for p in self._echelon:
            t = self._solve_pivot(p, int(v[p.col]))
            if t is None:
                return None
            out.append(t)
            v = _reduce(v - t * p.vec, G.orders_array)
        return tuple(out) if not v.any() else None

    def _solve_pivot(self, p: _Pivot, value: int) -> int | None:
        d = self.ambient.orders[p.col]
        a = int(p.vec[p.col])
        g = math.gcd(a, d)
        if value % g:
            return None
        m = d // g
        if m == 1:
            return 0
        return (value // g) * pow(a // g, -1, m) % m

    def contains(self, x: Sequence[int]) -> bool:
        return self.pivot_coordinates(x) is not None

    def __contains__(self, x) -> bool:
        return self.contains(x)

    def is_subgroup_of(self, other: "Subgroup") -> bool:
        return all(other.contains(g) for g in self.generators)

    @property
    def basis(self) -> list[tuple[GroupElement, int]]:
        """Echelon pivots with their orders (a minimal-ish generating set)."""
        return [(tuple(int(c) for c in p.vec), p.order) for p in self._echelon]

    def elements(self) -> Iterator[GroupElement]:
        G = self.ambient
        piv = self._echelon
        for ts in itertools.product(*(range(p.order) for p in piv)):
            v = np.zeros(G.rank, dtype=np.int64)
            for t, p in zip(ts, piv):
                v = v + t * p.vec
            yield tuple(int(c) for c in _reduce(v, G.orders_array))

    def element_array(self) -> np.ndarray:
        G = self.ambient
        piv = self._echelon
        out = np.zeros((1, G.rank), dtype=np.int64)
        for p in piv:
            steps = np.arange(p.order, dtype=np.int64)[:, None] * p.vec[None, :]
            out = (out[:, None, :] + steps[None, :, :]).reshape(-1, G.rank)
            out = _reduce(out, G.orders_array)
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and self.ambient == other.ambient
            and self.order == other.order
            and self.is_subgroup_of(other)
        )

    def __hash__(self):  # pragma: no cover - subgroups are compared, not hashed
        raise TypeError("Subgroup is unhashable")


def subgroup_by_enumeration(ambient: FiniteAbelianGroup, generators) -> set[GroupElement]:
    """Closure of the generators by breadth-first search (oracle helper)."""
    seen = {ambient.zero()}
    frontier = [ambient.zero()]
    gens = [ambient.element(g) for g in generators]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = ambient.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


# --------------------------------------------------------------------------
# kernel and image


def kernel(phi: Homomorphism, method: str = "lattice") -> Subgroup:
    """Kernel of phi.

    ``lattice`` intersects the domain with one codomain row at a time: the
    current generators are combined by extended gcd so that at most one of
    them is non-zero on the row, and that one is replaced by the smallest
    multiple landing in the kernel.  ``enumerate`` scans the whole domain.
    """
    if method == "enumerate":
        return _kernel_enumerate(phi)
    if method != "lattice":
        raise ValueError(f"unknown method {method!r}")
    dom, cod = phi.domain, phi.codomain
    orders = dom.orders_array
    gens = [row.copy() for row in np.eye(dom.rank, dtype=np.int64)]
    gens = [_reduce(g, orders) for g in gens]
    for j, c in enumerate(cod.orders):
        row = phi.matrix[j]
        vals = [int(row @ g) % c for g in gens]
        live = [i for i, v in enumerate(vals) if v]
        if not live:
            continue
        keep = [gens[i] for i, v in enumerate(vals) if not v]
        pv, pval = gens[live[0]], vals[live[0]]
        for i in live[1:]:
            v, val = gens[i], vals[i]
            g, x, y = egcd(pval, val)
            new_p = _reduce(x * pv + y * v, orders)
            other = _reduce((val // g) * pv - (pval // g) * v, orders)
            pv, pval = new_p, g % c
            if other.any():
                keep.append(other)
        q = c // math.gcd(pval, c)
        tail = _reduce(q * pv, orders)
        if tail.any():
            keep.append(tail)
        gens = [g for g in keep if g.any()]
    return Subgroup(dom, [tuple(int(v) for v in g) for g in gens])


def _kernel_enumerate(phi: Homomorphism) -> Subgroup:
    dom = phi.domain
    if dom.order > ENUMERATION_THRESHOLD:
        raise GroupError("domain too large for enumeration")
    xs = dom.coords_array
    ys = phi.apply_array(xs)
    members = xs[~ys.any(axis=1)] if ys.shape[1] else xs
    return Subgroup(dom, [tuple(int(v) for v in x) for x in members])


def image(phi: Homomorphism, method: str = "lattice") -> Subgroup:
    if method == "enumerate":
        dom = phi.domain
        if dom.order > ENUMERATION_THRESHOLD:
            raise GroupError("domain too large for enumeration")
        ys = np.unique(phi.apply_array(dom.coords_array), axis=0)
        return Subgroup(phi.codomain, [tuple(int(v) for v in y) for y in ys])
    if method != "lattice":
        raise ValueError(f"unknown method {method!r}")
    cols = [tuple(int(v) for v in phi.matrix[:, j]) for j in range(phi.domain.rank)]
    return Subgroup(phi.codomain, cols)


def preimage(phi: Homomorphism, y: Sequence[int]) -> GroupElement | None:
    """Some x with phi(x) = y, or None."""
    im = image(phi)
    coeff = im.express(y)
    if coeff is None:
        return None
    return phi.domain.element(int(c) for c in coeff)


# --------------------------------------------------------------------------
# subquotients


@dataclass
class SubquotientResult:
    """K/J as Z_{f1} + ... + Z_{ft} with f1 | f2 | ... | ft."""

    ambient: FiniteAbelianGroup
    invariant_factors: tuple[int, ...]
    generators: tuple[GroupElement, ...]  # lifts of the cyclic generators into K
    _coord_map: Callable[[GroupElement], tuple[int, ...]] | None = field(default=None, repr=False)

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    def lift(self, coords: Sequence[int]) -> GroupElement:
        """Coset representative of sum coords_i * generator_i."""
        G = self.ambient
        v = np.zeros(G.rank, dtype=np.int64)
        for c, g in zip(coords, self.generators):
            v = v + int(c) * np.array(g, dtype=np.int64)
        return tuple(int(a) for a in _reduce(v, G.orders_array))

    def coordinates(self, x: GroupElement) -> tuple[int, ...]:
        """Abstract coordinates of the coset of x (x must lie in K)."""
        if self._coord_map is None:
            raise GroupError("this result carries no coordinate map")
        return self._coord_map(x)

    def abstract_elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(f) for f in self.invariant_factors))


def _snf_columns(rel: list[list[int]], ncols: int, modulus: int):
    """Diagonalize the row lattice span(rel) + modulus*Z^ncols.

    Returns (diag, V, Vinv) with V invertible mod ``modulus``: the quotient
    Z^ncols / lattice is sum Z/diag_i via y -> (y V)_i, and row i of Vinv is
    a preimage of the i-th cyclic generator.  Every entry is kept mod
    ``modulus``, which is legal because modulus*e_i lies in the lattice.
    """
    M = modulus
    A = [[int(a) % M for a in row] for row in rel]
    while len(A) < ncols:
        A.append([0] * ncols)
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    Vi = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def bezout(a, b):
        # a | b must give x = 1, y = 0, otherwise the pivot oscillates
        if a and b % a == 0:
            return a, 1, 0
        return egcd(a, b)

    def col_op(t, j):
        g, x, y = bezout(A[t][t], A[t][j])
        ag, bg = A[t][t] // g, A[t][j] // g
        for mat in (A, V):
            for row in mat:
                ct, cj = row[t], row[j]
                row[t], row[j] = (x * ct + y * cj) % M, (-bg * ct + ag * cj) % M
        rt, rj = Vi[t], Vi[j]
        Vi[t] = [(ag * u + bg * w) % M for u, w in zip(rt, rj)]
        Vi[j] = [(-y * u + x * w) % M for u, w in zip(rt, rj)]

    def row_op(t, i):
        g, x, y = bezout(A[t][t], A[i][t])
        ag, bg = A[t][t] // g, A[i][t] // g
        rt, ri = A[t], A[i]
        A[t] = [(x * u + y * w) % M for u, w in zip(rt, ri)]
        A[i] = [(-bg * u + ag * w) % M for u, w in zip(rt, ri)]

    diag = []
    t = 0
    while t < ncols:
        best = None
        for i in range(t, len(A)):
            for j in range(t, ncols):
                if A[i][j]:
                    key = (math.gcd(A[i][j], M), i, j)
                    if best is None or key < best:
                        best = key
        if best is None:
            diag.extend([M] * (ncols - t))
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for mat in (A, V):
                for row in mat:
                    row[t], row[j] = row[j], row[t]
            Vi[t], Vi[j] = Vi[j], Vi[t]
        while True:
            for i in range(t + 1, len(A)):
                if A[i][t]:
                    row_op(t, i)
            for j in range(t + 1, ncols):
                if A[t][j]:
                    col_op(t, j)
            if all(not A[i][t] for i in range(t + 1, len(A))):
                break
        g = math.gcd(A[t][t], M)
        bad = next(
            (i for i in range(t + 1, len(A)) if any(A[i][j] % g for j in range(t + 1, ncols))),
            None,
        )
        if bad is not None:
            A[t] = [(u + w) % M for u, w in zip(A[t], A[bad])]
            continue
        A[t] = [0] * ncols
        A[t][t] = g % M
        diag.append(g)
        t += 1
    return diag, V, Vi


def subquotient(K: Subgroup, J: Subgroup, method: str = "snf", check: bool = True) -> SubquotientResult:
    """K/J for subgroups J <= K of a common ambient group."""
    if K.ambient != J.ambient:
        raise GroupError("K and J live in different ambient groups")
    if check and not J.is_subgroup_of(K):
        raise GroupError("subquotient requires J to be contained in K")
    if method == "enumerate":
        return _subquotient_enumerate(K, J)
    if method != "snf":
        raise ValueError(f"unknown method {method!r}")
    G = K.ambient
    kb = [(v, G.element_order(v)) for v, _ in K.basis]
    if not kb:
        return SubquotientResult(G, (), (), lambda x: ())
    jb = [(v, G.element_order(v)) for v, _ in J.basis]
    p = len(kb)
    # relations among the pivots of K modulo J: kernel of (y, z) -> sum y_i k_i - sum z_l j_l
    dom = FiniteAbelianGroup([o for _, o in kb] + [o for _, o in jb])
    psi = Homomorphism.from_images(dom, G, [v for v, _ in kb] + [G.neg(v) for v, _ in jb])
    rel = [list(g[:p]) for g in kernel(psi).generators]
    rel += [[o if i == j else 0 for j in range(p)] for i, (_, o) in enumerate(kb)]
    modulus = lcm(o for _, o in kb)
    diag, V, Vi = _snf_columns(rel, p, modulus)
    keep = [i for i, s in enumerate(diag) if s > 1]
    factors = tuple(diag[i] for i in keep)
    gens = []
    for i in keep:
        v = np.zeros(G.rank, dtype=np.int64)
        for c, (vec, _) in zip(Vi[i], kb):
            v = v + c * np.array(vec, dtype=np.int64)
        gens.append(tuple(int(a) for a in _reduce(v, G.orders_array)))

    def coord_map(x):
        t = K.pivot_coordinates(x)
        if t is None:
            raise GroupError(f"{x} is not in K")
        return tuple(sum(t[l] * V[l][i] for l in range(p)) % diag[i] for i in keep)

    return SubquotientResult(G, factors, tuple(gens), coord_map)


def invariant_factors_from_orders(element_orders: Sequence[int]) -> tuple[int, ...]:
    """Abelian type of a finite abelian group from the multiset of element orders.

    For each prime p the count of elements killed by p^k equals
    p^(sum_i min(k, e_i)), which pins down the exponents e_i.
    """
    n = len(element_orders)
    if n == 1:
        return ()
    per_prime = {}
    for p, top in factorint(n).items():
        logs = []
        for k in range(top + 1):
            c = sum(1 for o in element_orders if (p**k) % o == 0)
            logs.append(round(math.log(c, p)))
        # #{i : e_i >= k} = logs[k] - logs[k-1]
        ge = [logs[k] - logs[k - 1] for k in range(1, top + 1)]
        exps = []
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            exps += [k + 1] * (ge[k] - nxt)
        per_prime[p] = sorted(exps, reverse=True)
    width = max(len(e) for e in per_prime.values())
    factors = []
    for i in range(width):
        f = 1
        for p, exps in per_prime.items():
            if i < len(exps):
                f *= p ** exps[i]
        factors.append(f)
    return tuple(sorted(factors))


def _subquotient_enumerate(K: Subgroup, J: Subgroup) -> SubquotientResult:
    G = K.ambient
    if K.order > ENUMERATION_THRESHOLD:
        raise GroupError("subgroup too large for enumeration")
    jel = J.element_array()

    def rep(x):
        coset = G.reduce_array(np.array(x, dtype=np.int64)[None, :] + jel)
        return min(tuple(int(a) for a in row) for row in coset)

    reps = sorted({rep(x) for x in K.elements()})
    index = {r: i for i, r in enumerate(reps)}

    def q_add(i, j):
        return index[rep(G.add(reps[i], reps[j]))]

    orders = []
    for i in range(len(reps)):
        k, acc = 1, i
        while acc != 0:
            acc = q_add(acc, i)
            k += 1
        orders.append(k)
    factors = invariant_factors_from_orders(orders)
    basis = _find_basis(len(reps), q_add, orders, factors)
    return SubquotientResult(G, factors, tuple(reps[b] for b in basis), None)


def _find_basis(size: int, op: Callable[[int, int], int], orders: Sequence[int],
                factors: Sequence[int]) -> list[int]:
    """Independent generators of the given orders, lexicographically greedy.

    Elements are indices 0..size-1 with 0 the identity.  Slots are filled
    from the largest order down; the search backtracks when a partial choice
    cannot be completed.  Returns generators in the order of ``factors``.
    """
    slots = sorted(range(len(factors)), key=lambda i: (-factors[i], i))
    chosen: dict[int, int] = {}

    def extend(members: np.ndarray, x: int, o: int):
        new = members.copy()
        layer = np.flatnonzero(members)
        for _ in range(o - 1):
            layer = np.array([op(int(a), x) for a in layer])
            if new[layer].any():
                return None
            new[layer] = True
        return new

    def search(pos: int, members: np.ndarray) -> bool:
        if pos == len(slots):
            return bool(members.all())
        f = factors[slots[pos]]
        for x in range(size):
            if orders[x] != f or members[x]:
                continue
            new = extend(members, x, f)
            if new is None:
                continue
            chosen[slots[pos]] = x
            if search(pos + 1, new):
                return True
        return False

    start = np.zeros(size, dtype=bool)
    start[0] = True
    if not search(0, start):
        raise GroupError("no basis of the requested type exists")
    return [chosen[i] for i in range(len(factors))]


# --------------------------------------------------------------------------
# structure of a group given by a table


@dataclass(frozen=True)
class Structure:
    """Decomposition of a finite abelian group given by an operation table."""

    group: FiniteAbelianGroup  # abstract type, one cyclic factor per basis element
    basis: tuple[int, ...]  # element indices of the generators
    coords: np.ndarray  # coords[x] = (k_1..k_s) with x = k_1 a_1 * ... * k_s a_s
    identity: int

    def element(self, coords: Sequence[int]) -> int:
        return int(self._index_of[self.group.index(self.group.element(coords))])

    @cached_property
    def _index_of(self) -> np.ndarray:
        inv = np.empty(self.group.order, dtype=np.int64)
        inv[self.group.index_array(self.coords)] = np.arange(len(self.coords))
        return inv


def check_group_table(table: np.ndarray) -> int:
    """Verify an abelian group table; return the identity index."""
    t = np.asarray(table)
    n = t.shape[0]
    if t.shape != (n, n) or t.min() < 0 or t.max() >= n:
        raise GroupError("operation table is not closed")
    ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n))]
    if not ids:
        raise GroupError("operation table has no identity")
    e = ids[0]
    if not np.array_equal(t, t.T):
        i, j = np.argwhere(t != t.T)[0]
        raise GroupError(f"operation is not commutative at ({i}, {j})")
    left = t[t, :]  # left[a, b, c] = (a*b)*c
    right = t[:, t]  # right[a, b, c] = a*(b*c)
    if not np.array_equal(left, right):
        a, b, c = np.argwhere(left != right)[0]
        raise GroupError(f"operation is not associative at ({a}, {b}, {c})")
    if not all((row == e).any() for row in t):
        raise GroupError("operation table has an element without inverse")
    return e


def structure_from_table(table, elements: Sequence | None = None, primary: bool = False) -> Structure:
    """Decompose a finite abelian group given by its operation table.

    ``table`` is either an (N, N) array of element indices or a callable
    binary operation on ``elements``.  Generators are chosen greedily in
    index order.  With ``primary=False`` the decomposition is by invariant
    factors (so a cyclic group gets one generator); with ``primary=True`` it
    is by prime-power factors ordered by (prime, exponent, generator index).
    """
    if callable(table):
        if elements is None:
            raise GroupError("a callable operation needs the element list")
        pos = {x: i for i, x in enumerate(elements)}
        table = np.array([[pos[table(a, b)] for b in elements] for a in elements], dtype=np.int64)
    t = np.asarray(table, dtype=np.int64)
    e = check_group_table(t)
    n = t.shape[0]
    # relabel so the identity is index 0
    perm = [e] + [x for x in range(n) if x != e]
    back = np.empty(n, dtype=np.int64)
    back[perm] = np.arange(n)
    tt = back[t[np.ix_(perm, perm)]]
    orders = []
    for x in range(n):
        k, acc = 1, x
        while acc != 0:
            acc = int(tt[acc, x])
            k += 1
        orders.append(k)
    factors = invariant_factors_from_orders(orders)
    if primary:
        pf = []
        for f in factors:
            pf += [p**k for p, k in factorint(f).items()]
        factors = tuple(pf)
    op = lambda a, b: int(tt[a, b])
    basis = _find_basis(n, op, orders, factors)
    if primary:
        order_key = lambda i: (min(factorint(factors[i])), factors[i], perm[basis[i]])
        idx = sorted(range(len(factors)), key=order_key)
        factors = tuple(factors[i] for i in idx)
        basis = [basis[i] for i in idx]
    else:
        idx = sorted(range(len(factors)), key=lambda i: (factors[i], perm[basis[i]]))
        factors = tuple(factors[i] for i in idx)
        basis = [basis[i] for i in idx]
    group = FiniteAbelianGroup(factors)
    coords = np.zeros((n, len(factors)), dtype=np.int64)
    seen = np.zeros(n, dtype=bool)
    for ks in group.elements():
        acc = 0
        for k, b in zip(ks, basis):
            for _ in range(k):
                acc = int(tt[acc, b])
        if seen[acc]:
            raise GroupError("basis search produced dependent generators")
        seen[acc] = True
        coords[acc] = ks
    out = np.empty_like(coords)
    out[perm] = coords
    return Structure(group, tuple(perm[b] for b in basis), out, e)
