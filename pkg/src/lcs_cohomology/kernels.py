"""Hot loops, each with a numba implementation and a pure-numpy twin.

The backend is picked once at import time from the environment variable
``LCS_COHOMOLOGY_BACKEND`` (``numba`` or ``numpy``); ``numba`` is the default
when the package imports.  Both backends return identical results, which
the test suite checks directly through :data:`BACKENDS`.

All tables use element indices.  Identity codes returned by the scans:

    LCS scan      0 non-bijective translation (h, l, l'),
                  1 h.(l+m) != h.l + h.m,
                  2 (h+l).m != (h.l).(h.m)
    cocycle scan  0 beta cocycle identity,
                  1 quasi-linearity of f in the second variable,
                  2 horizontal identity linking f and beta

The equivalence search builds phi: H -> I from its values on the additive
generators (one candidate row each) along parent links,
phi(h) = phi(parent[h]) + cand[step[h]] - (beta1 - beta2)(parent[h], gens[step[h]]),
and accepts the first candidate meeting both equivalence equations.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NO_WITNESS = (-1, -1, -1, -1)


# --------------------------------------------------------------------------
# numpy implementations


def _first(mask: np.ndarray):
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def lcs_violation_numpy(add: np.ndarray, dot: np.ndarray):
    n = add.shape[0]
    for h in range(n):
        row = dot[h]
        if len(np.unique(row)) != n:
            # first pair l < l' with equal images
            for l in range(n):
                dup = np.flatnonzero(row[l + 1:] == row[l])
                if len(dup):
                    return (0, h, l, l + 1 + int(dup[0]))
    lhs = dot[:, add]  # lhs[h, l, m] = h.(l+m)
    rhs = add[dot[:, :, None], dot[:, None, :]]
    w = _first(lhs != rhs)
    if w:
        return (1,) + w
    lhs = dot[add[:, :, None], np.arange(n)[None, None, :]]
    rhs = dot[dot[:, :, None], dot[:, None, :]]
    w = _first(lhs != rhs)
    if w:
        return (2,) + w
    return NO_WITNESS


def cocycle_violation_numpy(add, dot, i_add, i_neg, diamond, yleft, beta, f):
    """diamond[h, y] = h<>y and yleft[y, x] = y<x as index tables."""
    n = add.shape[0]
    h = np.arange(n)[:, None, None]
    l = np.arange(n)[None, :, None]
    m = np.arange(n)[None, None, :]
    hl_sum = add[h, l]
    lhs = i_add[beta[h, l], beta[hl_sum, m]]
    rhs = i_add[beta[l, m], beta[h, add[l, m]]]
    w = _first(np.broadcast_to(lhs != rhs, (n, n, n)))
    if w:
        return (0,) + w
    hl, hm = dot[h, l], dot[h, m]
    lhs = f[h, add[l, m]]
    rhs = i_add[i_add[f[h, l], f[h, m]], i_add[beta[hl, hm], i_neg[diamond[h, beta[l, m]]]]]
    w = _first(np.broadcast_to(lhs != rhs, (n, n, n)))
    if w:
        return (1,) + w
    x = dot[hl_sum, m]
    lhs = f[hl_sum, m]
    t1 = f[hl, hm]
    t2 = diamond[hl, f[h, m]]
    t3 = yleft[diamond[hl, f[h, l]], x]
    t4 = i_neg[yleft[diamond[hl_sum, beta[h, l]], x]]
    rhs = i_add[i_add[t1, t2], i_add[t3, t4]]
    w = _first(np.broadcast_to(lhs != rhs, (n, n, n)))
    if w:
        return (2,) + w
    return NO_WITNESS


def solve_linear_numpy(n_vars, i_add, endo, trig_ptr, trig_ids, term_ptr, term_var, term_endo):
    """All assignments (lexicographic) satisfying every homogeneous constraint.

    Level-synchronous expansion: partial assignments are extended by every
    value of the next variable and filtered by the constraints whose last
    variable is the one just assigned.
    """
    n_i = i_add.shape[0]
    partial = np.zeros((1, 0), dtype=np.int64)
    for v in range(n_vars):
        reps = np.repeat(partial, n_i, axis=0)
        vals = np.tile(np.arange(n_i, dtype=np.int64), partial.shape[0])[:, None]
        partial = np.concatenate([reps, vals], axis=1)
        keep = np.ones(partial.shape[0], dtype=bool)
        for c in trig_ids[trig_ptr[v]:trig_ptr[v + 1]]:
            acc = np.zeros(partial.shape[0], dtype=np.int64)
            for t in range(term_ptr[c], term_ptr[c + 1]):
                acc = i_add[acc, endo[term_endo[t], partial[:, term_var[t]]]]
            keep &= acc == 0
        partial = partial[keep]
    return partial


def components_numpy(n, edges_u, edges_v):
    """Connected-component labels (smallest member) by min-label propagation."""
    labels = np.arange(n, dtype=np.int64)
    if len(edges_u) == 0:
        return labels
    while True:
        m = np.minimum(labels[edges_u], labels[edges_v])
        new = labels.copy()
        np.minimum.at(new, edges_u, m)
        np.minimum.at(new, edges_v, m)
        new = new[new]
        if np.array_equal(new, labels):
            return labels
        labels = new


def _phi_rows(i_add, i_neg, parent, step, gens, dbeta, cand):
    """phi for every (target, candidate): shape (K, m, |H|)."""
    K, m, nh = dbeta.shape[0], cand.shape[0], parent.shape[0]
    phi = np.zeros((K, m, nh), dtype=np.int64)
    for h in range(1, nh):
        p, i = parent[h], step[h]
        phi[:, :, h] = i_add[i_add[phi[:, :, p], cand[None, :, i]], i_neg[dbeta[:, p, gens[i]]][:, None]]
    return phi


def equivalence_search_numpy(i_add, i_neg, add, dot, diamond, yleft, parent, step, gens,
                             beta1, f1, beta2, f2, cand, max_elements=1 << 22):
    """First accepted candidate per target (beta2[k], f2[k]), or -1."""
    K, nh = beta2.shape[0], add.shape[0]
    out = np.full(K, -1, dtype=np.int64)
    if K == 0 or cand.shape[0] == 0:
        return out
    hidx = np.arange(nh)[:, None]
    chunk = max(1, max_elements // (cand.shape[0] * nh * nh))
    for lo in range(0, K, chunk):
        b2, ff = beta2[lo:lo + chunk], f2[lo:lo + chunk]
        dbeta = i_add[beta1[None], i_neg[b2]]
        phi = _phi_rows(i_add, i_neg, parent, step, gens, dbeta, cand)
        lhs1 = i_add[i_add[phi[:, :, :, None], i_neg[phi[:, :, add]]], phi[:, :, None, :]]
        ok = (lhs1 == dbeta[:, None]).all(axis=(2, 3))
        lhs3 = i_add[phi[:, :, dot], f1[None, None]]
        rhs3 = i_add[i_add[diamond[hidx, phi[:, :, None, :]], ff[:, None]],
                     yleft[diamond[hidx, phi[:, :, :, None]], dot]]
        ok &= (lhs3 == rhs3).all(axis=(2, 3))
        hit = ok.any(axis=1)
        out[lo:lo + len(b2)] = np.where(hit, np.argmax(ok, axis=1), -1)
    return out


# --------------------------------------------------------------------------
# numba implementations


if numba is not None:
    njit = numba.njit(cache=True, nogil=True)

    @njit
    def _lcs_violation_nb(add, dot):
        n = add.shape[0]
        for h in range(n):
            for l in range(n):
                for l2 in range(l + 1, n):
                    if dot[h, l] == dot[h, l2]:
                        return 0, h, l, l2
        for h in range(n):
            for l in range(n):
                for m in range(n):
                    if dot[h, add[l, m]] != add[dot[h, l], dot[h, m]]:
                        return 1, h, l, m
        for h in range(n):
            for l in range(n):
                for m in range(n):
                    if dot[add[h, l], m] != dot[dot[h, l], dot[h, m]]:
                        return 2, h, l, m
        return -1, -1, -1, -1

    @njit
    def _cocycle_violation_nb(add, dot, i_add, i_neg, diamond, yleft, beta, f):
        n = add.shape[0]
        for h in range(n):
            for l in range(n):
                for m in range(n):
                    if i_add[beta[h, l], beta[add[h, l], m]] != i_add[beta[l, m], beta[h, add[l, m]]]:
                        return 0, h, l, m
        for h in range(n):
            for l in range(n):
                for m in range(n):
                    hl = dot[h, l]
                    hm = dot[h, m]
                    rhs = i_add[i_add[f[h, l], f[h, m]], i_add[beta[hl, hm], i_neg[diamond[h, beta[l, m]]]]]
                    if f[h, add[l, m]] != rhs:
                        return 1, h, l, m
        for h in range(n):
            for l in range(n):
                s = add[h, l]
                hl = dot[h, l]
                for m in range(n):
                    x = dot[s, m]
                    t1 = f[hl, dot[h, m]]
                    t2 = diamond[hl, f[h, m]]
                    t3 = yleft[diamond[hl, f[h, l]], x]
                    t4 = i_neg[yleft[diamond[s, beta[h, l]], x]]
                    if f[s, m] != i_add[i_add[t1, t2], i_add[t3, t4]]:
                        return 2, h, l, m
        return -1, -1, -1, -1

    @njit
    def _solve_linear_nb(n_vars, i_add, endo, trig_ptr, trig_ids, term_ptr, term_var, term_endo):
        n_i = i_add.shape[0]
        cap = 1024
        out = np.empty((cap, max(n_vars, 1)), dtype=np.int64)
        count = 0
        val = np.full(max(n_vars, 1), -1, dtype=np.int64)
        if n_vars == 0:
            return np.zeros((1, 0), dtype=np.int64)
        v = 0
        while v >= 0:
            val[v] += 1
            if val[v] >= n_i:
                val[v] = -1
                v -= 1
                continue
            ok = True
            for q in range(trig_ptr[v], trig_ptr[v + 1]):
                c = trig_ids[q]
                acc = 0
                for t in range(term_ptr[c], term_ptr[c + 1]):
                    acc = i_add[acc, endo[term_endo[t], val[term_var[t]]]]
                if acc != 0:
                    ok = False
                    break
            if not ok:
                continue
            if v == n_vars - 1:
                if count == cap:
                    bigger = np.empty((2 * cap, n_vars), dtype=np.int64)
                    bigger[:cap] = out
                    out = bigger
                    cap *= 2
                out[count] = val
                count += 1
            else:
                v += 1
        return out[:count].copy()

    @njit
    def _find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    @njit
    def _components_nb(n, edges_u, edges_v):
        parent = np.arange(n)
        for e in range(len(edges_u)):
            a = _find(parent, edges_u[e])
            b = _find(parent, edges_v[e])
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b
        for x in range(n):
            parent[x] = _find(parent, x)
        return parent

    @njit
    def _equivalence_search_nb(i_add, i_neg, add, dot, diamond, yleft, parent, step, gens,
                               beta1, f1, beta2, f2, cand):
        K, nh, m = beta2.shape[0], add.shape[0], cand.shape[0]
        out = np.full(K, -1, dtype=np.int64)
        phi = np.zeros(nh, dtype=np.int64)
        for k in range(K):
            for c in range(m):
                for h in range(1, nh):
                    p = parent[h]
                    g = gens[step[h]]
                    db = i_add[beta1[p, g], i_neg[beta2[k, p, g]]]
                    phi[h] = i_add[i_add[phi[p], cand[c, step[h]]], i_neg[db]]
                ok = True
                for h in range(nh):
                    for l in range(nh):
                        lhs = i_add[i_add[phi[h], i_neg[phi[add[h, l]]]], phi[l]]
                        if lhs != i_add[beta1[h, l], i_neg[beta2[k, h, l]]]:
                            ok = False
                            break
                        hl = dot[h, l]
                        rhs = i_add[i_add[diamond[h, phi[l]], f2[k, h, l]], yleft[diamond[h, phi[h]], hl]]
                        if i_add[phi[hl], f1[h, l]] != rhs:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    out[k] = c
                    break
        return out

    def equivalence_search_numba(i_add, i_neg, add, dot, diamond, yleft, parent, step, gens,
                                 beta1, f1, beta2, f2, cand):
        args = [_i64(a) for a in (i_add, i_neg, add, dot, diamond, yleft, parent, step, gens,
                                  beta1, f1, beta2, f2, cand)]
        return _equivalence_search_nb(*args)

    def lcs_violation_numba(add, dot):
        return tuple(int(v) for v in _lcs_violation_nb(_i64(add), _i64(dot)))

    def cocycle_violation_numba(add, dot, i_add, i_neg, diamond, yleft, beta, f):
        args = [_i64(a) for a in (add, dot, i_add, i_neg, diamond, yleft, beta, f)]
        return tuple(int(v) for v in _cocycle_violation_nb(*args))

    def solve_linear_numba(n_vars, i_add, endo, trig_ptr, trig_ids, term_ptr, term_var, term_endo):
        args = [_i64(a) for a in (i_add, endo, trig_ptr, trig_ids, term_ptr, term_var, term_endo)]
        return _solve_linear_nb(n_vars, *args)

    def components_numba(n, edges_u, edges_v):
        return _components_nb(n, _i64(edges_u), _i64(edges_v))


def _i64(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int64)


def _wrap_numpy(fn):
    def run(*args):
        return tuple(int(v) for v in fn(*[_i64(a) if isinstance(a, np.ndarray) else a for a in args]))
    return run


BACKENDS = {
    "numpy": {
        "lcs_violation": _wrap_numpy(lcs_violation_numpy),
        "cocycle_violation": _wrap_numpy(cocycle_violation_numpy),
        "solve_linear": solve_linear_numpy,
        "components": components_numpy,
        "equivalence_search": equivalence_search_numpy,
    }
}
if numba is not None:
    BACKENDS["numba"] = {
        "lcs_violation": lcs_violation_numba,
        "cocycle_violation": cocycle_violation_numba,
        "solve_linear": solve_linear_numba,
        "components": components_numba,
        "equivalence_search": equivalence_search_numba,
    }

BACKEND = os.environ.get("LCS_COHOMOLOGY_BACKEND", "numba" if numba is not None else "numpy")
if BACKEND not in BACKENDS:
    raise ImportError(f"LCS_COHOMOLOGY_BACKEND={BACKEND!r} is not available ({sorted(BACKENDS)})")

lcs_violation = BACKENDS[BACKEND]["lcs_violation"]
cocycle_violation = BACKENDS[BACKEND]["cocycle_violation"]
solve_linear = BACKENDS[BACKEND]["solve_linear"]
components = BACKENDS[BACKEND]["components"]
equivalence_search = BACKENDS[BACKEND]["equivalence_search"]
