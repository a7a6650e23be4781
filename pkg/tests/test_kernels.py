import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lcs_cohomology import kernels
from lcs_cohomology.builder import cocycle_from_seed, compute_h2
from lcs_cohomology.extension import ExtensionBatch, build_extension
from lcs_cohomology.oracle import RawSpace, _equations

from conftest import Z, brace_dot, trivial, trivial_actions

pytestmark = pytest.mark.skipif("numba" not in kernels.BACKENDS, reason="numba not installed")

NP, NB = kernels.BACKENDS["numpy"], kernels.BACKENDS.get("numba", {})


def both(name, *args):
    a, b = NP[name](*args), NB[name](*args)
    return a, b


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(4, 2), (8, 4), (9, 3), (16, 4), (16, 8)]), st.integers(0, 10**6), st.booleans())
def test_lcs_scan_parity(nc, seed, corrupt):
    n, c = nc
    G = Z(n)
    dot = brace_dot(n, c)
    if corrupt:
        rng = np.random.default_rng(seed)
        h, l = rng.integers(0, n, 2)
        dot[h, l] = rng.integers(0, n)
    a, b = both("lcs_violation", G.add_table, dot)
    assert a == b
    if not corrupt:
        assert a[0] == -1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_cocycle_scan_parity(seed, corrupt):
    H, I = trivial(2, 2), Z(4)
    acts = trivial_actions(H, I)
    rng = np.random.default_rng(seed)
    act = acts[rng.integers(len(acts))]
    h2 = compute_h2(H, I, act)
    reps = [s for _, s in h2.representatives()]
    pair = cocycle_from_seed(reps[rng.integers(len(reps))], H, I, act)
    beta, f = pair.alpha.table.copy(), pair.f_table.copy()
    if corrupt:
        f[rng.integers(1, 4), rng.integers(1, 4)] = rng.integers(0, 4)
    args = (H.add, H.dot, I.add_table, I.neg_table, act.diamond_tab, act.yleft_tab, beta, f)
    a, b = both("cocycle_violation", *args)
    assert a == b


def test_solver_parity():
    H, I = trivial(2, 2), Z(2)
    space = RawSpace.of(H.order)
    for act in trivial_actions(H, I):
        system = _equations(H, I, act, space).compile(space.n_vars)
        a, b = both("solve_linear", space.n_vars, I.add_table, *system)
        assert np.array_equal(a, b)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 300), st.integers(0, 10**6))
def test_components_parity(n, seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(0, 2 * n))
    u, v = rng.integers(0, n, m), rng.integers(0, n, m)
    a, b = both("components", n, u, v)
    assert np.array_equal(a, b)
    # labels are the smallest member of each component
    assert all(a[x] <= x and a[a[x]] == a[x] for x in range(n))


def test_equivalence_search_parity():
    H, I = trivial(2, 2), Z(2)
    for act in trivial_actions(H, I)[::3]:
        exts = [build_extension(H, I, act, cocycle_from_seed(s, H, I, act)) for _, s in compute_h2(H, I, act).representatives()]
        batch = ExtensionBatch(exts)
        for E in exts:
            args = (I.add_table, I.neg_table, H.add, H.dot, act.diamond_tab, act.yleft_tab,
                    batch.parent, batch.step, batch.gens, E.beta, E.f, batch.beta, batch.f, batch.cand)
            a, b = both("equivalence_search", *args)
            assert np.array_equal(a, b)
            assert (np.asarray(a) >= 0).sum() == 1


@pytest.mark.parametrize("backend", ["numpy", "numba"])
def test_backend_is_chosen_by_environment(backend):
    env = dict(os.environ, LCS_COHOMOLOGY_BACKEND=backend)
    out = subprocess.run(
        [sys.executable, "-c", "from lcs_cohomology import kernels; print(kernels.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == backend


def test_unknown_backend_fails_at_import():
    env = dict(os.environ, LCS_COHOMOLOGY_BACKEND="fortran")
    out = subprocess.run([sys.executable, "-c", "import lcs_cohomology.kernels"], env=env, capture_output=True, text=True)
    assert out.returncode != 0 and "fortran" in out.stderr
