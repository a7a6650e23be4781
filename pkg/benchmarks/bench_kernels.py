"""Time each hot kernel under both backends on fixed inputs.

    python benchmarks/bench_kernels.py [--repeat N]

The numba column excludes compilation (one warm-up call per kernel).
"""

import argparse
import time

import numpy as np

from lcs_cohomology import kernels
from lcs_cohomology.abelian import FiniteAbelianGroup
from lcs_cohomology.actions import action_from_endos, enumerate_actions_trivial
from lcs_cohomology.builder import compute_h2, cocycle_from_seed
from lcs_cohomology.cycleset import trivial_lcs
from lcs_cohomology.oracle import RawSpace, _equations


def _brace_dot(n: int, c: int) -> np.ndarray:
    # h x l = h + l + c h l on Z_n, translated to h.l = h^{x -1} x (h + l)
    times = np.array([[(a + b + c * a * b) % n for b in range(n)] for a in range(n)])
    inv = [int(np.flatnonzero(times[a] == 0)[0]) for a in range(n)]
    return np.array([[times[inv[h], (h + l) % n] for l in range(n)] for h in range(n)])


def workloads():
    G = FiniteAbelianGroup([64])
    dot = _brace_dot(64, 2)
    yield "lcs_violation |H|=64", "lcs_violation", (G.add_table, dot)

    H = trivial_lcs(FiniteAbelianGroup([4, 4]))
    I = FiniteAbelianGroup([4])
    act = action_from_endos(H, I, enumerate_actions_trivial(H, I)[-1])
    h2 = compute_h2(H, I, act)
    pair = cocycle_from_seed(next(iter(h2.representatives()))[1], H, I, act)
    yield "cocycle_violation |H|=16 |I|=4", "cocycle_violation", (
        H.add, H.dot, I.add_table, I.neg_table, act.diamond_tab, act.yleft_tab, pair.alpha.table, pair.f_table)

    Hs = trivial_lcs(FiniteAbelianGroup([2, 2]))
    Is = FiniteAbelianGroup([2, 2])
    acts = enumerate_actions_trivial(Hs, Is)
    act = action_from_endos(Hs, Is, acts[0])
    space = RawSpace.of(Hs.order)
    system = _equations(Hs, Is, act, space).compile(space.n_vars)
    yield "solve_linear oracle Z2^2/Z2^2", "solve_linear", (space.n_vars, Is.add_table, *system)

    rng = np.random.default_rng(0)
    n = 200_000
    yield "components n=2e5", "components", (n, rng.integers(0, n, n), rng.integers(0, n, n))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = sorted(kernels.BACKENDS)
    print(f"{'workload':36s} " + " ".join(f"{b:>12s}" for b in names))
    for label, kernel, inputs in workloads():
        cells = []
        for b in names:
            fn = kernels.BACKENDS[b][kernel]
            fn(*inputs)  # warm-up, compiles under numba
            best = min(_timed(fn, inputs) for _ in range(args.repeat))
            cells.append(f"{best * 1e3:10.2f}ms")
        print(f"{label:36s} " + " ".join(cells))


def _timed(fn, inputs) -> float:
    t0 = time.perf_counter()
    fn(*inputs)
    return time.perf_counter() - t0


if __name__ == "__main__":
    main()
