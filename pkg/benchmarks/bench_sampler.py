"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_sampler.py [--steps 200000] [--chains 8] [--repeat 3]

Both paths are called directly, so the environment flag does not matter here
(except that it prevents numba from being imported at all).
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hcglauber import kernels
from hcglauber.chain import _csr, _probabilities
from hcglauber.families import FamilySpec, generate, lattice
from hcglauber.graph import Graph, StateSpace


def _best(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_sampler(G, name, steps, chains, repeat):
    indptr, indices = _csr(G)
    p_add, p_remove = _probabilities(1.0)
    states = np.zeros((chains, G.n), dtype=np.uint8)
    rng = np.array([kernels.stream_start(1, i) for i in range(chains)], dtype=np.uint64)
    args = (indptr, indices, G.n, p_add, p_remove, states, rng, steps // 10, steps, 20)
    rows = []
    t_np, out_np = _best(lambda: kernels._sample_numpy(*args), repeat)
    rows.append(("numpy", t_np))
    if kernels.HAVE_NUMBA:
        kernels._sample_numba(*args[:8], 10, 1)  # compile
        t_nb, out_nb = _best(lambda: kernels._sample_numba(*args), repeat)
        same = np.array_equal(out_np[0], out_nb[0])
        rows.append(("numba", t_nb))
        print(f"sampler  {name:<22} n={G.n:<4} chains={chains} steps={steps}  identical={same}")
    else:
        print(f"sampler  {name:<22} n={G.n:<4} chains={chains} steps={steps}  (numba unavailable)")
    for label, t in rows:
        rate = chains * steps / t / 1e6
        print(f"    {label:<6} {t:9.4f} s   {rate:8.2f} Msteps/s")


def bench_subsets(G, name, repeat):
    space = StateSpace(G)
    N = len(space)
    a = np.array([1] * N, dtype=np.int64)
    indptr, idx, wts, qout = [0], [], [], []
    for i in range(N):
        tot = 0
        for j, _ in space.neighbors(i):
            idx.append(j)
            wts.append(1)
            tot += 1
        qout.append(tot)
        indptr.append(len(idx))
    args = (a, np.array(qout, dtype=np.int64), np.array(indptr), np.array(idx), np.array(wts, dtype=np.int64))
    print(f"subsets  {name:<22} states={N} (2^{N} subsets)")
    t_np, out_np = _best(lambda: kernels._subset_numpy(*args), repeat)
    print(f"    numpy  {t_np:9.4f} s")
    if kernels.HAVE_NUMBA:
        kernels._subset_numba(*args)
        t_nb, out_nb = _best(lambda: kernels._subset_numba(*args), repeat)
        same = all(np.array_equal(x, y) for x, y in zip(out_np, out_nb))
        print(f"    numba  {t_nb:9.4f} s   identical={same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=200_000)
    ap.add_argument("--chains", type=int, default=8)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"numba available: {kernels.HAVE_NUMBA}", flush=True)
    bench_sampler(generate(FamilySpec("complete_bipartite", t=5)).graph, "K_{5,5}", args.steps, args.chains, args.repeat)
    bench_sampler(lattice(8, 2, wrap=True), "8x8 torus", args.steps, args.chains, args.repeat)
    bench_sampler(lattice(32, 2, wrap=True), "32x32 torus", args.steps, 1, args.repeat)
    bench_subsets(generate(FamilySpec("complete_bipartite", t=3)).graph, "K_{3,3}", args.repeat)
    grid = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)])
    bench_subsets(grid, "2x3 grid", args.repeat)


if __name__ == "__main__":
    main()
