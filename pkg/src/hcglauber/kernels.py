"""Hot loops: chain simulation, one-step tallies and the subset sweep for conductance.

Each kernel exists twice: a numba ``@njit`` version and a pure-numpy version.
Set ``HCGLAUBER_DISABLE_NUMBA=1`` to force the numpy path.  Both paths consume
the same SplitMix64 stream, so they produce identical results.

RNG contract: stream ``i`` of seed ``s`` starts at ``mix64(s ^ i)``; its
``k``-th output (``k >= 1``) is ``mix64(start + k * GOLDEN)`` modulo ``2^64``.
A uniform double is ``(x >> 11) * 2^-53``.
"""

from __future__ import annotations

import os

import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1
_INV53 = 1.0 / (1 << 53)
MAX_SUBSET_STATES = 26


def _want_numba() -> bool:
    return os.environ.get("HCGLAUBER_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes", "on")


try:
    if not _want_numba():
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def mix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def stream_start(seed: int, stream: int = 0) -> int:
    return mix64((seed & _MASK) ^ stream)


class SplitMix64:
    """Scalar reference generator; matches the kernel streams draw for draw."""

    __slots__ = ("state",)

    def __init__(self, seed: int, stream: int = 0):
        self.state = stream_start(seed, stream)

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & _MASK
        return mix64(self.state)

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * _INV53


# ---------------------------------------------------------------------------
# numpy implementations


def _mix64_np(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def _uniform_np(x):
    return (x >> np.uint64(11)).astype(np.float64) * _INV53


def _padded_neighbors(indptr, indices, n):
    deg = np.diff(indptr)
    width = int(deg.max()) if n else 0
    pad = np.full((n, max(width, 1)), n, dtype=np.int64)
    for v in range(n):
        pad[v, : deg[v]] = indices[indptr[v] : indptr[v + 1]]
    return pad, width


def _sample_numpy(indptr, indices, n, p_add, p_remove, states, rng, burn_in, steps, batches):
    C = states.shape[0]
    counts = np.zeros((C, batches, n), dtype=np.int64)
    if n == 0:
        return counts, states, rng
    pad, width = _padded_neighbors(indptr, indices, n)
    occ = np.zeros((C, n + 1), dtype=np.int64)
    occ[:, :n] = states
    blocked = np.zeros((C, n + 1), dtype=np.int64)
    for d in range(width):
        np.add.at(blocked, (np.repeat(np.arange(C), n), pad[np.tile(np.arange(n), C), d]), occ[:, :n].ravel())
    rows = np.arange(C)
    gold = np.uint64(GOLDEN)
    samples = steps - burn_in
    with np.errstate(over="ignore"):
        for t in range(1, steps + 1):
            rng = rng + gold
            u1 = _uniform_np(_mix64_np(rng))
            rng = rng + gold
            u2 = _uniform_np(_mix64_np(rng))
            v = (u1 * n).astype(np.int64)
            cur = occ[rows, v]
            remove = (cur == 1) & (u2 < p_remove)
            add = (cur == 0) & (blocked[rows, v] == 0) & (u2 < p_add)
            delta = add.astype(np.int64) - remove.astype(np.int64)
            occ[rows, v] += delta
            if delta.any():
                for d in range(width):
                    blocked[rows, pad[v, d]] += delta
            if t > burn_in:
                b = (t - burn_in - 1) * batches // samples
                counts[:, b, :] += occ[:, :n]
    return counts, occ[:, :n].astype(np.uint8), rng


def _one_step_numpy(indptr, indices, n, p_add, p_remove, state, start, trials):
    counts = np.zeros(n + 1, dtype=np.int64)
    if trials == 0:
        return counts
    if n == 0:
        counts[0] = trials
        return counts
    with np.errstate(over="ignore"):
        k = np.arange(1, 2 * trials + 1, dtype=np.uint64)
        x = _mix64_np(np.uint64(start) + k * np.uint64(GOLDEN))
    u = _uniform_np(x)
    u1, u2 = u[0::2], u[1::2]
    v = (u1 * n).astype(np.int64)
    blocked = np.zeros(n, dtype=np.int64)
    for w in range(n):
        blocked[w] = state[indices[indptr[w] : indptr[w + 1]]].sum()
    occ = state.astype(np.int64)[v]
    moved = np.where(occ == 1, u2 < p_remove, (blocked[v] == 0) & (u2 < p_add))
    counts[:n] = np.bincount(v[moved], minlength=n)
    counts[n] = trials - int(moved.sum())
    return counts


def _subset_numpy(a, qout, q_indptr, q_indices, q_weights):
    N = a.shape[0]
    dtype = a.dtype
    a_sub = np.zeros(1, dtype=dtype)
    cut = np.zeros(1, dtype=dtype)
    for i in range(N):
        # s[S] = sum_{j in S} Q(i, j) over subsets S of the first i states
        s = np.zeros(1, dtype=dtype)
        row = {int(j): w for j, w in zip(q_indices[q_indptr[i] : q_indptr[i + 1]], q_weights[q_indptr[i] : q_indptr[i + 1]])}
        for j in range(i):
            s = np.concatenate([s, s + row.get(j, 0)])
        a_sub = np.concatenate([a_sub, a_sub + a[i]])
        cut = np.concatenate([cut, cut + qout[i] - 2 * s])
    return a_sub, cut


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:
    _U30, _U27, _U31, _U11 = np.uint64(30), np.uint64(27), np.uint64(31), np.uint64(11)
    _UM1, _UM2, _UG = np.uint64(_M1), np.uint64(_M2), np.uint64(GOLDEN)

    @njit(cache=True)
    def _mix64_nb(z):
        z = (z ^ (z >> _U30)) * _UM1
        z = (z ^ (z >> _U27)) * _UM2
        return z ^ (z >> _U31)

    @njit(cache=True)
    def _sample_numba(indptr, indices, n, p_add, p_remove, states, rng, burn_in, steps, batches):
        C = states.shape[0]
        counts = np.zeros((C, batches, n), dtype=np.int64)
        out_states = states.copy()
        out_rng = rng.copy()
        if n == 0:
            return counts, out_states, out_rng
        samples = steps - burn_in
        blocked = np.zeros(n, dtype=np.int64)
        for c in range(C):
            occ = out_states[c]
            for w in range(n):
                blocked[w] = 0
            for w in range(n):
                if occ[w]:
                    for e in range(indptr[w], indptr[w + 1]):
                        blocked[indices[e]] += 1
            r = out_rng[c]
            for t in range(1, steps + 1):
                r = r + _UG
                u1 = float(_mix64_nb(r) >> _U11) * _INV53
                r = r + _UG
                u2 = float(_mix64_nb(r) >> _U11) * _INV53
                v = int(u1 * n)
                if occ[v]:
                    if u2 < p_remove:
                        occ[v] = 0
                        for e in range(indptr[v], indptr[v + 1]):
                            blocked[indices[e]] -= 1
                elif blocked[v] == 0 and u2 < p_add:
                    occ[v] = 1
                    for e in range(indptr[v], indptr[v + 1]):
                        blocked[indices[e]] += 1
                if t > burn_in:
                    b = (t - burn_in - 1) * batches // samples
                    for w in range(n):
                        counts[c, b, w] += occ[w]
            out_rng[c] = r
        return counts, out_states, out_rng

    @njit(cache=True)
    def _one_step_numba(indptr, indices, n, p_add, p_remove, state, start, trials):
        counts = np.zeros(n + 1, dtype=np.int64)
        if n == 0:
            counts[0] = trials
            return counts
        blocked = np.zeros(n, dtype=np.int64)
        for w in range(n):
            for e in range(indptr[w], indptr[w + 1]):
                blocked[w] += state[indices[e]]
        r = np.uint64(start)
        for _ in range(trials):
            r = r + _UG
            u1 = float(_mix64_nb(r) >> _U11) * _INV53
            r = r + _UG
            u2 = float(_mix64_nb(r) >> _U11) * _INV53
            v = int(u1 * n)
            if state[v]:
                moved = u2 < p_remove
            else:
                moved = blocked[v] == 0 and u2 < p_add
            if moved:
                counts[v] += 1
            else:
                counts[n] += 1
        return counts

    @njit(cache=True)
    def _subset_numba(a, qout, q_indptr, q_indices, q_weights):
        N = a.shape[0]
        size = 1 << N
        a_sub = np.zeros(size, dtype=a.dtype)
        cut = np.zeros(size, dtype=a.dtype)
        for mask in range(1, size):
            # peel the highest bit, as the numpy doubling does
            i = N - 1
            while not (mask >> i) & 1:
                i -= 1
            rest = mask ^ (1 << i)
            inner = a_sub[0] * 0
            for e in range(q_indptr[i], q_indptr[i + 1]):
                j = q_indices[e]
                if (rest >> j) & 1:
                    inner += q_weights[e]
            a_sub[mask] = a_sub[rest] + a[i]
            cut[mask] = cut[rest] + qout[i] - 2 * inner
        return a_sub, cut


# ---------------------------------------------------------------------------
# dispatch


def use_numba() -> bool:
    return HAVE_NUMBA and _want_numba()


def sample_chains(indptr, indices, n, p_add, p_remove, states, rng, burn_in, steps, batches):
    """Run ``C`` chains in place of their occupancy rows; return ``(counts, states, rng)``.

    ``counts[c, b, v]`` is the number of post-burn-in sampling times in batch
    ``b`` of chain ``c`` at which ``v`` was occupied.
    """
    args = (
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        int(n),
        float(p_add),
        float(p_remove),
        np.ascontiguousarray(states, dtype=np.uint8),
        np.ascontiguousarray(rng, dtype=np.uint64),
        int(burn_in),
        int(steps),
        int(max(batches, 1)),
    )
    if steps < burn_in:
        raise ValueError("steps must be at least burn_in")
    if steps == burn_in:
        args = args[:-1] + (1,)
    if use_numba():
        return _sample_numba(*args)
    return _sample_numpy(*args)


def one_step_counts(indptr, indices, n, p_add, p_remove, state, start, trials):
    """Outcome tally of ``trials`` independent single steps from ``state``.

    ``counts[v]`` counts flips of vertex ``v``; ``counts[n]`` counts stays.
    """
    args = (
        np.ascontiguousarray(indptr, dtype=np.int64),
        np.ascontiguousarray(indices, dtype=np.int64),
        int(n),
        float(p_add),
        float(p_remove),
        np.ascontiguousarray(state, dtype=np.uint8),
        int(start) & _MASK,
        int(trials),
    )
    if use_numba():
        return _one_step_numba(*args[:6], np.uint64(args[6]), args[7])
    return _one_step_numpy(*args)


def subset_tables(a, qout, q_indptr, q_indices, q_weights):
    """Stationary mass and cut flow of every subset of states (bit ``i`` = state ``i``)."""
    a = np.ascontiguousarray(a)
    if a.shape[0] > MAX_SUBSET_STATES:
        raise ValueError(f"{a.shape[0]} states: subset tables limited to {MAX_SUBSET_STATES}")
    args = (
        a,
        np.ascontiguousarray(qout, dtype=a.dtype),
        np.ascontiguousarray(q_indptr, dtype=np.int64),
        np.ascontiguousarray(q_indices, dtype=np.int64),
        np.ascontiguousarray(q_weights, dtype=a.dtype),
    )
    if use_numba():
        return _subset_numba(*args)
    return _subset_numpy(*args)
