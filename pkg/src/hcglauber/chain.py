"""Glauber dynamics for the hard-core model: simulation and exact analysis.

Kernel: pick ``v`` uniformly; if ``v`` is occupied remove it with probability
``1/(λ+1)``; if ``v`` is free and unblocked add it with probability
``λ/(λ+1)``; otherwise stay.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .errors import BudgetExceeded, InvalidInput
from .families import blowup_doubling, gk_canonical_mis, lift_to_blowup
from .graph import Graph, StateSpace, as_mask, is_independent, members, popcount
from .hardcore import DistributionTable, is_exact, parse_fugacity, stationary_weights

DEFAULT_MIX_CAP = 4096


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class ChainConfig:
    lam: Fraction | float
    seed: int = 0
    steps: int = 0
    chains: int = 1
    burn_in: int = 0
    initial: str | tuple[int, ...] = "empty"
    batches: int = 20

    def __post_init__(self):
        object.__setattr__(self, "lam", parse_fugacity(self.lam))
        if self.steps < 0 or self.burn_in < 0:
            raise InvalidInput("steps and burn-in must be non-negative")
        if self.chains < 1:
            raise InvalidInput("at least one chain is required")
        if self.batches < 1:
            raise InvalidInput("batches must be positive")
        if not 0 <= self.seed < 1 << 64:
            raise InvalidInput("seed must be a 64-bit unsigned integer")
        if isinstance(self.initial, str) and self.initial not in ("empty", "greedy"):
            raise InvalidInput(f"unknown initial-state policy {self.initial!r}")


def _probabilities(lam) -> tuple[float, float]:
    lam = float(lam)
    return lam / (lam + 1.0), 1.0 / (lam + 1.0)


def _csr(G: Graph) -> tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(G.n + 1, dtype=np.int64)
    indices = []
    for v in range(G.n):
        nb = sorted(G.adj[v])
        indices.extend(nb)
        indptr[v + 1] = indptr[v] + len(nb)
    return indptr, np.asarray(indices, dtype=np.int64)


def initial_state(G: Graph, policy) -> tuple[int, ...]:
    if policy == "empty":
        return ()
    if policy == "greedy":
        chosen = 0
        for v in range(G.n):
            if not G.nbr[v] & chosen:
                chosen |= 1 << v
        return members(chosen)
    m = as_mask(policy, G.n)
    if not is_independent(G, m):
        raise InvalidInput(f"initial state {members(m)} is not independent")
    return members(m)


def step(G: Graph, lam, I, rng: kernels.SplitMix64) -> tuple[int, ...]:
    """One Glauber move; draws two uniforms from ``rng`` exactly like the batch kernels."""
    m = as_mask(I, G.n)
    if not is_independent(G, m):
        raise InvalidInput(f"{members(m)} is not independent")
    if G.n == 0:
        rng.uniform(), rng.uniform()
        return ()
    p_add, p_remove = _probabilities(parse_fugacity(lam))
    v = int(rng.uniform() * G.n)
    u = rng.uniform()
    bit = 1 << v
    if m & bit:
        if u < p_remove:
            m ^= bit
    elif not G.nbr[v] & m and u < p_add:
        m |= bit
    return members(m)


@dataclass
class ChainRun:
    final: tuple[int, ...]
    visits: np.ndarray  # per-vertex occupied sampling times after burn-in
    samples: int


def _occupancy_row(G: Graph, S) -> np.ndarray:
    row = np.zeros(G.n, dtype=np.uint8)
    row[list(S)] = 1
    return row


def _run_streams(G: Graph, cfg: ChainConfig, streams: Sequence[int]):
    indptr, indices = _csr(G)
    start = initial_state(G, cfg.initial)
    states = np.tile(_occupancy_row(G, start), (len(streams), 1))
    rng = np.array([kernels.stream_start(cfg.seed, i) for i in streams], dtype=np.uint64)
    p_add, p_remove = _probabilities(cfg.lam)
    return kernels.sample_chains(indptr, indices, G.n, p_add, p_remove, states, rng, cfg.burn_in, cfg.steps, cfg.batches)


def run_chain(G: Graph, cfg: ChainConfig, stream: int = 0) -> ChainRun:
    """Run one chain (RNG stream ``stream``) for ``cfg.steps`` steps."""
    counts, states, _ = _run_streams(G, cfg, [stream])
    final = tuple(int(v) for v in np.flatnonzero(states[0]))
    return ChainRun(final, counts[0].sum(axis=0), cfg.steps - cfg.burn_in)


@dataclass
class ActivationEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    chains: int
    steps: int
    samples_per_chain: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex", "mean", "stderr", "chains", "steps"])
        for v, (m, s) in enumerate(zip(self.mean, self.stderr)):
            w.writerow([v, repr(float(m)), repr(float(s)), self.chains, self.steps])
        return buf.getvalue()


def _stream_counts(args):
    G, cfg, streams = args
    return _run_streams(G, cfg, streams)[0]


def estimate_activation(G: Graph, cfg: ChainConfig, workers: int = 1) -> ActivationEstimate:
    """Per-vertex occupancy with batch-means standard errors.

    Every post-burn-in step is a sampling time.  Each chain's samples are cut
    into ``cfg.batches`` consecutive batches; the standard error is the sample
    deviation of all batch means over ``sqrt(chains * batches)``.
    """
    samples = cfg.steps - cfg.burn_in
    if samples <= 0:
        raise InvalidInput("need steps > burn-in to estimate occupancy")
    batches = min(cfg.batches, samples)
    cfg = ChainConfig(cfg.lam, cfg.seed, cfg.steps, cfg.chains, cfg.burn_in, cfg.initial, batches)
    streams = list(range(cfg.chains))
    if workers > 1 and cfg.chains > 1:
        parts = [streams[i::workers] for i in range(workers) if streams[i::workers]]
        with ProcessPoolExecutor(max_workers=len(parts)) as pool:
            results = list(pool.map(_stream_counts, [(G, cfg, p) for p in parts]))
        counts = np.zeros((cfg.chains, batches, G.n), dtype=np.int64)
        for p, c in zip(parts, results):
            counts[p] = c
    else:
        counts = _run_streams(G, cfg, streams)[0]
    sizes = np.bincount(np.arange(samples) * batches // samples, minlength=batches).astype(float)
    means = counts / sizes[None, :, None]
    flat = means.reshape(-1, G.n)
    mean = counts.sum(axis=(0, 1)) / (samples * cfg.chains)
    if flat.shape[0] > 1:
        stderr = flat.std(axis=0, ddof=1) / math.sqrt(flat.shape[0])
    else:
        stderr = np.full(G.n, np.nan)
    return ActivationEstimate(mean, stderr, cfg.chains, cfg.steps, samples)


def one_step_frequencies(G: Graph, lam, I, trials: int, seed: int = 0) -> dict[tuple[int, ...], int]:
    """Tally of the successor state over ``trials`` independent single steps from ``I``."""
    m = as_mask(I, G.n)
    if not is_independent(G, m):
        raise InvalidInput(f"{members(m)} is not independent")
    indptr, indices = _csr(G)
    p_add, p_remove = _probabilities(parse_fugacity(lam))
    counts = kernels.one_step_counts(indptr, indices, G.n, p_add, p_remove, _occupancy_row(G, members(m)), kernels.stream_start(seed), trials)
    out = {members(m): int(counts[G.n])}
    for v in range(G.n):
        if counts[v]:
            out[members(m ^ (1 << v))] = int(counts[v])
    return out


# ---------------------------------------------------------------------------
# exact transition structure


@dataclass
class TransitionMatrix:
    """Row-sparse transition probabilities; ``rows[i]`` maps target index to probability."""

    space: StateSpace
    rows: list[dict[int, Fraction | float]]
    exact: bool
    lam: Fraction | float

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i].get(j, 0)

    def row_sums(self) -> list:
        return [sum(r.values()) for r in self.rows]

    def dense(self) -> np.ndarray:
        N = len(self.rows)
        P = np.zeros((N, N))
        for i, r in enumerate(self.rows):
            for j, p in r.items():
                P[i, j] = float(p)
        return P

    def sparse(self):
        from scipy.sparse import csr_matrix

        data, ri, ci = [], [], []
        for i, r in enumerate(self.rows):
            for j, p in r.items():
                ri.append(i)
                ci.append(j)
                data.append(float(p))
        N = len(self.rows)
        return csr_matrix((data, (ri, ci)), shape=(N, N))


def _check_cap(G: Graph, cap: int) -> StateSpace:
    return StateSpace(G, cap)


def transition_matrix(G: Graph, lam, cap: int = DEFAULT_MIX_CAP, space: StateSpace | None = None) -> TransitionMatrix:
    lam = parse_fugacity(lam)
    space = space or _check_cap(G, cap)
    n = G.n
    one = Fraction(1) if is_exact(lam) else 1.0
    if n == 0:
        return TransitionMatrix(space, [{0: one}], is_exact(lam), lam)
    p_add = lam / (n * (lam + 1))
    p_rem = one / (n * (lam + 1))
    rows = []
    for i in range(len(space)):
        row, out = {}, one * 0
        for j, move in space.neighbors(i):
            p = p_add if move > 0 else p_rem
            row[j] = p
            out += p
        row[i] = one - out
        rows.append(dict(sorted(row.items())))
    return TransitionMatrix(space, rows, is_exact(lam), lam)


def reversibility_violations(P: TransitionMatrix, pi: DistributionTable) -> list[tuple[int, int]]:
    bad = []
    for i, r in enumerate(P.rows):
        for j, p in r.items():
            if j > i and pi.weights[i] * p != pi.weights[j] * P.rows[j].get(i, 0):
                bad.append((i, j))
    return bad


def apply(P: TransitionMatrix, mu: Sequence) -> list:
    out = [mu[0] * 0] * len(mu)
    for i, r in enumerate(P.rows):
        if mu[i]:
            for j, p in r.items():
                out[j] += mu[i] * p
    return out


def distribution_after(P: TransitionMatrix, start: DistributionTable, t: int) -> DistributionTable:
    if t < 0:
        raise InvalidInput("t must be non-negative")
    if len(start.weights) != len(P.rows):
        raise InvalidInput("start distribution lives on a different state space")
    mu = list(start.weights)
    for _ in range(t):
        mu = apply(P, mu)
    return DistributionTable(P.space, mu, start.exact and P.exact)


def total_variation(mu, nu) -> Fraction | float:
    a = mu.weights if isinstance(mu, DistributionTable) else mu
    b = nu.weights if isinstance(nu, DistributionTable) else nu
    if len(a) != len(b):
        raise InvalidInput("distributions are indexed by different state spaces")
    return sum(abs(x - y) for x, y in zip(a, b)) / 2


# ---------------------------------------------------------------------------
# mixing time


@dataclass
class MixingResult:
    tau: int
    series: list[tuple[int, float]]  # (t, max_I TV(μ_I^t, π))
    mode: str  # "exact", "certified" or "double"
    states: int
    certified: bool = True


def _flip_tables(space: StateSpace):
    """Per vertex: (source indices, destination indices, +1 add / -1 remove)."""
    G = space.graph
    srcs = [[] for _ in range(G.n)]
    dsts = [[] for _ in range(G.n)]
    kinds = [[] for _ in range(G.n)]
    for i in range(len(space)):
        for j, move in space.neighbors(i):
            v = abs(move) - 1
            srcs[v].append(i)
            dsts[v].append(j)
            kinds[v].append(1 if move > 0 else -1)
    return [(np.array(s, dtype=np.int64), np.array(d, dtype=np.int64), np.array(k)) for s, d, k in zip(srcs, dsts, kinds)]


def _mixing_exact(space: StateSpace, lam: Fraction, eps: Fraction, max_steps: int) -> MixingResult:
    # integer form: A = n(p+q) P with λ = p/q; row t of R holds D^t μ_I^t
    G = space.graph
    N, n = len(space), G.n
    p, q = lam.numerator, lam.denominator
    D = n * (p + q) if n else 1
    a = np.array([p**k * q ** (n - k) for k in space.sizes], dtype=object)
    W = int(a.sum())
    flips = _flip_tables(space)
    diag = np.full(N, D, dtype=object)
    for src, _, kind in flips:
        for i, k in zip(src.tolist(), kind.tolist()):
            diag[i] -= p if k > 0 else q
    R = np.zeros((N, N), dtype=object)
    R[np.arange(N), np.arange(N)] = 1
    Dt = 1
    series = []
    en, ed = eps.numerator, eps.denominator
    for t in range(max_steps + 1):
        diff = np.abs(R * W - a[None, :] * Dt).sum(axis=1)
        worst = max(diff.tolist())
        series.append((t, float(Fraction(worst, 2 * W * Dt))))
        if ed * worst <= 2 * en * W * Dt:
            return MixingResult(t, series, "exact", N)
        new = R * diag[None, :]
        for src, dst, kind in flips:
            w = np.where(kind > 0, p, q).astype(object)
            new[:, dst] += R[:, src] * w[None, :]
        R = new
        Dt *= D
    raise BudgetExceeded(f"mixing time exceeds {max_steps} steps")


def _mixing_float(space: StateSpace, lam: float, max_steps: int):
    G = space.graph
    N, n = len(space), G.n
    lamf = float(lam)
    w = np.array(stationary_weights(space, lamf), dtype=float)
    pi = w / w.sum()
    D = n * (lamf + 1) if n else 1.0
    flips = _flip_tables(space)
    diag = np.ones(N)
    for src, _, kind in flips:
        np.subtract.at(diag, src, np.where(kind > 0, lamf, 1.0) / D)
    R = np.eye(N)
    series = []
    for t in range(max_steps + 1):
        tv = 0.5 * np.abs(R - pi[None, :]).sum(axis=1).max()
        series.append((t, float(tv)))
        yield t, float(tv), series
        new = R * diag[None, :]
        for src, dst, kind in flips:
            new[:, dst] += R[:, src] * (np.where(kind > 0, lamf, 1.0) / D)[None, :]
        R = new


def exact_mixing_time(
    G: Graph,
    lam,
    eps=Fraction(1, 4),
    cap: int = DEFAULT_MIX_CAP,
    exact_states: int = 48,
    max_steps: int = 200_000,
    space: StateSpace | None = None,
) -> MixingResult:
    """Smallest ``t`` with ``max_I TV(μ_I^t, π) <= ε``, iterating all point-mass starts.

    Rational ``λ``: integer arithmetic when there are at most ``exact_states``
    states; otherwise double iteration whose every comparison with ``ε`` is
    certified by a rounding-error margin, falling back to integer arithmetic
    if a comparison lands inside the margin.  Float ``λ``: plain doubles.
    """
    lam = parse_fugacity(lam)
    eps = Fraction(eps) if not isinstance(eps, float) else eps
    if not 0 < eps <= 1:
        raise InvalidInput("ε must lie in (0, 1]")
    space = space or _check_cap(G, cap)
    N = len(space)
    if is_exact(lam) and not isinstance(eps, float) and N <= exact_states:
        return _mixing_exact(space, lam, eps, max_steps)
    u = 2.0**-52
    epsf = float(eps)
    for t, tv, series in _mixing_float(space, lam, max_steps):
        if not is_exact(lam) or isinstance(eps, float):
            if tv <= epsf:
                return MixingResult(t, series, "double", N, certified=False)
            continue
        margin = 4 * u * (t + 1) * (2 * G.n + 4 + N)
        if abs(tv - epsf) <= margin:
            if N > 4 * exact_states:
                raise BudgetExceeded(f"TV at t={t} within rounding margin of ε and state space too large for exact fallback")
            return _mixing_exact(space, lam, eps, max_steps)
        if tv < epsf:
            return MixingResult(t, series, "certified", N)
    raise BudgetExceeded(f"mixing time exceeds {max_steps} steps")


def mixing_csv(res: MixingResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "maxTV"])
    for t, tv in res.series:
        w.writerow([t, repr(tv)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# spectra and conductance


@dataclass
class Spectrum:
    eigenvalues: np.ndarray  # descending
    lambda1: float
    lambda_last: float
    lambda_max: float
    gap: float


def spectrum(G: Graph, lam, cap: int = 2000, space: StateSpace | None = None) -> Spectrum:
    """Eigenvalues of ``P`` via the symmetric matrix ``D^{1/2} P D^{-1/2}`` (``D = diag π``)."""
    space = space or _check_cap(G, cap)
    if len(space) > cap:
        raise BudgetExceeded(f"{len(space)} states exceed the eigensolver cap {cap}")
    lam = parse_fugacity(lam)
    P = transition_matrix(G, float(lam), space=space).dense()
    w = np.array(stationary_weights(space, float(lam)))
    s = np.sqrt(w / w.sum())
    S = s[:, None] * P / s[None, :]
    S = (S + S.T) / 2
    ev = np.sort(np.linalg.eigvalsh(S))[::-1]
    l1 = float(ev[1]) if len(ev) > 1 else 0.0
    ll = float(ev[-1]) if len(ev) > 1 else 0.0
    lmax = max(l1, abs(ll))
    return Spectrum(ev, l1, ll, lmax, 1.0 - l1)


def spectral_mixing_bounds(lambda_max: float, pi_min: float, eps: float = 0.25) -> tuple[float, float]:
    """``(lower, upper)`` mixing-time bounds from the relaxation time."""
    if not 0 <= lambda_max < 1:
        raise InvalidInput("λ_max must lie in [0, 1)")
    if not 0 < pi_min <= 1:
        raise InvalidInput("π_min must lie in (0, 1]")
    if not 0 < eps < 1:
        raise InvalidInput("ε must lie in (0, 1)")
    rel = 1.0 / (1.0 - lambda_max)
    upper = rel * (math.log(1 / pi_min) + math.log(1 / eps))
    lower = 0.5 * lambda_max * rel * math.log(1 / (2 * eps))
    return lower, upper


@dataclass
class Conductance:
    phi: Fraction | float
    subset: tuple[int, ...]  # state indices
    exact: bool
    disconnected: bool

    def sets(self, space: StateSpace) -> list[tuple[int, ...]]:
        return [space.set_at(i) for i in self.subset]


def conductance_exact(G: Graph, lam, cap: int = 20, space: StateSpace | None = None) -> Conductance:
    """``Φ = min_{0 < π(S) <= 1/2} Q(S, S̄)/π(S)`` over all state subsets ``S``."""
    lam = parse_fugacity(lam)
    space = space or StateSpace(G, 1 << cap)
    N, n = len(space), G.n
    if N > cap:
        raise BudgetExceeded(f"{N} states exceed the conductance cap {cap}")
    if n == 0:
        raise InvalidInput("conductance undefined on a single-state chain")
    exact = is_exact(lam)
    if exact:
        p, q = lam.numerator, lam.denominator
        a = [p**k * q ** (n - k) for k in space.sizes]
        up, down = p, q
        scale = n * (p + q)
    else:
        a = [lam**k for k in space.sizes]
        up, down = lam, 1.0
        scale = n * (lam + 1)
    indptr, idx, wts = [0], [], []
    qout = []
    for i in range(N):
        tot = 0
        for j, move in space.neighbors(i):
            w = a[i] * (up if move > 0 else down)
            idx.append(j)
            wts.append(w)
            tot += w
        qout.append(tot)
        indptr.append(len(idx))
    if exact and sum(a) + sum(qout) < 1 << 60:
        dtype = np.int64
    else:
        dtype = np.float64
    a_sub, cut = kernels.subset_tables(np.array(a, dtype=dtype), np.array(qout, dtype=dtype), indptr, idx, np.array(wts, dtype=dtype))
    total = a_sub[-1]
    valid = (a_sub > 0) & (2 * a_sub <= total)
    ratio = np.full(a_sub.shape, np.inf)
    ratio[valid] = cut[valid] / a_sub[valid]
    best = float(ratio.min())
    cands = np.flatnonzero(ratio <= best * (1 + 1e-9) + 1e-300)
    if dtype is np.int64:
        key = min((Fraction(int(cut[m]), int(a_sub[m]) * scale), int(m)) for m in cands)
        phi, mask = key
    else:
        mask = int(cands[0])
        phi = float(cut[mask]) / (float(a_sub[mask]) * float(scale))
        exact = False
    return Conductance(phi, members(mask), exact, phi == 0)


def conductance_sandwich(phi, lambda1: float) -> tuple[float, float]:
    """``(1 - 2Φ, 1 - Φ²/2)``, which bracket ``λ₁``."""
    f = float(phi)
    return 1 - 2 * f, 1 - f * f / 2


# ---------------------------------------------------------------------------
# partition lower bounds

LABELS = ("S", "one", "two")


@dataclass
class LowerBound:
    bound: float
    ratio: Fraction | float  # π(Ω₁)/π(Ω_S) with Ω₁ the lighter side
    masses: dict
    swapped: bool
    eps: Fraction | float
    bound_eps_form: float  # (1/4)(ratio - 2) ln(1/(2ε))


def _normalize_labels(labels, N: int) -> list[str]:
    if len(labels) != N:
        raise InvalidInput(f"partition labels cover {len(labels)} states, expected {N}")
    out = []
    for x in labels:
        if x in (0, "S", "s"):
            out.append("S")
        elif x in (1, "one", "1", "I"):
            out.append("one")
        elif x in (2, "two", "2", "J"):
            out.append("two")
        else:
            raise InvalidInput(f"unknown partition label {x!r}")
    return out


def separation_witness(space: StateSpace, labels: Sequence[str]) -> tuple[int, int] | None:
    for i in range(len(space)):
        if labels[i] == "one":
            for j, _ in space.neighbors(i):
                if labels[j] == "two":
                    return i, j
    return None


def partition_lower_bound(G: Graph, lam, labels, eps=Fraction(1, 4), space: StateSpace | None = None, cap: int = 1 << 22) -> LowerBound:
    """``(ln 2/4)(π(Ω₁)/π(Ω_S) - 2)`` after checking that no transition joins Ω₁ and Ω₂."""
    lam = parse_fugacity(lam)
    space = space or StateSpace(G, cap)
    labels = _normalize_labels(labels, len(space))
    bad = separation_witness(space, labels)
    if bad is not None:
        i, j = bad
        raise InvalidInput(f"partition does not separate: transition {space.set_at(i)} -> {space.set_at(j)}")
    w = stationary_weights(space, lam)
    mass = {k: sum((x for x, l in zip(w, labels) if l == k), w[0] * 0) for k in LABELS}
    if not mass["S"]:
        raise InvalidInput("separating set has zero mass")
    swapped = mass["two"] < mass["one"]
    light = mass["two"] if swapped else mass["one"]
    ratio = light / mass["S"]
    bound = math.log(2) / 4 * (float(ratio) - 2)
    eps_form = 0.25 * (float(ratio) - 2) * math.log(1 / (2 * float(eps)))
    Z = sum(w)
    return LowerBound(bound, ratio, {k: v / Z for k, v in mass.items()}, swapped, eps, eps_form)


def complete_bipartite_partition(space: StateSpace, t: int) -> list[str]:
    """Ω_S = {∅}; Ω₁/Ω₂ = nonempty sets inside the left/right side of ``K_{t,t}``."""
    left = (1 << t) - 1
    out = []
    for m in space.masks:
        out.append("S" if m == 0 else "one" if m & left else "two")
    return out


def complete_bipartite_reference(t: int, lam) -> float:
    return math.log(2) / 4 * (float(lam) + 1) ** t


@dataclass
class HktPartition:
    graph: Graph
    space: StateSpace
    labels: list[str]
    weights: dict  # unnormalized w(Ω_S), w(Ω_I), w(Ω_J)
    claim_lower: Fraction | float
    claim_ok: dict
    upper_expr: Fraction | float
    count_upper_expr: Fraction | float
    upper_ok: bool
    alpha: int
    s: int
    projection: tuple[int, ...] = field(repr=False, default=())

    def as_partition(self) -> list[str]:
        return ["S" if l == "S" else "one" if l == "I" else "two" for l in self.labels]


def hkt_partition(k: int, t: int, lam, s: int, cap: int = 1 << 20) -> HktPartition:
    """Bottleneck partition of the states of the blow-up ``H_{k,t}``.

    Ω_S: states whose projection has exactly ``s`` vertices.  Ω_I: states
    reachable from the lifted ``I_k`` without entering Ω_S.  Ω_J: the rest.
    """
    lam = parse_fugacity(lam)
    if k < 0 or t < 1:
        raise InvalidInput("need k >= 0 and t >= 1")
    I_k, _ = gk_canonical_mis(k)
    alpha = len(I_k)
    if not 0 <= s <= alpha:
        raise InvalidInput(f"s must lie in [0, {alpha}]")
    H, _, proj = blowup_doubling(k, t)
    space = StateSpace(H, cap)
    def psize(m: int) -> int:
        hit = 0
        for v in members(m):
            hit |= 1 << proj[v]
        return popcount(hit)

    in_S = [psize(m) == s for m in space.masks]
    labels = ["S" if x else "J" for x in in_S]
    start = space.index_of(lift_to_blowup(I_k, k, t))
    if not in_S[start]:
        labels[start] = "I"
        todo = deque([start])
        while todo:
            i = todo.popleft()
            for j, _ in space.neighbors(i):
                if labels[j] == "J":
                    labels[j] = "I"
                    todo.append(j)
    w = stationary_weights(space, lam)
    zero = w[0] * 0
    weights = {key: sum((x for x, l in zip(w, labels) if l == key), zero) for key in ("S", "I", "J")}
    base = (4**k * lam + 1) ** t - 1
    claim_lower = base**alpha
    d = alpha - s
    upper = 2 ** (d * (k + 3) + 1) * base**s
    count_upper = 2 ** (2 * d + 1) * alpha**d * base**s
    return HktPartition(
        H,
        space,
        labels,
        weights,
        claim_lower,
        {"I": weights["I"] >= claim_lower, "J": weights["J"] >= claim_lower},
        upper,
        count_upper,
        weights["S"] <= upper,
        alpha,
        s,
        proj,
    )
