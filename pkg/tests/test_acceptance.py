"""Acceptance suite: one timed check per criterion, each printing a PASS/FAIL line.

Run under pytest (lines appear in the log even with capture on) or directly:

    python3 tests/test_acceptance.py
"""

from __future__ import annotations

import math
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import LAMBDAS, suite_graphs  # noqa: E402

from hcglauber.chain import (  # noqa: E402
    ChainConfig,
    complete_bipartite_partition,
    conductance_exact,
    conductance_sandwich,
    estimate_activation,
    exact_mixing_time,
    hkt_partition,
    one_step_frequencies,
    partition_lower_bound,
    spectral_mixing_bounds,
    spectrum,
    transition_matrix,
)
from hcglauber.decomp import build_separator_tree, path_decomposition_from_order, validate_separator_tree  # noqa: E402
from hcglauber.families import (  # noqa: E402
    complete_bipartite,
    count_deficient_is,
    disjoint_cliques,
    doubling_tree,
    geometric_graph,
    gk_canonical_mis,
    gk_size_polynomial,
    random_balls,
)
from hcglauber.graph import (  # noqa: E402
    Graph,
    StateSpace,
    count_independent_sets,
    enumerate_independent_sets,
    induced_subgraph,
    is_independent,
)
from hcglauber.hardcore import (  # noqa: E402
    activation_table,
    check_counting_inequalities,
    partition_function,
    random_graph,
    stationary_distribution,
)
from hcglauber.paths import (  # noqa: E402
    PathFamily,
    congestion,
    mixing_upper_bound_from_congestion,
    theoretical_congestion_bound,
    timing_violations,
)

SEED = 2026


def crit_closed_forms():
    lams = (Fraction(1, 2), Fraction(1), Fraction(2), Fraction(7, 3))
    checked = 0
    for lam in lams:
        for n in range(17):
            if partition_function(Graph(n, []), lam) != (lam + 1) ** n:
                return False, f"edgeless n={n} lambda={lam}"
            checked += 1
        for size in range(1, 17):
            for t in range(1, 6):
                G = disjoint_cliques(t, size)
                if partition_function(G, lam, method="tree_dp") != (size * lam + 1) ** t:
                    return False, f"{t} cliques of size {size} lambda={lam}"
                checked += 1
    return True, f"{checked} exact identities"


def crit_method_agreement():
    rng = random.Random(SEED)
    for i in range(100):
        n = rng.randint(1, 14)
        G = random_graph(n, rng.uniform(0.1, 0.6), seed=rng.randrange(1 << 30))
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        a = partition_function(G, lam)
        b = partition_function(G, lam, method="tree_dp")
        if a != b:
            return False, f"graph {i}: brute {a} != tree_dp {b}"
    return True, "100 graphs, brute == tree_dp"


def crit_counting_inequalities():
    rng = random.Random(SEED + 3)
    eq_product = eq_size = 0
    for i in range(200):
        n = rng.randint(1, 10)
        G = random_graph(n, rng.uniform(0.1, 0.6), seed=rng.randrange(1 << 30))
        lam = rng.choice([Fraction(1), Fraction(1, 3), Fraction(5, 2), Fraction(4)])
        X = [v for v in range(n) if rng.random() < 0.5]
        I, blocked = [], set()
        for v in X:
            if v not in blocked and rng.random() < 0.5:
                I.append(v)
                blocked |= G.adj[v] | {v}
        rep = check_counting_inequalities(G, lam, X, I)
        if not rep.all_hold:
            return False, f"instance {i} fails: {rep}"
    # equality cases: a split with no crossing edges, and unit fugacity
    for i in range(20):
        n = rng.randint(2, 10)
        k = rng.randint(1, n - 1)
        A = random_graph(k, 0.4, seed=i)
        B = random_graph(n - k, 0.4, seed=i + 100)
        G = Graph(n, A.edges + [(u + k, v + k) for u, v in B.edges])
        rep = check_counting_inequalities(G, Fraction(3, 2), range(k), ())
        eq_product += rep.product_bound.equality
        rep = check_counting_inequalities(G, 1, range(k), ())
        eq_size += rep.size_bound.equality
    if eq_product != 20 or eq_size != 20:
        return False, f"equality cases reached {eq_product}/20 and {eq_size}/20"
    return True, "200 random instances hold; 20/20 equality cases for each tight inequality"


def crit_sampler_law():
    graphs = {"K2": Graph(2, [(0, 1)]), "K12": Graph(3, [(0, 1), (0, 2)])}
    worst_z, worst_sig = 0.0, 0.0
    for name, G in graphs.items():
        for lam in (Fraction(1), Fraction(2)):
            burn = 2000
            cfg = ChainConfig(lam, seed=SEED, steps=burn + 50_000, burn_in=burn, chains=4, batches=25)
            est = estimate_activation(G, cfg)
            exact = np.array([float(p) for p in activation_table(G, lam)])
            z = np.abs(est.mean - exact) / est.stderr
            worst_z = max(worst_z, float(z.max()))
            if np.any(z > 3):
                return False, f"{name} lambda={lam}: z-scores {np.round(z, 2)}"
            P = transition_matrix(G, lam)
            trials = 100_000
            for i in range(len(P.space)):
                freq = one_step_frequencies(G, lam, P.space.set_at(i), trials, seed=SEED + i)
                for j, p in P.rows[i].items():
                    p = float(p)
                    sd = math.sqrt(trials * p * (1 - p)) or 1.0
                    dev = abs(freq.get(P.space.set_at(j), 0) - trials * p) / sd
                    worst_sig = max(worst_sig, dev)
                    if dev > 4:
                        return False, f"{name} lambda={lam}: row {i} entry {j} off by {dev:.2f} sigma"
    return True, f"2e5 samples per case, max |z| = {worst_z:.2f}; one-step rows max {worst_sig:.2f} sigma"


def crit_mixing_sandwich():
    count = 0
    for name, G in suite_graphs().items():
        for lam in LAMBDAS:
            tau = exact_mixing_time(G, lam).tau
            sp = spectrum(G, lam)
            pi_min = float(stationary_distribution(G, lam).min())
            lo, hi = spectral_mixing_bounds(sp.lambda_max, pi_min)
            if not lo <= tau <= hi:
                return False, f"{name} lambda={lam}: {lo:.3f} <= {tau} <= {hi:.3f} fails"
            if count_independent_sets(G) <= 20:
                phi = conductance_exact(G, lam).phi
                a, b = conductance_sandwich(phi, sp.lambda1)
                if not a - 1e-12 <= sp.lambda1 <= b + 1e-12:
                    return False, f"{name} lambda={lam}: conductance sandwich {a} <= {sp.lambda1} <= {b} fails"
            count += 1
    return True, f"{count} (graph, lambda) cases"


def _families(G):
    return [PathFamily(G, build_separator_tree(G)), PathFamily(G, path_decomposition_from_order(G))]


def crit_canonical_paths():
    pairs = 0
    for name, G in suite_graphs().items():
        space = StateSpace(G)
        sets = [space.set_at(i) for i in range(len(space))]
        for fam in _families(G):
            where = fam.decomposition.node_of_vertex() if fam.kind == "septree" else None
            for I in sets:
                for J in sets:
                    seq = fam.build(I, J)
                    if seq.end() != J or len(seq) > 2 * G.n:
                        return False, f"{name} {fam.kind}: bad path {I} -> {J}"
                    if fam.kind == "pathdecomp":
                        bad = timing_violations(fam, seq, I, J)
                    else:
                        bad = [v for (v, _), t in zip(seq.moves, seq.origin) if where[v] != t]
                    if bad:
                        return False, f"{name} {fam.kind}: timing {I} -> {J}: {bad}"
                    pairs += 1
    return True, f"{pairs} paths validated"


def crit_congestion():
    cases = 0
    for name, G in suite_graphs().items():
        fams = _families(G)
        for lam in LAMBDAS:
            pi_min = stationary_distribution(G, lam).min()
            tau = exact_mixing_time(G, lam).tau
            for fam in fams:
                rho = congestion(G, lam, fam).rho_max
                bound = theoretical_congestion_bound(G, lam, fam).bound
                if not rho <= bound:
                    return False, f"{name} {fam.kind} lambda={lam}: rho {rho} > {bound}"
                up = mixing_upper_bound_from_congestion(rho, pi_min)
                if not tau <= up:
                    return False, f"{name} {fam.kind} lambda={lam}: tau {tau} > {up:.3f}"
                cases += 1
    return True, f"{cases} (graph, family, lambda) cases"


def crit_complete_bipartite_growth():
    bounds = []
    for t in range(2, 7):
        G = complete_bipartite(t)
        space = StateSpace(G)
        lb = partition_lower_bound(G, 1, complete_bipartite_partition(space, t), space=space)
        tau = exact_mixing_time(G, 1, space=space).tau
        if not lb.bound <= tau:
            return False, f"t={t}: bound {lb.bound:.3f} > tau {tau}"
        bounds.append(lb.bound)
    ratio = bounds[-1] / bounds[-2]
    ok = abs(ratio - 2) <= 0.15 * 2
    return ok, f"bounds {[round(b, 3) for b in bounds]}, last ratio {ratio:.3f}"


def crit_gk_structure():
    for k in range(3):
        G, _ = doubling_tree(k)
        sets = enumerate_independent_sets(G)
        a = max(map(len, sets))
        if set(s for s in sets if len(s) == a) != set(gk_canonical_mis(k)):
            return False, f"k={k}: maximum sets differ from the canonical pair"
    for k in range(5):
        G, _ = doubling_tree(k)
        poly = gk_size_polynomial(k)
        I, J = gk_canonical_mis(k)
        if poly[-1] != 2 or len(I) != len(poly) - 1 or len(J) != len(I) or I == J:
            return False, f"k={k}: DP count {poly[-1]}"
        if not (is_independent(G, I) and is_independent(G, J)):
            return False, f"k={k}: canonical sets not independent"
    for k in range(1, 4):
        alpha = len(gk_canonical_mis(k)[0])
        for d in range(4):
            c = count_deficient_is(k, d)[0]
            if d == 0 and c != 2:
                return False, f"k={k}: {c} maximum sets"
            if c > 2 ** (2 * d + 1) * alpha**d:
                return False, f"k={k} d={d}: {c} > bound"
    return True, "two maximum sets for k <= 4; deficiency counts within bound for k, d <= 3"


def crit_hkt_claims():
    lines, ok = [], True
    for lam in (1, 2):
        for s in (1, 2):
            h = hkt_partition(1, 1, lam, s)
            lb = partition_lower_bound(h.graph, lam, h.as_partition(), space=h.space)
            tau = exact_mixing_time(h.graph, lam, space=h.space).tau
            good = h.claim_ok["I"] and h.claim_ok["J"] and lb.bound <= tau
            ok &= good
            w = h.weights
            lines.append(
                f"lambda={lam} s={s}: w_I={w['I']} w_J={w['J']} vs {h.claim_lower}"
                f" [{'ok' if good else 'VIOLATED'}]; w_S={w['S']} <= {h.upper_expr}: {h.upper_ok};"
                f" bound {lb.bound:.3f} <= tau {tau}"
            )
    return ok, " | ".join(lines)


def crit_geometric():
    bags = 0
    for seed in range(10):
        inst = random_balls(20, 2, 1.0, 10.0, seed=seed)
        G = geometric_graph(inst)
        T = build_separator_tree(G, strategy="geometric", inst=inst)
        rep = validate_separator_tree(G, T)
        if not rep.valid:
            return False, f"seed {seed}: {rep.violations}"
        for bag, cover in zip(T.bags, T.cliques):
            if sorted(v for c in cover for v in c) != sorted(bag):
                return False, f"seed {seed}: cover does not partition bag {bag}"
            prod = math.prod(len(c) + 1 for c in cover)
            if count_independent_sets(induced_subgraph(G, bag)[0]) > prod:
                return False, f"seed {seed}: bag {bag} breaks the clique bound"
            bags += 1
    return True, f"10 instances, {bags} bags"


CRITERIA = {
    1: ("closed-form partition functions", crit_closed_forms, 10),
    2: ("brute force vs tree DP", crit_method_agreement, 60),
    3: ("counting inequalities", crit_counting_inequalities, 60),
    4: ("sampler law", crit_sampler_law, 120),
    5: ("mixing sandwich", crit_mixing_sandwich, 300),
    6: ("canonical paths", crit_canonical_paths, 120),
    7: ("congestion bounds", crit_congestion, 300),
    8: ("K_{t,t} lower-bound growth", crit_complete_bipartite_growth, 120),
    9: ("G_k structure", crit_gk_structure, 120),
    10: ("H_{1,1} bottleneck claims", crit_hkt_claims, 600),
    11: ("geometric pipeline", crit_geometric, 60),
}


def evaluate(number: int) -> tuple[bool, str]:
    title, fn, limit = CRITERIA[number]
    t0 = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - t0
    fast = elapsed < limit
    status = "PASS" if ok and fast else "FAIL"
    line = f"{status} criterion {number:>2} ({title}): {detail} [{elapsed:.2f}s, limit {limit}s]"
    return ok and fast, line


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number, capsys):
    ok, line = evaluate(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(k) for k in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
