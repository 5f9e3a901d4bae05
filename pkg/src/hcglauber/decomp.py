"""Path decompositions, tree decompositions and clique-based separator trees.

Validators never raise on a bad decomposition; they return a
:class:`Report` listing every violated axiom with a witness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BudgetExceeded, InvalidInput
from .graph import (
    Graph,
    as_mask,
    connected_components,
    count_independent_sets,
    independence_number,
    induced_subgraph,
    is_clique,
    mask_of,
    members,
    popcount,
)


def _bag(b) -> tuple[int, ...]:
    return tuple(sorted(set(b)))


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(_bag(b) for b in self.bags))

    def with_empty_last(self) -> "PathDecomposition":
        """Append an empty bag unless the last bag is already empty."""
        if self.bags and not self.bags[-1]:
            return self
        return PathDecomposition(self.bags + ((),), self.n)

    def as_tree(self) -> "TreeDecomposition":
        return TreeDecomposition(tuple(i - 1 for i in range(len(self.bags))), self.bags, self.n)


@dataclass(frozen=True)
class TreeDecomposition:
    """Rooted tree given by a parent array (root has parent -1) with one bag per node."""

    parent: tuple[int, ...]
    bags: tuple[tuple[int, ...], ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(_bag(b) for b in self.bags))
        object.__setattr__(self, "parent", tuple(self.parent))
        if len(self.parent) != len(self.bags):
            raise InvalidInput("one parent entry per bag required")

    @property
    def root(self) -> int:
        roots = [i for i, p in enumerate(self.parent) if p < 0]
        return roots[0] if roots else -1

    def children(self) -> list[list[int]]:
        kids = [[] for _ in self.parent]
        for i, p in enumerate(self.parent):
            if 0 <= p < len(self.parent):
                kids[p].append(i)
        return kids


@dataclass(frozen=True)
class SeparatorTree:
    """Rooted full binary tree with pairwise disjoint bags covering the graph.

    ``children[t]`` is ``()`` for a leaf or ``(left, right)``.  ``cliques[t]``,
    when given, is a list of cliques partitioning ``bags[t]``.
    """

    children: tuple[tuple[int, ...], ...]
    bags: tuple[tuple[int, ...], ...]
    n: int
    root: int = 0
    cliques: tuple[tuple[tuple[int, ...], ...], ...] | None = None
    balance: Fraction | float | None = None

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(_bag(b) for b in self.bags))
        object.__setattr__(self, "children", tuple(tuple(c) for c in self.children))
        if self.cliques is not None:
            object.__setattr__(self, "cliques", tuple(tuple(_bag(c) for c in cs) for cs in self.cliques))

    @property
    def parent(self) -> tuple[int, ...]:
        par = [-1] * len(self.bags)
        for t, cs in enumerate(self.children):
            for c in cs:
                par[c] = t
        return tuple(par)

    def preorder(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            t = stack.pop()
            out.append(t)
            stack.extend(reversed(self.children[t]))
        return out

    def subtree_masks(self) -> list[int]:
        """``V_t`` for every node as a bitmask."""
        V = [0] * len(self.bags)
        for t in reversed(self.preorder()):
            V[t] = mask_of(self.bags[t])
            for c in self.children[t]:
                V[t] |= V[c]
        return V

    def ancestor_masks(self) -> list[int]:
        """For every node ``t``: union of the bags of ``t`` and all its ancestors."""
        A = [0] * len(self.bags)
        par = self.parent
        for t in self.preorder():
            A[t] = mask_of(self.bags[t]) | (A[par[t]] if par[t] >= 0 else 0)
        return A

    def node_of_vertex(self) -> list[int]:
        where = [-1] * self.n
        for t, b in enumerate(self.bags):
            for v in b:
                where[v] = t
        return where


@dataclass
class Report:
    valid: bool = True
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, msg: str):
        self.valid = False
        self.violations.append(msg)

    def __bool__(self):
        return self.valid


# ---------------------------------------------------------------------------
# validation


def _check_cover(G: Graph, bags, rep: Report):
    seen = 0
    for b in bags:
        for v in b:
            if not 0 <= v < G.n:
                rep.fail(f"bag vertex {v} out of range")
        seen |= mask_of(v for v in b if 0 <= v < G.n)
    missing = members(((1 << G.n) - 1) & ~seen)
    for v in missing:
        rep.fail(f"vertex {v} appears in no bag")
    bag_masks = [mask_of(v for v in b if 0 <= v < G.n) for b in bags]
    for u, v in G.edges:
        pair = (1 << u) | (1 << v)
        if not any(bm & pair == pair for bm in bag_masks):
            rep.fail(f"edge {u}-{v} is not covered by any bag")
    return bag_masks


def validate_decomposition(G: Graph, D) -> Report:
    rep = Report()
    if D.n != G.n:
        rep.fail(f"decomposition is for {D.n} vertices, graph has {G.n}")
        return rep
    if isinstance(D, PathDecomposition):
        bag_masks = _check_cover(G, D.bags, rep)
        for v in range(G.n):
            idx = [i for i, bm in enumerate(bag_masks) if bm >> v & 1]
            if idx and idx[-1] - idx[0] + 1 != len(idx):
                rep.fail(f"occurrences of vertex {v} are not contiguous: bags {idx}")
        return rep
    if not isinstance(D, TreeDecomposition):
        raise InvalidInput(f"not a path or tree decomposition: {type(D).__name__}")
    N = len(D.bags)
    roots = [i for i, p in enumerate(D.parent) if p < 0]
    if N == 0:
        if G.n:
            rep.fail("decomposition has no nodes")
        return rep
    if len(roots) != 1:
        rep.fail(f"expected exactly one root, found {len(roots)}")
        return rep
    for i, p in enumerate(D.parent):
        if p >= N:
            rep.fail(f"node {i} has out-of-range parent {p}")
            return rep
    # every node must reach the root without cycling
    for i in range(N):
        cur, steps = i, 0
        while cur >= 0 and steps <= N:
            cur, steps = D.parent[cur], steps + 1
        if steps > N:
            rep.fail(f"parent array has a cycle through node {i}")
            return rep
    bag_masks = _check_cover(G, D.bags, rep)
    for v in range(G.n):
        nodes = [i for i, bm in enumerate(bag_masks) if bm >> v & 1]
        if not nodes:
            continue
        inner = sum(1 for i in nodes if D.parent[i] >= 0 and bag_masks[D.parent[i]] >> v & 1)
        if inner != len(nodes) - 1:
            rep.fail(f"nodes containing vertex {v} do not form a connected subtree: {nodes}")
    return rep


def clique_weight(cliques) -> float:
    return sum(math.log2(len(c) + 1) for c in cliques)


def validate_separator_tree(G: Graph, S: SeparatorTree, balance=None) -> Report:
    rep = Report()
    N = len(S.bags)
    if S.n != G.n:
        rep.fail(f"separator tree is for {S.n} vertices, graph has {G.n}")
        return rep
    if N == 0 or not 0 <= S.root < N or len(S.children) != N:
        rep.fail("malformed tree")
        return rep
    order = S.preorder() if all(all(0 <= c < N for c in cs) for cs in S.children) else []
    if sorted(order) != list(range(N)):
        rep.fail("children lists do not describe a tree reaching every node from the root")
        return rep
    seen = 0
    for t, b in enumerate(S.bags):
        for v in b:
            if not 0 <= v < G.n:
                rep.fail(f"node {t}: vertex {v} out of range")
                continue
            if seen >> v & 1:
                rep.fail(f"vertex {v} appears in more than one bag")
            seen |= 1 << v
    for v in members(((1 << G.n) - 1) & ~seen):
        rep.fail(f"vertex {v} appears in no bag")
    V = S.subtree_masks()
    if balance is None:
        balance = S.balance
    weights = {}
    for t in range(N):
        kids = S.children[t]
        if len(kids) not in (0, 2):
            rep.fail(f"node {t} has {len(kids)} children; a full binary tree needs 0 or 2")
            continue
        if not kids:
            if popcount(V[t]) > 1:
                rep.fail(f"leaf {t} holds {popcount(V[t])} vertices (at most 1 allowed)")
        else:
            a, b = kids
            for u in members(V[a]):
                cross = G.nbr[u] & V[b]
                if cross:
                    rep.fail(f"node {t}: edge {u}-{members(cross)[0]} joins the two child subtrees")
                    break
            if balance is not None:
                size = popcount(V[t])
                for c in kids:
                    if popcount(V[c]) > balance * size:
                        rep.fail(f"node {t}: child {c} holds {popcount(V[c])} of {size} vertices (balance {balance})")
        if S.cliques is not None:
            cover = S.cliques[t]
            covered = 0
            for C in cover:
                cm = mask_of(C)
                if not is_clique(G, cm):
                    rep.fail(f"node {t}: {C} is not a clique")
                if covered & cm:
                    rep.fail(f"node {t}: cliques overlap on {members(covered & cm)}")
                covered |= cm
            if covered != mask_of(S.bags[t]):
                rep.fail(f"node {t}: cliques {cover} do not partition bag {S.bags[t]}")
            weights[t] = clique_weight(cover)
    rep.details["w"] = weights
    return rep


# ---------------------------------------------------------------------------
# construction helpers


def path_decomposition_from_order(G: Graph, order: Sequence[int] | None = None) -> PathDecomposition:
    """Vertex-separation bags: ``X_i = {v_i} + {earlier vertices with a neighbour at position >= i}``."""
    order = list(range(G.n)) if order is None else list(order)
    if sorted(order) != list(range(G.n)):
        raise InvalidInput("order must be a permutation of the vertices")
    pos = {v: i for i, v in enumerate(order)}
    last = [max([pos[v]] + [pos[u] for u in G.adj[v]]) for v in range(G.n)]
    bags = []
    for i, v in enumerate(order):
        bags.append([v] + [u for u in order[:i] if last[u] >= i])
    return PathDecomposition(tuple(bags), G.n)


def _elimination_bags(G: Graph, order: Sequence[int]) -> TreeDecomposition:
    n = G.n
    if n == 0:
        return TreeDecomposition((-1,), ((),), 0)
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(a) for a in G.adj]
    bags, later = [], []
    for v in order:
        nb = {u for u in adj[v] if pos[u] > pos[v]}
        bags.append(tuple(sorted(nb | {v})))
        later.append(nb)
        for a in nb:
            adj[a] |= nb - {a}
    parent = []
    for i, v in enumerate(order):
        if later[i]:
            parent.append(min(pos[u] for u in later[i]))
        else:
            parent.append(-1)
    # join the roots of separate components into one tree
    roots = [i for i, p in enumerate(parent) if p < 0]
    for r in roots[:-1]:
        parent[r] = roots[-1]
    return TreeDecomposition(tuple(parent), tuple(bags), n)


def min_degree_order(G: Graph) -> list[int]:
    adj = [set(a) for a in G.adj]
    alive = set(range(G.n))
    order = []
    while alive:
        v = min(alive, key=lambda x: (len(adj[x]), x))
        order.append(v)
        nb = adj[v]
        for a in nb:
            adj[a] |= nb - {a}
            adj[a].discard(v)
        alive.discard(v)
    return order


def elimination_tree_decomposition(G: Graph, order: Sequence[int] | None = None) -> TreeDecomposition:
    """Tree decomposition from an elimination ordering (min-degree by default)."""
    return _elimination_bags(G, min_degree_order(G) if order is None else list(order))


def optimal_elimination_order(G: Graph, max_n: int = 16) -> tuple[int, list[int]]:
    """Treewidth and an optimal elimination order by dynamic programming over vertex subsets."""
    n = G.n
    if n > max_n:
        raise BudgetExceeded(f"exact treewidth limited to {max_n} vertices")
    if n == 0:
        return -1, []

    def q_size(S: int, v: int) -> int:
        # vertices outside S+v reachable from v through S
        seen, frontier, out = (1 << v), (1 << v), 0
        while frontier:
            f = frontier & -frontier
            frontier ^= f
            nb = G.nbr[f.bit_length() - 1] & ~seen
            seen |= nb
            inside = nb & S
            frontier |= inside
            out |= nb & ~S
        return popcount(out)

    full = (1 << n) - 1
    best = {0: (-1, -1)}
    for size in range(1, n + 1):
        for combo in itertools.combinations(range(n), size):
            S = mask_of(combo)
            cand = None
            for v in combo:
                rest = S ^ (1 << v)
                val = max(best[rest][0], q_size(rest, v))
                if cand is None or val < cand[0]:
                    cand = (val, v)
            best[S] = cand
    order, S = [], full
    while S:
        v = best[S][1]
        order.append(v)
        S ^= 1 << v
    order.reverse()
    return best[full][0], order


def brute_force_tree_decomposition(G: Graph, max_n: int = 16) -> TreeDecomposition:
    _, order = optimal_elimination_order(G, max_n)
    return elimination_tree_decomposition(G, order)


def _max_clique(G: Graph, within: int) -> int:
    """Lexicographically first maximum clique inside ``within``."""
    best = [0, -1]
    stack = [(0, within)]
    while stack:
        clique, cand = stack.pop()
        size = popcount(clique)
        if size > best[1]:
            best = [clique, size]
        if size + popcount(cand) <= best[1]:
            continue
        kids = []
        while cand:
            low = cand & -cand
            cand ^= low
            kids.append((clique | low, cand & G.nbr[low.bit_length() - 1]))
        stack.extend(reversed(kids))
    return best[0]


def greedy_clique_cover(G: Graph, S) -> list[tuple[int, ...]]:
    """Repeatedly take a largest clique of what is left (lexicographically first among ties)."""
    rest = as_mask(S, G.n)
    cover = []
    while rest:
        c = _max_clique(G, rest)
        cover.append(members(c))
        rest &= ~c
    return cover


def _balanced_split(sizes: list[int], cap: int, total: int, must_split: bool):
    """Choose a subset of components for side A with both sides <= cap."""
    reach = {0: ()}
    for i, s in enumerate(sizes):
        for acc, chosen in list(reach.items()):
            if acc + s not in reach:
                reach[acc + s] = chosen + (i,)
    for acc in sorted(reach, reverse=True):
        if acc <= cap and total - acc <= cap:
            if must_split and (acc == 0 or acc == total):
                continue
            return reach[acc]
    return None


def find_balanced_separator(G: Graph, V: int, balance, max_n: int = 24):
    """Smallest ``S`` (lexicographically first) splitting ``G[V]`` into sides of size <= balance*|V|."""
    size = popcount(V)
    if size > max_n:
        raise BudgetExceeded(f"separator search limited to {max_n} vertices per node, got {size}")
    cap = math.floor(balance * size)
    verts = members(V)
    for s in range(size + 1):
        for S in itertools.combinations(verts, s):
            Sm = mask_of(S)
            rest = V & ~Sm
            comps = connected_components(G, rest)
            sizes = [popcount(c) for c in comps]
            pick = _balanced_split(sizes, cap, size - s, must_split=(s == 0))
            if pick is None:
                continue
            A = 0
            for i in pick:
                A |= comps[i]
            return A, rest & ~A, Sm
    return None


def build_separator_tree(
    G: Graph,
    strategy: str = "brute_force",
    balance=Fraction(2, 3),
    inst=None,
    max_node_n: int = 24,
) -> SeparatorTree:
    """Recursive separator tree: split off a separator, recurse on both sides, new root on top."""
    if strategy not in ("brute_force", "geometric"):
        raise InvalidInput(f"unknown strategy {strategy!r}")
    if strategy == "geometric":
        from .families import geometric_graph

        if inst is None:
            raise InvalidInput("geometric strategy needs the geometric instance")
        if geometric_graph(inst) != G:
            raise InvalidInput("geometric instance does not generate the given graph")
    if not 0 < balance:
        raise InvalidInput("balance must be positive")

    children: list[tuple[int, ...]] = []
    bags: list[tuple[int, ...]] = []
    cliques: list[list[tuple[int, ...]]] = []

    def new_node(bag, cover) -> int:
        children.append(())
        bags.append(members(bag))
        cliques.append(cover)
        return len(bags) - 1

    def rec(V: int) -> int:
        if popcount(V) <= 1:
            return new_node(V, [members(V)] if V else [])
        if strategy == "brute_force":
            found = find_balanced_separator(G, V, balance, max_node_n)
            if found is None:
                raise InvalidInput(f"no separation with balance {balance} for vertex set {members(V)}")
            A, B, S = found
        else:
            A, B, S = _geometric_split(inst, V)
        t = new_node(S, greedy_clique_cover(G, S) if strategy == "brute_force" else _bucket_cliques(inst, S))
        left = rec(A)
        right = rec(B)
        children[t] = (left, right)
        return t

    rec((1 << G.n) - 1)
    return SeparatorTree(tuple(children), tuple(bags), G.n, 0, tuple(tuple(c) for c in cliques), balance if strategy == "brute_force" else None)


def _geometric_split(inst, V: int):
    idx = members(V)
    d = inst.dim
    spreads = []
    for axis in range(d):
        vals = [float(inst.centers[i][axis]) for i in idx]
        spreads.append(max(vals) - min(vals))
    axis = max(range(d), key=lambda a: (spreads[a], -a))
    vals = sorted(float(inst.centers[i][axis]) for i in idx)
    med = vals[(len(vals) - 1) // 2]
    A = B = S = 0
    for i in idx:
        c, r = float(inst.centers[i][axis]), float(inst.radii[i])
        if c + r < med:
            A |= 1 << i
        elif c - r > med:
            B |= 1 << i
        else:
            S |= 1 << i
    return A, B, S


def _bucket_cliques(inst, S: int) -> list[tuple[int, ...]]:
    idx = members(S)
    if not idx:
        return []
    # cells of diameter < 2*min radius: any two centres in one cell are within r_i + r_j
    side = 2.0 * min(float(inst.radii[i]) for i in idx) / math.sqrt(inst.dim)
    cells: dict[tuple, list[int]] = {}
    for i in idx:
        key = tuple(math.floor(float(x) / side) for x in inst.centers[i])
        cells.setdefault(key, []).append(i)
    return sorted(tuple(v) for v in cells.values())


# ---------------------------------------------------------------------------
# tree -> path conversion


def _tree_adjacency(parent: Sequence[int]) -> list[set[int]]:
    adj = [set() for _ in parent]
    for i, p in enumerate(parent):
        if p >= 0:
            adj[i].add(p)
            adj[p].add(i)
    return adj


def _components(adj, nodes: set[int]) -> list[list[int]]:
    out, rest = [], set(nodes)
    while rest:
        start = min(rest)
        comp, stack = {start}, [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in rest and y not in comp:
                    comp.add(y)
                    stack.append(y)
        rest -= comp
        out.append(sorted(comp))
    return out


def tree_path_decomposition(parent: Sequence[int]) -> list[tuple[int, ...]]:
    """Path decomposition of a tree by centroid recursion; bags hold tree nodes."""
    adj = _tree_adjacency(parent)

    def rec(nodes: list[int]) -> list[list[int]]:
        if len(nodes) <= 1:
            return [list(nodes)]
        nodeset = set(nodes)
        best, best_r = None, None
        for r in nodes:
            worst = max((len(c) for c in _components(adj, nodeset - {r})), default=0)
            if best is None or worst < best:
                best, best_r = worst, r
        out = []
        for comp in _components(adj, nodeset - {best_r}):
            out.extend(rec(comp))
        return [[best_r] + bag for bag in out] if out else [[best_r]]

    return [tuple(sorted(b)) for b in rec(list(range(len(parent))))]


def tree_to_path_decomposition(G: Graph, T: TreeDecomposition) -> tuple[PathDecomposition, dict]:
    rep = validate_decomposition(G, T)
    if not rep.valid:
        raise InvalidInput("invalid tree decomposition: " + "; ".join(rep.violations))
    N = len(T.bags)
    if G.n and N > 4 * G.n:
        raise InvalidInput(f"decomposition tree has {N} nodes, more than 4n = {4 * G.n}")
    node_bags = tree_path_decomposition(T.parent)
    Y = []
    for U in node_bags:
        acc = set()
        for t in U:
            acc.update(T.bags[t])
        Y.append(tuple(sorted(acc)))
    P = PathDecomposition(tuple(Y), G.n)
    in_stats = decomposition_stats(G, T)
    out_stats = decomposition_stats(G, P)
    b, k = in_stats["max_size"], in_stats["max_alpha"]
    L = math.log2(G.n) + 3 if G.n else 3.0
    info = {
        "node_bags": node_bags,
        "max_node_bag": max(len(U) for U in node_bags),
        "node_bag_claim_bound": math.floor(math.log2(N)) + 1 if N else 1,
        "b": b,
        "k": k,
        "max_size": out_stats["max_size"],
        "max_alpha": out_stats["max_alpha"],
        "max_count": out_stats["max_count"],
        "size_bound": b * L,
        "alpha_bound": k * L,
        "count_bound": b ** (k * L),
        # per-bag count is at most (b+1)^k, not b^k (b = 1 shows the difference)
        "count_bound_corrected": (b + 1) ** (k * L),
    }
    info["size_ok"] = info["max_size"] <= info["size_bound"]
    info["alpha_ok"] = info["max_alpha"] <= info["alpha_bound"]
    info["count_ok"] = info["max_count"] <= info["count_bound"]
    info["count_corrected_ok"] = info["max_count"] <= info["count_bound_corrected"]
    return P, info


# ---------------------------------------------------------------------------
# statistics and witnesses


def bag_stats(G: Graph, bag, cap: int = 1 << 20) -> dict:
    H, _ = induced_subgraph(G, bag)
    alpha, _ = independence_number(H)
    return {"size": H.n, "alpha": alpha, "count": count_independent_sets(H, cap)}


def decomposition_stats(G: Graph, D, max_bag: int = 64, cap: int = 1 << 20) -> dict:
    per_bag = []
    for b in D.bags:
        if len(b) > max_bag:
            raise BudgetExceeded(f"bag of size {len(b)} exceeds the stats budget {max_bag}")
        per_bag.append(bag_stats(G, b, cap))
    return {
        "bags": per_bag,
        "max_size": max((s["size"] for s in per_bag), default=0),
        "max_alpha": max((s["alpha"] for s in per_bag), default=0),
        "max_count": max((s["count"] for s in per_bag), default=1),
        "width": max((s["size"] for s in per_bag), default=0) - 1,
    }


def neighborhood_bag_witness(G: Graph, T) -> tuple[int, int]:
    """First ``(v, t)`` (by vertex, then node) with ``N[v]`` inside bag ``t``."""
    if isinstance(T, PathDecomposition):
        T = T.as_tree()
    rep = validate_decomposition(G, T)
    if not rep.valid:
        raise InvalidInput("invalid decomposition: " + "; ".join(rep.violations))
    bag_masks = [mask_of(b) for b in T.bags]
    for v in range(G.n):
        closed = G.nbr[v] | (1 << v)
        for t, bm in enumerate(bag_masks):
            if bm & closed == closed:
                return v, t
    raise AssertionError("no vertex has its closed neighbourhood inside a bag; the validator accepted a bad decomposition")


def is_bipartite(G: Graph, within: int | None = None) -> bool:
    rest = ((1 << G.n) - 1) if within is None else within
    colour = {}
    for comp in connected_components(G, rest):
        start = members(comp)[0]
        colour[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y in members(G.nbr[x] & rest):
                if y not in colour:
                    colour[y] = 1 - colour[x]
                    stack.append(y)
                elif colour[y] == colour[x]:
                    return False
    return True


def bipartite_bag_check(G: Graph, D, Vp) -> list[tuple[int, int, bool]]:
    """For an induced bipartite ``G[V']``: per bag ``(|X ∩ V'|, 2 α(G[X ∩ V']), holds)``."""
    vm = as_mask(Vp, G.n)
    if not is_bipartite(G, vm):
        raise InvalidInput("G[V'] is not bipartite")
    out = []
    for b in D.bags:
        part = mask_of(b) & vm
        H, _ = induced_subgraph(G, part)
        a, _ = independence_number(H)
        out.append((popcount(part), 2 * a, popcount(part) <= 2 * a))
    return out


# ---------------------------------------------------------------------------
# file format


def format_decomposition(D) -> str:
    def bag_text(b):
        return " ".join(map(str, b)) if b else "-"

    if isinstance(D, PathDecomposition):
        lines = [f"path {len(D.bags)}"] + [bag_text(b) for b in D.bags]
    elif isinstance(D, TreeDecomposition):
        lines = [f"tree {len(D.bags)}"] + [f"{p} {bag_text(b)}" for p, b in zip(D.parent, D.bags)]
    elif isinstance(D, SeparatorTree):
        # children appear after their parent and left before right in preorder
        order = D.preorder()
        pos = {t: i for i, t in enumerate(order)}
        par = D.parent
        lines = [f"septree {len(order)}"]
        for t in order:
            line = f"{pos[par[t]] if par[t] >= 0 else -1} {bag_text(D.bags[t])}"
            if D.cliques is not None:
                line += " | " + ";".join(" ".join(map(str, c)) for c in D.cliques[t])
            lines.append(line)
    else:
        raise InvalidInput(f"cannot format {type(D).__name__}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str, n: int):
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append((lineno, line))
    if not rows:
        raise InvalidInput("missing header 'kind count'")
    lineno, head = rows[0]
    parts = head.split()
    if len(parts) != 2 or parts[0] not in ("path", "tree", "septree"):
        raise InvalidInput(f"line {lineno}: header must be 'path|tree|septree count'")
    kind = parts[0]
    try:
        count = int(parts[1])
    except ValueError:
        raise InvalidInput(f"line {lineno}: malformed count") from None
    body = rows[1:]
    if len(body) != count:
        raise InvalidInput(f"node count mismatch: header says {count}, found {len(body)}")

    def ints(tokens, lineno):
        if tokens == ["-"]:
            return ()
        try:
            return tuple(int(x) for x in tokens)
        except ValueError:
            raise InvalidInput(f"line {lineno}: malformed vertex list") from None

    parents, bags, cliques = [], [], []
    for lineno, line in body:
        main, _, cl = line.partition("|")
        toks = main.split()
        if kind == "path":
            parents.append(None)
            bags.append(ints(toks, lineno))
        else:
            if not toks:
                raise InvalidInput(f"line {lineno}: missing parent index")
            parents.append(ints(toks[:1], lineno)[0])
            bags.append(ints(toks[1:] or ["-"], lineno))
        if cl.strip():
            cliques.append(tuple(ints(g.split(), lineno) for g in cl.split(";") if g.strip()))
        else:
            cliques.append(())
    for b in bags:
        for v in b:
            if not 0 <= v < n:
                raise InvalidInput(f"vertex {v} out of range")
    if kind == "path":
        return PathDecomposition(tuple(bags), n)
    if kind == "tree":
        return TreeDecomposition(tuple(parents), tuple(bags), n)
    kids = [[] for _ in bags]
    root = -1
    for i, p in enumerate(parents):
        if p < 0:
            root = i
        elif p >= len(bags):
            raise InvalidInput(f"node {i}: parent {p} out of range")
        else:
            kids[p].append(i)
    has_cliques = any("|" in line for _, line in body)
    return SeparatorTree(tuple(tuple(k) for k in kids), tuple(bags), n, root, tuple(cliques) if has_cliques else None)
