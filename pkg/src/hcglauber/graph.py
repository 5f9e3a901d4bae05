"""Simple undirected graphs, vertex sets and independent-set enumeration.

Vertex subsets are handled internally as Python ``int`` bitmasks (bit ``v``
set iff vertex ``v`` is a member).  At the API boundary they are sorted
tuples or :class:`VertexSet` objects; both are accepted wherever a vertex
set is expected.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceeded, InvalidInput

DEFAULT_STATE_CAP = 1 << 22


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class VertexSet:
    """Sorted, duplicate-free subset of the vertices of a host graph on ``n`` vertices."""

    members: tuple[int, ...]
    n: int

    def __post_init__(self):
        ms = tuple(sorted(set(self.members)))
        if ms and (ms[0] < 0 or ms[-1] >= self.n):
            raise InvalidInput(f"vertex set {ms} not inside [0, {self.n})")
        object.__setattr__(self, "members", ms)

    @classmethod
    def from_mask(cls, mask: int, n: int) -> "VertexSet":
        return cls(members(mask), n)

    @property
    def mask(self) -> int:
        return mask_of(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v) -> bool:
        return v in self.members


def as_mask(S, n: int | None = None) -> int:
    """Coerce a VertexSet, iterable of vertices or bitmask into a bitmask."""
    if isinstance(S, int):
        m = S
    elif isinstance(S, VertexSet):
        if n is not None and S.n != n:
            raise InvalidInput(f"vertex set belongs to a graph on {S.n} vertices, not {n}")
        m = S.mask
    else:
        vs = list(S)
        if n is not None:
            for v in vs:
                if not 0 <= v < n:
                    raise InvalidInput(f"vertex {v} out of range")
        m = mask_of(vs)
    if n is not None and m >> n:
        raise InvalidInput(f"vertex {m.bit_length() - 1} out of range")
    return m


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "nbr", "_edges")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InvalidInput("vertex count must be non-negative")
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n):
                raise InvalidInput(f"vertex {u} out of range")
            if not (0 <= v < n):
                raise InvalidInput(f"vertex {v} out of range")
            if u == v:
                raise InvalidInput(f"self-loop at vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adj = tuple(frozenset(a) for a in adj)
        self.nbr = tuple(mask_of(a) for a in adj)
        self._edges = None

    @property
    def edges(self) -> list[tuple[int, int]]:
        if self._edges is None:
            self._edges = sorted((u, v) for u in range(self.n) for v in self.adj[u] if u < v)
        return self._edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# text format


def parse_graph(text: str) -> Graph:
    """Parse the edge-list format: ``#`` comments, header ``n m``, then ``m`` lines ``u v``."""
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidInput(f"line {lineno}: expected two integers, got {line!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise InvalidInput(f"line {lineno}: malformed line {line!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise InvalidInput(f"line {lineno}: negative header value")
            header = (a, b)
            continue
        n = header[0]
        for x in (a, b):
            if not 0 <= x < n:
                raise InvalidInput(f"line {lineno}: vertex {x} out of range")
        if a == b:
            raise InvalidInput(f"line {lineno}: self-loop at vertex {a}")
        edges.append((a, b))
    if header is None:
        raise InvalidInput("missing header line 'n m'")
    if len(edges) != header[1]:
        raise InvalidInput(f"edge count mismatch: header says {header[1]}, found {len(edges)}")
    return Graph(header[0], edges)


def format_graph(G: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"{G.n} {G.m}")
    lines.extend(f"{u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# basic operations


def induced_subgraph(G: Graph, S) -> tuple[Graph, tuple[int, ...]]:
    """Return ``G[S]`` relabelled ``0..|S|-1`` in ascending order, plus the old labels."""
    verts = members(as_mask(S, G.n))
    pos = {v: i for i, v in enumerate(verts)}
    edges = [(pos[u], pos[v]) for u, v in G.edges if u in pos and v in pos]
    return Graph(len(verts), edges), verts


def closed_neighborhood(G: Graph, v: int) -> tuple[int, ...]:
    if not 0 <= v < G.n:
        raise InvalidInput(f"vertex {v} out of range")
    return members(G.nbr[v] | (1 << v))


def is_independent(G: Graph, S) -> bool:
    m = as_mask(S, G.n)
    rest = m
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        if G.nbr[v] & m:
            return False
        rest ^= low
    return True


def reconfiguration_adjacent(I, J) -> bool:
    """True iff ``|I Δ J| <= 1`` (so a set is adjacent to itself)."""
    if isinstance(I, VertexSet) and isinstance(J, VertexSet) and I.n != J.n:
        raise InvalidInput("vertex sets come from different host graphs")
    return popcount(as_mask(I) ^ as_mask(J)) <= 1


def _iter_independent_masks(nbr: Sequence[int], n: int) -> Iterator[int]:
    # preorder DFS, children in ascending vertex order == lexicographic order
    # of the sorted member lists
    full = (1 << n) - 1
    stack = [(0, full)]
    while stack:
        mask, cand = stack.pop()
        yield mask
        children = []
        while cand:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            # only vertices above v stay candidates below this child
            children.append((mask | low, cand & ~nbr[v]))
        stack.extend(reversed(children))


def independent_set_masks(G: Graph, cap: int = DEFAULT_STATE_CAP) -> list[int]:
    out = []
    for m in _iter_independent_masks(G.nbr, G.n):
        out.append(m)
        if len(out) > cap:
            raise BudgetExceeded(f"state space too large for exact mode (more than {cap} independent sets)")
    return out


def enumerate_independent_sets(G: Graph, cap: int = DEFAULT_STATE_CAP) -> list[tuple[int, ...]]:
    """All independent sets of ``G`` in lexicographic order of their sorted member lists."""
    return [members(m) for m in independent_set_masks(G, cap)]


def count_independent_sets(G: Graph, cap: int = DEFAULT_STATE_CAP) -> int:
    return len(independent_set_masks(G, cap))


class StateSpace:
    """Indexed family of the independent sets of a graph (index = enumeration position)."""

    def __init__(self, G: Graph, cap: int = DEFAULT_STATE_CAP):
        self.graph = G
        self.masks = independent_set_masks(G, cap)
        self.index = {m: i for i, m in enumerate(self.masks)}
        self.sizes = [popcount(m) for m in self.masks]

    def __len__(self):
        return len(self.masks)

    def set_at(self, i: int) -> tuple[int, ...]:
        return members(self.masks[i])

    def index_of(self, S) -> int:
        m = as_mask(S, self.graph.n)
        try:
            return self.index[m]
        except KeyError:
            raise InvalidInput(f"{members(m)} is not an independent set") from None

    def neighbors(self, i: int) -> Iterator[tuple[int, int]]:
        """Yield ``(j, signed_move)`` for every state one add/remove away from state ``i``.

        ``signed_move`` is ``v + 1`` for adding ``v`` and ``-(v + 1)`` for removing it.
        """
        G = self.graph
        m = self.masks[i]
        for v in range(G.n):
            bit = 1 << v
            if m & bit:
                yield self.index[m ^ bit], -(v + 1)
            elif not (G.nbr[v] & m):
                yield self.index[m | bit], v + 1


def independence_number(G: Graph, node_budget: int = 10_000_000) -> tuple[int, tuple[int, ...]]:
    """Maximum independent set size and one witness, by branch and bound."""
    best = [0, 0]
    nodes = [0]
    nbr = G.nbr

    def search(chosen: int, size: int, cand: int):
        nodes[0] += 1
        if nodes[0] > node_budget:
            raise BudgetExceeded("independence number search exceeded its node budget")
        if size > best[0]:
            best[0], best[1] = size, chosen
        if not cand or size + popcount(cand) <= best[0]:
            return
        # branch on a max-degree candidate; vertices of degree 0 inside cand are always taken
        rest, pick, pick_deg = cand, -1, -1
        free = 0
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            d = popcount(nbr[v] & cand)
            if d == 0:
                free |= low
            elif d > pick_deg:
                pick, pick_deg = v, d
        if free:
            search(chosen | free, size + popcount(free), cand & ~free)
            return
        bit = 1 << pick
        search(chosen | bit, size + 1, cand & ~nbr[pick] & ~bit)
        search(chosen, size, cand & ~bit)

    search(0, 0, (1 << G.n) - 1)
    return best[0], members(best[1])


def connected_components(G: Graph, within: int | None = None) -> list[int]:
    """Connected components of ``G[within]`` as bitmasks, ordered by lowest vertex."""
    rest = ((1 << G.n) - 1) if within is None else within
    comps = []
    while rest:
        low = rest & -rest
        comp, frontier = low, low
        while frontier:
            f = frontier & -frontier
            frontier ^= f
            new = G.nbr[f.bit_length() - 1] & rest & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def is_clique(G: Graph, S) -> bool:
    m = as_mask(S, G.n)
    for v in members(m):
        if (m & ~(1 << v)) & ~G.nbr[v]:
            return False
    return True


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for H in graphs:
        edges.extend((u + off, v + off) for u, v in H.edges)
        off += H.n
    return Graph(off, edges)
