"""Deterministic graph families used by the lower-bound constructions.

Vertex numbering conventions (relied on by golden tests):

* ``complete_bipartite(t)``: side A is ``0..t-1``, side B is ``t..2t-1``.
* ``blowup_bipartite(p, t)``: the first copy ``G1`` is ``0..pt-1`` with clique
  ``i`` on ``ip..ip+p-1``; the second copy is shifted by ``pt``.
* ``doubling_tree(k)``: nodes of the complete binary tree ``T_k`` are in BFS
  (heap) order, root 0 and children ``2t+1, 2t+2``; node ``t`` owns
  ``u_t = 2t`` and ``v_t = 2t+1``.
* ``blowup_doubling(k, t)``: vertex ``x`` of ``G_k`` becomes the block
  ``x*t*q .. (x+1)*t*q - 1`` (``q = 4**k``), split into ``t`` cliques of ``q``
  consecutive vertices.
* ``grid``/``torus``: mixed radix, first coordinate least significant.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BudgetExceeded, InvalidInput
from .graph import Graph, popcount

DEFAULT_MAX_VERTICES = 200_000

FAMILY_KINDS = ("complete_bipartite", "blowup_bipartite", "doubling_tree", "blowup_doubling", "grid", "torus")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    t: int = 1
    p: int = 1
    k: int = 0
    L: int = 2
    d: int = 1

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise InvalidInput(f"unknown family {self.kind!r}")
        if self.t < 1 or self.p < 1 or self.k < 0 or self.L < 2 or self.d < 1:
            raise InvalidInput(f"family parameters out of range: {self}")

    def vertex_count(self) -> int:
        if self.kind == "complete_bipartite":
            return 2 * self.t
        if self.kind == "blowup_bipartite":
            return 2 * self.p * self.t
        if self.kind == "doubling_tree":
            return 2 ** (self.k + 2) - 2
        if self.kind == "blowup_doubling":
            return self.t * 4**self.k * (2 ** (self.k + 2) - 2)
        return self.L**self.d


@dataclass(frozen=True)
class GkLabels:
    """Tree node and role (``"u"``/``"v"``) of every vertex of ``G_k``."""

    k: int
    node: tuple[int, ...]
    role: tuple[str, ...]

    def vertex(self, t: int, role: str) -> int:
        return 2 * t + (0 if role == "u" else 1)


@dataclass(frozen=True)
class FamilyGraph:
    graph: Graph
    spec: FamilySpec
    labels: GkLabels | None = None
    # H_{k,t}: vertex -> the G_k vertex it replaces
    projection: tuple[int, ...] | None = field(default=None)


def complete_bipartite(t: int) -> Graph:
    return Graph(2 * t, [(a, t + b) for a in range(t) for b in range(t)])


def disjoint_cliques(count: int, size: int) -> Graph:
    edges = []
    for c in range(count):
        base = c * size
        edges.extend((base + i, base + j) for i in range(size) for j in range(i + 1, size))
    return Graph(count * size, edges)


def blowup_bipartite(p: int, t: int) -> Graph:
    half = p * t
    edges = list(disjoint_cliques(t, p).edges)
    edges += [(u + half, v + half) for u, v in edges]
    edges += [(a, half + b) for a in range(half) for b in range(half)]
    return Graph(2 * half, edges)


def tree_node_count(k: int) -> int:
    return 2 ** (k + 1) - 1


def tree_parent(t: int) -> int:
    return (t - 1) // 2 if t > 0 else -1


def tree_depth(t: int) -> int:
    return (t + 1).bit_length() - 1


def binary_tree(k: int) -> Graph:
    """The complete binary tree ``T_k`` of depth ``k`` in heap order."""
    N = tree_node_count(k)
    return Graph(N, [(tree_parent(c), c) for c in range(1, N)])


def doubling_tree(k: int) -> tuple[Graph, GkLabels]:
    N = tree_node_count(k)
    edges = [(2 * t, 2 * t + 1) for t in range(N)]
    for c in range(1, N):
        par = tree_parent(c)
        edges.append((2 * par, 2 * c))
        edges.append((2 * par + 1, 2 * c + 1))
    labels = GkLabels(k, tuple(x // 2 for x in range(2 * N)), tuple("uv"[x % 2] for x in range(2 * N)))
    return Graph(2 * N, edges), labels


def blowup_doubling(k: int, t: int) -> tuple[Graph, GkLabels, tuple[int, ...]]:
    Gk, labels = doubling_tree(k)
    q = 4**k
    block = t * q
    edges = []
    for x in range(Gk.n):
        base = x * block
        for c in range(t):
            cb = base + c * q
            edges.extend((cb + i, cb + j) for i in range(q) for j in range(i + 1, q))
    for x, y in Gk.edges:
        edges.extend((x * block + i, y * block + j) for i in range(block) for j in range(block))
    projection = tuple(v // block for v in range(Gk.n * block))
    return Graph(Gk.n * block, edges), labels, projection


def lattice(L: int, d: int, wrap: bool) -> Graph:
    n = L**d
    edges = []
    for v in range(n):
        stride = 1
        for _axis in range(d):
            coord = (v // stride) % L
            if coord + 1 < L:
                edges.append((v, v + stride))
            elif wrap and L > 2:
                edges.append((v, v - coord * stride))
            stride *= L
    return Graph(n, edges)


def generate(spec: FamilySpec, max_vertices: int = DEFAULT_MAX_VERTICES) -> FamilyGraph:
    nv = spec.vertex_count()
    if nv > max_vertices:
        raise BudgetExceeded(f"{spec.kind} would have {nv} vertices (budget {max_vertices})")
    if spec.kind == "complete_bipartite":
        return FamilyGraph(complete_bipartite(spec.t), spec)
    if spec.kind == "blowup_bipartite":
        return FamilyGraph(blowup_bipartite(spec.p, spec.t), spec)
    if spec.kind == "doubling_tree":
        G, labels = doubling_tree(spec.k)
        return FamilyGraph(G, spec, labels)
    if spec.kind == "blowup_doubling":
        G, labels, proj = blowup_doubling(spec.k, spec.t)
        return FamilyGraph(G, spec, labels, proj)
    return FamilyGraph(lattice(spec.L, spec.d, wrap=spec.kind == "torus"), spec)


# ---------------------------------------------------------------------------
# G_k structure


def gk_canonical_mis(k: int, max_k: int = 20) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The two maximum independent sets of ``G_k`` from the recursive construction.

    ``I_k`` takes ``u`` at the root and alternates roles by depth; ``J_k`` is
    its complement.
    """
    if k < 0:
        raise InvalidInput("k must be non-negative")
    if k > max_k:
        raise BudgetExceeded(f"k={k} exceeds budget {max_k}")
    N = tree_node_count(k)
    I = tuple(sorted(2 * t + (tree_depth(t) % 2) for t in range(N)))
    J = tuple(sorted(2 * t + 1 - (tree_depth(t) % 2) for t in range(N)))
    return I, J


def gk_size_polynomial(k: int) -> list[int]:
    """Coefficient list: entry ``s`` = number of independent sets of ``G_k`` of size ``s``.

    Dynamic programme over ``T_k``; each node is empty, holds ``u`` or holds ``v``.
    """
    N = tree_node_count(k)

    def add(a, b):
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return out

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out

    # allowed child states given parent state: u clashes with u, v with v
    allowed = {0: (0, 1, 2), 1: (0, 2), 2: (0, 1)}
    table: list[dict[int, list[int]]] = [None] * N  # type: ignore[list-item]
    for t in reversed(range(N)):
        kids = [c for c in (2 * t + 1, 2 * t + 2) if c < N]
        row = {}
        for s in (0, 1, 2):
            poly = [0, 1] if s else [1]
            for c in kids:
                acc = [0]
                for sc in allowed[s]:
                    acc = add(acc, table[c][sc])
                poly = mul(poly, acc)
            row[s] = poly
        table[t] = row
    total = add(add(table[0][0], table[0][1]), table[0][2])
    while len(total) > 1 and total[-1] == 0:
        total.pop()
    return total


def deficiency_bijection_count(k: int, d: int) -> int:
    """Count pairs ``(D, c_D)``: ``D`` a set of ``d`` tree nodes, ``c_D`` a 0/1 label per component root."""
    N = tree_node_count(k)
    if d > N:
        return 0
    total = 0
    for D in itertools.combinations(range(N), d):
        Dset = set(D)
        roots = sum(1 for t in range(N) if t not in Dset and (t == 0 or tree_parent(t) in Dset))
        total += 2**roots
    return total


def count_deficient_is(k: int, d: int, method: str = "dp", max_subsets: int = 1 << 22) -> tuple[int, int]:
    """Exact number of independent sets of ``G_k`` of size ``alpha(G_k) - d`` and the ``2^(2d+1) alpha^d`` bound."""
    if d < 0 or k < 0:
        raise InvalidInput("k and d must be non-negative")
    alpha = tree_node_count(k)
    bound = 2 ** (2 * d + 1) * alpha**d
    target = alpha - d
    if target < 0:
        return 0, bound
    if method == "dp":
        poly = gk_size_polynomial(k)
        count = poly[target] if target < len(poly) else 0
    elif method == "enumerate":
        G, _ = doubling_tree(k)
        if 2**G.n > max_subsets:
            raise BudgetExceeded(f"2^{G.n} subsets exceed enumeration budget")
        from .graph import independent_set_masks

        count = sum(1 for m in independent_set_masks(G) if popcount(m) == target)
    elif method == "bijection":
        count = deficiency_bijection_count(k, d)
    else:
        raise InvalidInput(f"unknown method {method!r}")
    return count, bound


def tk_boundary_profile(k: int, max_nodes: int = 22) -> tuple[list[int], int]:
    """``[min_{|S|=i} |N(S)| for i = 1..|V(T_k)|]`` and its maximum, by subset enumeration."""
    T = binary_tree(k)
    N = T.n
    if N > max_nodes:
        raise BudgetExceeded(f"T_{k} has {N} nodes; exact profile limited to {max_nodes}")
    best = [N + 1] * (N + 1)
    nbr = T.nbr
    # boundary of S = (union of neighbourhoods) minus S; grow the union incrementally by lowest bit
    union = [0] * (1 << N)
    for S in range(1, 1 << N):
        low = S & -S
        union[S] = union[S ^ low] | nbr[low.bit_length() - 1]
        size = popcount(S)
        b = popcount(union[S] & ~S)
        if b < best[size]:
            best[size] = b
    profile = best[1:]
    return profile, max(profile)


# ---------------------------------------------------------------------------
# geometric intersection graphs


def _num(tok: str):
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise InvalidInput(f"not a number: {tok!r}") from None


@dataclass(frozen=True)
class GeometricInstance:
    """Balls in R^d; coordinates are Fractions (exact) or floats."""

    dim: int
    centers: tuple[tuple, ...]
    radii: tuple

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInput("dimension must be >= 1")
        if len(self.centers) != len(self.radii):
            raise InvalidInput("one radius per center required")
        for i, c in enumerate(self.centers):
            if len(c) != self.dim:
                raise InvalidInput(f"point {i} has {len(c)} coordinates, expected {self.dim}")
        for i, r in enumerate(self.radii):
            if not r > 0:
                raise InvalidInput(f"radius of object {i} must be positive")

    @property
    def n(self) -> int:
        return len(self.centers)

    @property
    def exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for c in self.centers for x in c) and all(
            isinstance(r, (int, Fraction)) for r in self.radii
        )


def parse_geometric(text: str) -> GeometricInstance:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            rows.append((lineno, line.split()))
    if not rows:
        raise InvalidInput("missing header line 'd n'")
    lineno, head = rows[0]
    if len(head) != 2:
        raise InvalidInput(f"line {lineno}: header must be 'd n'")
    try:
        d, n = int(head[0]), int(head[1])
    except ValueError:
        raise InvalidInput(f"line {lineno}: malformed header") from None
    if len(rows) - 1 != n:
        raise InvalidInput(f"object count mismatch: header says {n}, found {len(rows) - 1}")
    centers, radii = [], []
    for lineno, toks in rows[1:]:
        if len(toks) != d + 1:
            raise InvalidInput(f"line {lineno}: expected {d} coordinates and a radius")
        vals = [_num(t) for t in toks]
        centers.append(tuple(vals[:d]))
        radii.append(vals[d])
    return GeometricInstance(d, tuple(centers), tuple(radii))


def format_geometric(inst: GeometricInstance) -> str:
    lines = [f"{inst.dim} {inst.n}"]
    for c, r in zip(inst.centers, inst.radii):
        lines.append(" ".join(str(x) for x in (*c, r)))
    return "\n".join(lines) + "\n"


def balls_intersect(inst: GeometricInstance, i: int, j: int, tol: float = 1e-9) -> bool:
    ci, cj = inst.centers[i], inst.centers[j]
    reach = inst.radii[i] + inst.radii[j]
    if inst.exact:
        return sum((a - b) ** 2 for a, b in zip(ci, cj)) <= reach * reach
    dist = math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(ci, cj)))
    return dist <= float(reach) + tol


def geometric_graph(inst: GeometricInstance, tol: float = 1e-9) -> Graph:
    """Intersection graph of closed balls: edge iff ``|c_i - c_j| <= r_i + r_j``."""
    n = inst.n
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if balls_intersect(inst, i, j, tol)])


def random_balls(n: int, dim: int = 2, radius: float = 1.0, box: float = 10.0, seed: int = 0) -> GeometricInstance:
    """Seeded uniform centers in ``[0, box]^dim`` with a common radius."""
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0.0, box, size=(n, dim))
    return GeometricInstance(dim, tuple(tuple(float(x) for x in p) for p in pts), tuple([float(radius)] * n))


def gk_vertex_names(k: int) -> list[str]:
    N = tree_node_count(k)
    return [f"{'uv'[x % 2]}{x // 2}" for x in range(2 * N)]


def lift_to_blowup(S: Sequence[int], k: int, t: int) -> tuple[int, ...]:
    """One vertex per clique of ``Y_x`` for every ``x`` in ``S``: a maximum independent set of ``H_{k,t}[Y_S]``."""
    q = 4**k
    block = t * q
    return tuple(sorted(x * block + c * q for x in S for c in range(t)))


__all__ = [
    "FamilySpec",
    "FamilyGraph",
    "GkLabels",
    "GeometricInstance",
    "generate",
    "complete_bipartite",
    "blowup_bipartite",
    "disjoint_cliques",
    "doubling_tree",
    "blowup_doubling",
    "binary_tree",
    "lattice",
    "gk_canonical_mis",
    "gk_size_polynomial",
    "count_deficient_is",
    "deficiency_bijection_count",
    "tk_boundary_profile",
    "parse_geometric",
    "format_geometric",
    "geometric_graph",
    "random_balls",
    "lift_to_blowup",
]
