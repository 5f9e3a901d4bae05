"""Canonical paths between independent sets and their exact congestion.

Two families are supported.  For a separator tree, the path from ``I`` to
``J`` clears ``I`` from a node's bag, recurses into both children and then
fills in ``J`` on the bag.  For a path decomposition ``X_1..X_p`` (``X_p``
empty), batch ``i`` removes what is left of ``I`` in ``X_i`` and adds
``J ∩ X_{i-1} ∖ X_i``.  Within a batch removals come first and vertices are
taken in ascending order.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .decomp import PathDecomposition, SeparatorTree, Report, validate_decomposition, validate_separator_tree
from .errors import BudgetExceeded, InvalidInput
from .graph import DEFAULT_STATE_CAP, Graph, StateSpace, as_mask, independent_set_masks, induced_subgraph, is_independent, members, popcount
from .hardcore import is_exact, lambda_tilde, parse_fugacity, partition_function_of

Move = tuple[int, int]  # (vertex, +1 add | -1 remove)


@dataclass(frozen=True)
class MoveSequence:
    start: tuple[int, ...]
    moves: tuple[Move, ...]
    # batch (path decomposition) or tree node (separator tree) that emitted each move
    origin: tuple[int, ...] = ()

    def __len__(self):
        return len(self.moves)

    def states(self) -> list[int]:
        """Bitmask of every state visited, start included."""
        m = as_mask(self.start)
        out = [m]
        for v, sign in self.moves:
            m = m | (1 << v) if sign > 0 else m & ~(1 << v)
            out.append(m)
        return out

    def end(self) -> tuple[int, ...]:
        return members(self.states()[-1])

    def text(self) -> str:
        return " ".join(f"{'+' if s > 0 else '-'}{v}" for v, s in self.moves)


class PathFamily:
    """Canonical-path family over a validated separator tree or path decomposition."""

    def __init__(self, G: Graph, decomposition):
        self.graph = G
        if isinstance(decomposition, SeparatorTree):
            rep = validate_separator_tree(G, decomposition, balance=None)
            self.kind = "septree"
        elif isinstance(decomposition, PathDecomposition):
            decomposition = decomposition.with_empty_last()
            rep = validate_decomposition(G, decomposition)
            self.kind = "pathdecomp"
        else:
            raise InvalidInput(f"unsupported decomposition {type(decomposition).__name__}")
        if not rep.valid:
            raise InvalidInput("invalid decomposition: " + "; ".join(rep.violations))
        self.decomposition = decomposition
        if self.kind == "septree":
            T = decomposition
            self._bag = [as_mask(b) for b in T.bags]
            self._sub = T.subtree_masks()
            self._order = T.preorder()
        else:
            self._bag = [as_mask(b) for b in decomposition.bags]

    # -- construction -----------------------------------------------------

    def build(self, I, J) -> MoveSequence:
        G = self.graph
        Im, Jm = as_mask(I, G.n), as_mask(J, G.n)
        for name, m in (("I", Im), ("J", Jm)):
            if not is_independent(G, m):
                raise InvalidInput(f"{name} = {members(m)} is not independent")
        moves: list[Move] = []
        origin: list[int] = []
        if self.kind == "septree":
            self._septree(self.decomposition.root, Im, Jm, moves, origin)
        else:
            self._pathdecomp(Im, Jm, moves, origin)
        seq = MoveSequence(members(Im), tuple(moves), tuple(origin))
        rep = validate_move_sequence(G, seq, members(Jm))
        if not rep.valid:
            raise AssertionError("canonical path construction failed: " + "; ".join(rep.violations))
        return seq

    def _septree(self, t: int, I: int, J: int, moves, origin):
        # iterative version of: clear I on X_t, recurse left, recurse right, fill J on X_t
        T = self.decomposition
        stack = [(t, False)]
        while stack:
            node, done = stack.pop()
            X = self._bag[node]
            if done:
                for v in members(J & X):
                    moves.append((v, 1))
                    origin.append(node)
                continue
            for v in members(I & X):
                moves.append((v, -1))
                origin.append(node)
            stack.append((node, True))
            for c in reversed(T.children[node]):
                stack.append((c, False))

    def _pathdecomp(self, I: int, J: int, moves, origin):
        bags = self._bag
        cur = I
        for i, X in enumerate(bags):
            for v in members(cur & X):
                moves.append((v, -1))
                origin.append(i)
            cur &= ~X
            if i:
                add = J & bags[i - 1] & ~X
                for v in members(add):
                    moves.append((v, 1))
                    origin.append(i)
                cur |= add

    # -- derived sets -----------------------------------------------------

    def local_sets(self) -> list[int]:
        """Per vertex: ``A_v`` (septree) as a bitmask; not defined for path decompositions."""
        if self.kind != "septree":
            raise InvalidInput("A_v is defined for separator trees")
        A = self.decomposition.ancestor_masks()
        where = self.decomposition.node_of_vertex()
        return [A[where[v]] for v in range(self.graph.n)]

    def removal_step(self, v: int) -> int:
        """Batch index ``min{i : v ∈ X_i}`` (path decompositions)."""
        return next(i for i, X in enumerate(self._bag) if X >> v & 1)

    def addition_step(self, v: int) -> int:
        """Batch index ``min{i : v ∈ X_{i-1}, v ∉ X_i}`` (path decompositions)."""
        return next(i for i in range(1, len(self._bag)) if self._bag[i - 1] >> v & 1 and not self._bag[i] >> v & 1)


def build_canonical_path(family: PathFamily, I, J) -> MoveSequence:
    return family.build(I, J)


def validate_move_sequence(G: Graph, seq: MoveSequence, expected_end) -> Report:
    rep = Report()
    m = as_mask(seq.start, G.n)
    if not is_independent(G, m):
        rep.fail(f"start {members(m)} is not independent")
    for k, (v, sign) in enumerate(seq.moves):
        if not 0 <= v < G.n:
            rep.fail(f"move {k}: vertex {v} out of range")
            return rep
        bit = 1 << v
        if sign > 0:
            if m & bit:
                rep.fail(f"move {k}: +{v} adds a vertex already present")
            m |= bit
            if G.nbr[v] & m:
                rep.fail(f"move {k}: +{v} breaks independence after prefix {seq.text().split()[: k + 1]}")
                return rep
        else:
            if not m & bit:
                rep.fail(f"move {k}: -{v} removes an absent vertex")
            m &= ~bit
    if m != as_mask(expected_end, G.n):
        rep.fail(f"endpoint mismatch: reached {members(m)}, expected {members(as_mask(expected_end, G.n))}")
    if len(seq.moves) > 2 * G.n:
        rep.fail(f"length {len(seq.moves)} exceeds 2n = {2 * G.n}")
    return rep


def timing_violations(family: PathFamily, seq: MoveSequence, I, J) -> list[str]:
    """Check the batch at which each vertex of ``I`` leaves and each vertex of ``J`` enters."""
    if family.kind != "pathdecomp":
        raise InvalidInput("timing laws concern path decompositions")
    Im, Jm = as_mask(I), as_mask(J)
    out = []
    removed = {v: b for (v, s), b in zip(seq.moves, seq.origin) if s < 0}
    added = {v: b for (v, s), b in zip(seq.moves, seq.origin) if s > 0}
    for v in members(Im):
        if removed.get(v) != family.removal_step(v):
            out.append(f"vertex {v} of I removed in batch {removed.get(v)}, expected {family.removal_step(v)}")
    for v in members(Jm):
        if added.get(v) != family.addition_step(v):
            out.append(f"vertex {v} of J added in batch {added.get(v)}, expected {family.addition_step(v)}")
    if set(removed) != set(members(Im)) or set(added) != set(members(Jm)):
        out.append("moves touch vertices outside I and J")
    return out


# ---------------------------------------------------------------------------
# congestion


@dataclass
class CongestionTable:
    rho: dict  # (from_index, to_index) -> ρ(Γ, e)
    rho_max: Fraction | float
    argmax: tuple[int, int]
    space: StateSpace
    exact: bool
    paths: int

    def to_csv(self, extra: dict | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["from_index", "to_index", "move", "rho_num", "rho_den", "rho_double"])
        masks = self.space.masks
        for (i, j), r in sorted(self.rho.items()):
            diff = masks[i] ^ masks[j]
            v = diff.bit_length() - 1
            move = f"+{v}" if masks[j] & diff else f"-{v}"
            num, den = (r.numerator, r.denominator) if isinstance(r, Fraction) else ("", "")
            w.writerow([i, j, move, num, den, repr(float(r))])
        summary = {"rho_max": self.rho_max}
        summary.update(extra or {})
        for key, val in summary.items():
            if isinstance(val, int):
                val = Fraction(val)
            num, den = (val.numerator, val.denominator) if isinstance(val, Fraction) else ("", "")
            w.writerow([f"# {key}", "", "", num, den, repr(float(val))])
        return buf.getvalue()


def congestion(G: Graph, lam, family: PathFamily, cap: int = 4096, space: StateSpace | None = None) -> CongestionTable:
    """Exact ``ρ(Γ, e)`` for every ordered transition ``e = (W, W')`` with ``W != W'``."""
    lam = parse_fugacity(lam)
    space = space or StateSpace(G, cap)
    N, n = len(space), G.n
    if N > cap:
        raise BudgetExceeded(f"{N} states exceed the congestion cap {cap}")
    exact = is_exact(lam)
    if exact:
        p, q = lam.numerator, lam.denominator
        a = [p**k * q ** (n - k) for k in space.sizes]
    else:
        a = [lam**k for k in space.sizes]
    index = space.index
    acc: dict[tuple[int, int], int] = {}
    masks = space.masks
    for K in range(N):
        aK = a[K]
        for L in range(N):
            seq = family.build(masks[K], masks[L])
            length = len(seq.moves)
            if not length:
                continue
            w = aK * a[L] * length
            prev = K
            for m in seq.states()[1:]:
                cur = index[m]
                key = (prev, cur)
                acc[key] = acc.get(key, 0) + w
                prev = cur
    W = sum(a)
    rho = {}
    D = n * (lam + 1)
    for (i, j), s in acc.items():
        P_ij = (lam if popcount(masks[j]) > popcount(masks[i]) else 1) / D
        rho[(i, j)] = s / (W * a[i] * P_ij)
    if rho:
        argmax = max(rho, key=lambda e: (rho[e], -e[0], -e[1]))
        rho_max = rho[argmax]
    else:
        argmax, rho_max = (0, 0), Fraction(0) if exact else 0.0
    return CongestionTable(rho, rho_max, argmax, space, exact, N * N)


# ---------------------------------------------------------------------------
# closed-form bounds


@dataclass
class CongestionBound:
    bound: Fraction | float
    alpha: int
    max_count: int
    lam_tilde: Fraction | float
    alpha_witness: int  # vertex (septree) or bag index (pathdecomp)
    count_witness: int
    sets: list[int] = field(repr=False, default_factory=list)


def _alpha_and_count(G: Graph, S: int, cap: int) -> tuple[int, int]:
    H = induced_subgraph(G, S)[0]
    masks = independent_set_masks(H, cap)
    return max(popcount(m) for m in masks), len(masks)


def theoretical_congestion_bound(G: Graph, lam, family: PathFamily, cap: int = DEFAULT_STATE_CAP) -> CongestionBound:
    """``4 n^2 λ̃^{2α+1} M^2`` with α, M the max independence number / count over A_v or X_t."""
    lam = parse_fugacity(lam)
    lt = lambda_tilde(lam)
    sets = family.local_sets() if family.kind == "septree" else list(family._bag)
    best_a, best_m, wa, wm = 0, 1, 0, 0
    cache: dict[int, tuple[int, int]] = {}
    for idx, S in enumerate(sets):
        if S not in cache:
            cache[S] = _alpha_and_count(G, S, cap)
        a, m = cache[S]
        if a > best_a:
            best_a, wa = a, idx
        if m > best_m:
            best_m, wm = m, idx
    n = G.n
    bound = 4 * n * n * lt ** (2 * best_a + 1) * best_m * best_m
    return CongestionBound(bound, best_a, best_m, lt, wa, wm, sets)


def mixing_upper_bound_from_congestion(rho, pi_min) -> float:
    """``ρ ln(4/π_min)``."""
    if rho < 0:
        raise InvalidInput("congestion must be non-negative")
    if not 0 < pi_min <= 1:
        raise InvalidInput("π_min must lie in (0, 1]")
    return float(rho) * math.log(4 / float(pi_min))


def transition_bound(G: Graph, lam, family: PathFamily, I, v: int, adding: bool, cache: dict | None = None):
    """Per-transition congestion bound for ``(I, I+v)`` or ``(I, I-v)``.

    Uses ``A_v`` for separator trees and the bag selected by the vertex's
    entry/exit batch for path decompositions.
    """
    lam = parse_fugacity(lam)
    cache = {} if cache is None else cache
    Im = as_mask(I, G.n)
    if family.kind == "septree":
        if "A" not in cache:
            cache["A"] = family.local_sets()
        S = cache["A"][v]
    else:
        S = family._bag[family.addition_step(v) if adding else family.removal_step(v)]
    if ("Z", S) not in cache:
        cache[("Z", S)] = partition_function_of(G, S, lam)
    Z = cache[("Z", S)]
    n = G.n
    k = popcount(Im & S)
    if adding:
        return 2 * n * n * (lam + 1) / lam / lam**k * Z * Z
    return 2 * n * n * (lam + 1) / lam**k * Z * Z


def check_transition_bounds(G: Graph, lam, family: PathFamily, table: CongestionTable) -> list[tuple[int, int, object, object]]:
    """Transitions whose measured congestion exceeds the per-transition bound."""
    lam = parse_fugacity(lam)
    masks = table.space.masks
    cache: dict = {}
    bad = []
    for (i, j), r in table.rho.items():
        diff = masks[i] ^ masks[j]
        v = diff.bit_length() - 1
        adding = bool(masks[j] & diff)
        b = transition_bound(G, lam, family, masks[i], v, adding, cache)
        if r > b:
            bad.append((i, j, r, b))
    return bad
