"""Exact hard-core model quantities: partition functions, stationary laws, occupancy.

Arithmetic mode follows the type of the fugacity: ``int``/``Fraction`` (or a
string such as ``"7/3"`` or ``"0.5"``) gives exact rationals, ``float`` gives
doubles.
"""

from __future__ import annotations

import csv
import io
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Union

from .decomp import TreeDecomposition, validate_decomposition
from .errors import InvalidInput
from .graph import (
    DEFAULT_STATE_CAP,
    Graph,
    StateSpace,
    as_mask,
    closed_neighborhood,
    independence_number,
    induced_subgraph,
    independent_set_masks,
    is_independent,
    members,
    popcount,
)

Number = Union[Fraction, float]


def parse_fugacity(value) -> Number:
    """Normalize a fugacity to ``Fraction`` (exact) or ``float``; reject ``λ <= 0``."""
    if isinstance(value, bool):
        raise InvalidInput("fugacity must be a number")
    if isinstance(value, str):
        text = value.strip()
        try:
            lam = Fraction(text)
        except (ValueError, ZeroDivisionError):
            raise InvalidInput(f"cannot parse fugacity {value!r}") from None
    elif isinstance(value, Rational):
        lam = Fraction(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidInput("fugacity must be finite")
        lam = value
    else:
        raise InvalidInput(f"unsupported fugacity type {type(value).__name__}")
    if lam <= 0:
        raise InvalidInput("fugacity must be positive")
    return lam


def is_exact(lam) -> bool:
    return isinstance(lam, Fraction)


def lambda_tilde(lam) -> Number:
    lam = parse_fugacity(lam)
    return max(lam, 1 / lam)


def _one(lam) -> Number:
    return Fraction(1) if is_exact(lam) else 1.0


def _poly_eval(coeffs, lam) -> Number:
    acc = _one(lam) * 0
    for c in reversed(coeffs):
        acc = acc * lam + c
    return acc


def size_counts(G: Graph, within=None, cap: int = DEFAULT_STATE_CAP) -> list[int]:
    """``counts[k]`` = number of independent sets of size ``k`` in ``G`` (or ``G[within]``)."""
    H = G if within is None else induced_subgraph(G, within)[0]
    counts = [0] * (H.n + 1)
    for m in independent_set_masks(H, cap):
        counts[popcount(m)] += 1
    while len(counts) > 1 and counts[-1] == 0:
        counts.pop()
    return counts


def _independent_subsets(G: Graph, bag: tuple[int, ...]) -> list[int]:
    H, labels = induced_subgraph(G, bag)
    out = []
    for m in independent_set_masks(H):
        out.append(sum(1 << labels[i] for i in members(m)))
    return out


def _tree_dp(G: Graph, lam, T: TreeDecomposition) -> Number:
    rep = validate_decomposition(G, T)
    if not rep.valid:
        raise InvalidInput("invalid tree decomposition: " + "; ".join(rep.violations))
    one = _one(lam)
    if not T.bags:
        return one
    kids = T.children()
    bag_mask = [sum(1 << v for v in b) for b in T.bags]
    # post-order
    order, stack = [], [T.root]
    while stack:
        t = stack.pop()
        order.append(t)
        stack.extend(kids[t])
    pw = [one]
    for _ in range(G.n):
        pw.append(pw[-1] * lam)
    # table[t][S] = sum over independent J of G[V_t] with J ∩ X_t = S of λ^{|J \ X_t|}
    table: dict[int, dict[int, Number]] = {}
    for t in reversed(order):
        Xt = bag_mask[t]
        # each child summarized by the part of its bag shared with X_t
        summaries = []
        for c in kids[t]:
            shared = bag_mask[c] & Xt
            g: dict[int, Number] = {}
            for S, val in table.pop(c).items():
                key = S & shared
                g[key] = g.get(key, 0) + val * pw[popcount(S & ~Xt)]
            summaries.append((shared, g))
        cur = {}
        for S in _independent_subsets(G, T.bags[t]):
            val = one
            for shared, g in summaries:
                val = val * g.get(S & shared, 0)
                if not val:
                    break
            if val:
                cur[S] = val
        table[t] = cur
    return sum((val * pw[popcount(S)] for S, val in table[T.root].items()), one * 0)


def partition_function(
    G: Graph,
    lam,
    method: str = "brute",
    decomposition: TreeDecomposition | None = None,
    cap: int = DEFAULT_STATE_CAP,
) -> Number:
    """``Z_G(λ)``; ``method`` is ``"brute"`` (full enumeration) or ``"tree_dp"``."""
    lam = parse_fugacity(lam)
    if method == "brute":
        return _poly_eval(size_counts(G, cap=cap), lam)
    if method == "tree_dp":
        if decomposition is None:
            from .decomp import elimination_tree_decomposition

            decomposition = elimination_tree_decomposition(G)
        elif not isinstance(decomposition, TreeDecomposition):
            decomposition = decomposition.as_tree()
        return _tree_dp(G, lam, decomposition)
    raise InvalidInput(f"unknown method {method!r}")


def partition_function_of(G: Graph, S, lam, cap: int = DEFAULT_STATE_CAP) -> Number:
    """``Z_{G[S]}(λ)``."""
    lam = parse_fugacity(lam)
    return _poly_eval(size_counts(G, as_mask(S, G.n), cap), lam)


@dataclass
class DistributionTable:
    """A probability vector indexed by the states of a :class:`StateSpace`."""

    space: StateSpace
    weights: list
    exact: bool

    @property
    def graph(self) -> Graph:
        return self.space.graph

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, S):
        return self.weights[self.space.index_of(S)]

    def total(self):
        return sum(self.weights, Fraction(0) if self.exact else 0.0)

    def items(self):
        for m, w in zip(self.space.masks, self.weights):
            yield members(m), w

    def min(self):
        return min(self.weights)


def stationary_weights(space: StateSpace, lam) -> list:
    """Unnormalized weights ``λ^{|I|}`` in state order."""
    pw = [_one(lam)]
    for _ in range(space.graph.n):
        pw.append(pw[-1] * lam)
    return [pw[k] for k in space.sizes]


def stationary_distribution(G: Graph, lam, cap: int = DEFAULT_STATE_CAP, space: StateSpace | None = None) -> DistributionTable:
    lam = parse_fugacity(lam)
    space = space or StateSpace(G, cap)
    w = stationary_weights(space, lam)
    Z = sum(w)
    return DistributionTable(space, [x / Z for x in w], is_exact(lam))


def point_mass(space: StateSpace, S, exact: bool = True) -> DistributionTable:
    i = space.index_of(S)
    zero, one = (Fraction(0), Fraction(1)) if exact else (0.0, 1.0)
    w = [zero] * len(space)
    w[i] = one
    return DistributionTable(space, w, exact)


def activation_probability_exact(G: Graph, lam, v: int, cap: int = DEFAULT_STATE_CAP) -> Number:
    """``p_v = λ Z_{G-N[v]} / Z_G``."""
    lam = parse_fugacity(lam)
    rest = ((1 << G.n) - 1) & ~as_mask(closed_neighborhood(G, v))
    return lam * partition_function_of(G, rest, lam, cap) / partition_function(G, lam, cap=cap)


def activation_table(G: Graph, lam, cap: int = DEFAULT_STATE_CAP) -> list[Number]:
    lam = parse_fugacity(lam)
    Z = partition_function(G, lam, cap=cap)
    full = (1 << G.n) - 1
    out = []
    for v in range(G.n):
        rest = full & ~as_mask(closed_neighborhood(G, v))
        out.append(lam * partition_function_of(G, rest, lam, cap) / Z)
    return out


def activation_csv(probs: list[Number]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["vertex", "p_exact_num", "p_exact_den", "p_double"])
    for v, p in enumerate(probs):
        if isinstance(p, Fraction):
            w.writerow([v, p.numerator, p.denominator, repr(float(p))])
        else:
            w.writerow([v, "", "", repr(float(p))])
    return buf.getvalue()


@dataclass
class InequalityCheck:
    holds: bool
    lhs: Number
    rhs: Number
    equality: bool


@dataclass
class CountingReport:
    size_bound: InequalityCheck
    restricted_mass: InequalityCheck
    product_bound: InequalityCheck
    details: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return self.size_bound.holds and self.restricted_mass.holds and self.product_bound.holds


def _leq(lhs, rhs) -> InequalityCheck:
    return InequalityCheck(lhs <= rhs, lhs, rhs, lhs == rhs)


def check_counting_inequalities(G: Graph, lam, X, I, cap: int = DEFAULT_STATE_CAP) -> CountingReport:
    """Evaluate the three counting inequalities for ``(G, λ, X, I)``.

    1. ``Z_G <= max(λ^α, 1) |I(G)|``
    2. ``sum_{K ∩ X = I} π(K) <= λ^{|I|} Z_{V∖X} / Z_G``
    3. ``Z_G <= Z_X Z_{V∖X}``
    """
    lam = parse_fugacity(lam)
    Xm = as_mask(X, G.n)
    Im = as_mask(I, G.n)
    if Im & ~Xm:
        raise InvalidInput("I must be a subset of X")
    if not is_independent(G, Im):
        raise InvalidInput("I is not independent")
    rest = ((1 << G.n) - 1) & ~Xm
    masks = independent_set_masks(G, cap)
    one = _one(lam)
    pw = [one]
    for _ in range(G.n):
        pw.append(pw[-1] * lam)
    Z = sum((pw[popcount(m)] for m in masks), one * 0)
    alpha = max(popcount(m) for m in masks)
    first = _leq(Z, max(pw[alpha], one) * len(masks))
    restricted = sum((pw[popcount(m)] for m in masks if m & Xm == Im), one * 0) / Z
    Z_rest = partition_function_of(G, rest, lam, cap)
    second = _leq(restricted, pw[popcount(Im)] * Z_rest / Z)
    Z_X = partition_function_of(G, Xm, lam, cap)
    third = _leq(Z, Z_X * Z_rest)
    return CountingReport(first, second, third, {"Z": Z, "alpha": alpha, "count": len(masks), "Z_X": Z_X, "Z_rest": Z_rest})


def cut_edges(G: Graph, X) -> int:
    Xm = as_mask(X, G.n)
    return sum(1 for u, v in G.edges if (Xm >> u & 1) != (Xm >> v & 1))


def random_graph(n: int, p: float, seed: int) -> Graph:
    """Erdős–Rényi ``G(n, p)`` from a seeded stdlib generator."""
    rng = random.Random(seed)
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def alpha(G: Graph) -> int:
    return independence_number(G)[0]
