import math
from fractions import Fraction

import pytest

from hcglauber import InvalidInput
from hcglauber.chain import exact_mixing_time
from hcglauber.decomp import PathDecomposition, SeparatorTree, build_separator_tree, path_decomposition_from_order
from hcglauber.graph import Graph, StateSpace
from hcglauber.hardcore import stationary_distribution
from hcglauber.paths import (
    MoveSequence,
    PathFamily,
    build_canonical_path,
    check_transition_bounds,
    congestion,
    mixing_upper_bound_from_congestion,
    theoretical_congestion_bound,
    timing_violations,
    validate_move_sequence,
)

P3 = Graph(3, [(0, 1), (1, 2)])


def families(G):
    return [PathFamily(G, build_separator_tree(G)), PathFamily(G, path_decomposition_from_order(G))]


def test_all_pairs(suite_graph):
    _, G = suite_graph
    space = StateSpace(G)
    sets = [space.set_at(i) for i in range(len(space))]
    for fam in families(G):
        for I in sets:
            for J in sets:
                seq = build_canonical_path(fam, I, J)
                assert seq.end() == J
                assert len(seq) <= 2 * G.n
                assert len(seq) == len(I) + len(J)
                if fam.kind == "pathdecomp":
                    assert timing_violations(fam, seq, I, J) == []


def test_septree_order_on_path():
    # root bag {1}; leaves {0} and {2}
    T = SeparatorTree(children=((1, 2), (), ()), bags=((1,), (0,), (2,)), n=3)
    fam = PathFamily(P3, T)
    seq = fam.build((1,), (0, 2))
    assert seq.text() == "-1 +0 +2"
    seq = fam.build((0, 2), (1,))
    assert seq.text() == "-0 -2 +1"


def test_pathdecomp_batches():
    fam = PathFamily(P3, PathDecomposition(((0, 1), (1, 2)), 3))
    seq = fam.build((0, 2), (1,))
    assert seq.text() == "-0 -2 +1"
    assert seq.origin == (0, 1, 2)
    assert fam.removal_step(2) == 1 and fam.addition_step(1) == 2


def test_invalid_inputs():
    with pytest.raises(InvalidInput):
        PathFamily(P3, PathDecomposition(((0, 1),), 3))
    fam = families(P3)[0]
    with pytest.raises(InvalidInput):
        fam.build((0, 1), ())


def test_validator_catches_bad_sequences():
    rep = validate_move_sequence(P3, MoveSequence((0,), ((1, 1),)), (0, 1))
    assert not rep.valid
    rep = validate_move_sequence(P3, MoveSequence((), ((0, 1),)), (2,))
    assert not rep.valid
    rep = validate_move_sequence(P3, MoveSequence((), ((0, -1),)), ())
    assert not rep.valid


def test_congestion_within_closed_forms(suite_graph):
    _, G = suite_graph
    for lam in (Fraction(1, 2), Fraction(2)):
        pi_min = stationary_distribution(G, lam).min()
        tau = exact_mixing_time(G, lam).tau
        for fam in families(G):
            tab = congestion(G, lam, fam)
            assert tab.rho_max <= theoretical_congestion_bound(G, lam, fam).bound
            assert tau <= mixing_upper_bound_from_congestion(tab.rho_max, pi_min)


def test_septree_transition_bounds(suite_graph):
    _, G = suite_graph
    fam = PathFamily(G, build_separator_tree(G))
    for lam in (Fraction(1, 2), Fraction(1), Fraction(2)):
        assert check_transition_bounds(G, lam, fam, congestion(G, lam, fam)) == []


def test_congestion_csv():
    fam = families(P3)[1]
    tab = congestion(P3, 1, fam)
    lines = tab.to_csv({"paths": tab.paths}).splitlines()
    assert lines[0] == "from_index,to_index,move,rho_num,rho_den,rho_double"
    assert lines[-2].startswith("# rho_max,")
    assert lines[-1].startswith("# paths,,,25,1,")


@pytest.mark.xfail(strict=True, reason="per-transition path-decomposition bound fails on this instance")
def test_pathdecomp_transition_bound_counterexample():
    fam = PathFamily(P3, PathDecomposition(((0, 1), (1, 2), ()), 3))
    tab = congestion(P3, 2, fam)
    bad = check_transition_bounds(P3, 2, fam, tab)
    assert bad == []


def test_pathdecomp_counterexample_is_frozen():
    fam = PathFamily(P3, PathDecomposition(((0, 1), (1, 2), ()), 3))
    tab = congestion(P3, 2, fam)
    bad = check_transition_bounds(P3, 2, fam, tab)
    [(i, j, r, b)] = bad
    assert (tab.space.set_at(i), tab.space.set_at(j)) == ((0,), (0, 2))
    assert (r, b) == (Fraction(324, 11), 27)
    assert tab.rho_max == Fraction(873, 11)


def test_mixing_bound_helper():
    assert mixing_upper_bound_from_congestion(2, Fraction(1, 4)) == pytest.approx(2 * math.log(16))
    with pytest.raises(InvalidInput):
        mixing_upper_bound_from_congestion(1, 0)
