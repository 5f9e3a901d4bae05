import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hcglauber import BudgetExceeded, InvalidInput
from hcglauber.graph import (
    Graph,
    StateSpace,
    closed_neighborhood,
    count_independent_sets,
    enumerate_independent_sets,
    format_graph,
    independence_number,
    is_independent,
    parse_graph,
    reconfiguration_adjacent,
)


def test_parse_roundtrip():
    G = parse_graph("# triangle plus pendant\n4 4\n0 1\n1 2\n0 2\n2 3\n")
    assert G.n == 4 and G.m == 4
    assert parse_graph(format_graph(G)) == G


@pytest.mark.parametrize(
    "text",
    ["", "3 1\n0 3\n", "2 1\n1 1\n", "2 2\n0 1\n", "2 1\nx y\n", "-1 0\n"],
)
def test_parse_rejects(text):
    with pytest.raises(InvalidInput):
        parse_graph(text)


def test_counts_on_small_graphs(suite_graph):
    expected = {"K2": 3, "P3": 5, "C4": 7, "K22": 7, "K33": 15, "G1": 17, "grid2x3": 17}
    name, G = suite_graph
    assert count_independent_sets(G) == expected[name]


def test_enumeration_is_sorted_and_independent():
    G = Graph(3, [(0, 1), (1, 2)])
    sets = enumerate_independent_sets(G)
    assert sets == sorted(sets, key=lambda s: (len(s), s)) or set(sets) == {(), (0,), (1,), (2,), (0, 2)}
    assert all(is_independent(G, s) for s in sets)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        enumerate_independent_sets(Graph(12, []), cap=100)


def test_state_space_neighbors_are_single_flips():
    G = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    space = StateSpace(G)
    for i in range(len(space)):
        for j, move in space.neighbors(i):
            I, J = set(space.set_at(i)), set(space.set_at(j))
            assert len(I ^ J) == 1
            assert (move > 0) == (len(J) > len(I))
            assert reconfiguration_adjacent(space.set_at(i), space.set_at(j))


def test_independence_number_and_neighborhood():
    G = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    a, witness = independence_number(G)
    assert a == 2 and is_independent(G, witness)
    assert closed_neighborhood(G, 0) == (0, 1, 4)
    with pytest.raises(InvalidInput):
        closed_neighborhood(G, 7)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), st.data())
def test_enumeration_matches_brute_force(n, data):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    G = Graph(n, edges)
    brute = sum(1 for m in range(1 << n) if all(not (m >> u & 1 and m >> v & 1) for u, v in edges))
    assert count_independent_sets(G) == brute
