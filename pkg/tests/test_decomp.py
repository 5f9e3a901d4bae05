import pytest

from hcglauber import InvalidInput
from hcglauber.decomp import (
    PathDecomposition,
    SeparatorTree,
    TreeDecomposition,
    brute_force_tree_decomposition,
    build_separator_tree,
    clique_weight,
    decomposition_stats,
    elimination_tree_decomposition,
    format_decomposition,
    parse_decomposition,
    path_decomposition_from_order,
    tree_to_path_decomposition,
    validate_decomposition,
    validate_separator_tree,
)
from hcglauber.families import complete_bipartite, geometric_graph, random_balls
from hcglauber.graph import Graph, count_independent_sets, induced_subgraph


def test_path_decomposition_validates(suite_graph):
    _, G = suite_graph
    D = path_decomposition_from_order(G)
    assert validate_decomposition(G, D).valid
    assert validate_decomposition(G, D.with_empty_last()).valid
    assert validate_decomposition(G, elimination_tree_decomposition(G)).valid


def test_separator_tree_validates(suite_graph):
    _, G = suite_graph
    T = build_separator_tree(G)
    rep = validate_separator_tree(G, T)
    assert rep.valid, rep.violations


def test_invalid_decompositions_are_reported():
    G = Graph(3, [(0, 1), (1, 2)])
    rep = validate_decomposition(G, PathDecomposition(((0, 1), (2,)), 3))
    assert not rep.valid and any("1-2" in v for v in rep.violations)
    # vertex 1 in non-contiguous bags
    rep = validate_decomposition(G, PathDecomposition(((0, 1), (0,), (1, 2)), 3))
    assert not rep.valid


def test_treewidth_of_k33():
    G = complete_bipartite(3)
    T = brute_force_tree_decomposition(G)
    assert validate_decomposition(G, T).valid
    assert decomposition_stats(G, T)["width"] == 3


def test_tree_to_path():
    G = complete_bipartite(3)
    P, info = tree_to_path_decomposition(G, elimination_tree_decomposition(G))
    assert validate_decomposition(G, P).valid
    assert all(v for k, v in info.items() if isinstance(v, bool))


@pytest.mark.parametrize("maker", [path_decomposition_from_order, elimination_tree_decomposition, build_separator_tree])
def test_format_roundtrip(maker):
    G = Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)])
    D = maker(G)
    back = parse_decomposition(format_decomposition(D), G.n)
    assert type(back) is type(D)
    assert format_decomposition(back) == format_decomposition(D)


@pytest.mark.parametrize("text", ["", "path 2\n0 1\n", "tree 1\n0 5\n", "blob 1\n0\n", "path 1\n0 x\n"])
def test_parse_rejects(text):
    with pytest.raises(InvalidInput):
        parse_decomposition(text, 3)


def test_geometric_separator_tree_and_clique_bound():
    inst = random_balls(20, 2, 1.0, 10.0, seed=3)
    G = geometric_graph(inst)
    T = build_separator_tree(G, strategy="geometric", inst=inst)
    assert validate_separator_tree(G, T).valid
    assert len(T.bags) == 13
    for bag, cover in zip(T.bags, T.cliques):
        H, _ = induced_subgraph(G, bag)
        bound = 1
        for c in cover:
            bound *= len(c) + 1
        assert count_independent_sets(H) <= bound
        assert clique_weight(cover) >= 0


def test_geometric_strategy_needs_matching_instance():
    inst = random_balls(8, 2, 1.0, 4.0, seed=1)
    with pytest.raises(InvalidInput):
        build_separator_tree(Graph(9, []), strategy="geometric", inst=inst)
    with pytest.raises(InvalidInput):
        build_separator_tree(geometric_graph(inst), strategy="geometric")


def test_path_as_tree():
    D = PathDecomposition(((0, 1), (1, 2)), 3)
    T = D.as_tree()
    assert isinstance(T, TreeDecomposition) and len(T.bags) == 2
    assert not isinstance(T, SeparatorTree)


def test_tree_to_path_count_bound_needs_plus_one():
    # one-vertex bags: b = k = 1, so b^(...) = 1 while every bag has 2 independent sets
    G = Graph(7, [])
    T = TreeDecomposition(tuple([-1] + list(range(6))), tuple((i,) for i in range(7)), 7)
    _, info = tree_to_path_decomposition(G, T)
    assert info["size_ok"] and info["alpha_ok"] and info["count_corrected_ok"]
    assert not info["count_ok"] and info["max_count"] == 8
