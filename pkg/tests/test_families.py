from fractions import Fraction

import pytest

from hcglauber import InvalidInput
from hcglauber.families import (
    FamilySpec,
    blowup_doubling,
    count_deficient_is,
    deficiency_bijection_count,
    doubling_tree,
    format_geometric,
    generate,
    geometric_graph,
    gk_canonical_mis,
    gk_size_polynomial,
    lattice,
    lift_to_blowup,
    parse_geometric,
    random_balls,
    tk_boundary_profile,
)
from hcglauber.graph import count_independent_sets, independence_number, is_independent


@pytest.mark.parametrize(
    "spec,n,m",
    [
        (FamilySpec("complete_bipartite", t=3), 6, 9),
        (FamilySpec("blowup_bipartite", p=2, t=2), 8, 4 + 16),
        (FamilySpec("doubling_tree", k=1), 6, None),
        (FamilySpec("grid", L=3, d=2), 9, 12),
        (FamilySpec("torus", L=4, d=2), 16, 32),
    ],
)
def test_generate_sizes(spec, n, m):
    G = generate(spec).graph
    assert G.n == n == spec.vertex_count()
    if m is not None:
        assert G.m == m


def test_bad_spec():
    with pytest.raises(InvalidInput):
        FamilySpec("petersen")
    with pytest.raises(InvalidInput):
        FamilySpec("grid", L=1)


def test_doubling_tree_g1():
    G, _ = doubling_tree(1)
    assert G.n == 6 and count_independent_sets(G) == 17
    I, J = gk_canonical_mis(1)
    assert len(I) == len(J) == independence_number(G)[0] == 3
    assert is_independent(G, I) and is_independent(G, J)


@pytest.mark.parametrize("k", [0, 1, 2])
def test_two_maximum_sets_by_enumeration(k):
    G, _ = doubling_tree(k)
    from hcglauber.graph import enumerate_independent_sets

    sets = enumerate_independent_sets(G)
    a = max(map(len, sets))
    assert set(s for s in sets if len(s) == a) == set(gk_canonical_mis(k))


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_size_polynomial_top_coefficient(k):
    poly = gk_size_polynomial(k)
    assert poly[-1] == 2
    assert len(poly) - 1 == len(gk_canonical_mis(k)[0])


@pytest.mark.parametrize(
    "k,counts",
    [(1, (2, 8, 6, 1)), (2, (2, 28, 124, 212)), (3, (2, 68, 936, 6872))],
)
def test_deficient_counts(k, counts):
    for d, c in enumerate(counts):
        assert count_deficient_is(k, d)[0] == c
        assert deficiency_bijection_count(k, d) == c
    for d, c in enumerate(counts[:3]):
        if k <= 2:
            assert count_deficient_is(k, d, method="enumerate")[0] == c


def test_boundary_profile():
    assert tk_boundary_profile(2) == ([1, 1, 1, 1, 1, 1, 0], 1)


def test_blowup_projection_and_lift():
    H, _, proj = blowup_doubling(1, 1)
    assert H.n == 6 * 4
    I, _ = gk_canonical_mis(1)
    lifted = lift_to_blowup(I, 1, 1)
    assert is_independent(H, lifted)
    assert sorted(proj[v] for v in lifted) == sorted(I)


def test_lattice_wrap_degree():
    G = lattice(5, 2, wrap=True)
    assert all(G.degree(v) == 4 for v in range(G.n))
    P = lattice(2, 1, wrap=True)
    assert P.m == 1  # a 2-cycle collapses to one edge


def test_geometric_roundtrip_exact():
    text = "2 3\n0 0 1\n3/2 0 1\n10 10 1/2\n"
    inst = parse_geometric(text)
    assert inst.exact and inst.centers[1][0] == Fraction(3, 2)
    G = geometric_graph(inst)
    assert G.edges == [(0, 1)]
    assert geometric_graph(parse_geometric(format_geometric(inst))) == G


def test_random_balls_seeded():
    a = random_balls(20, 2, 1.0, 10.0, seed=3)
    b = random_balls(20, 2, 1.0, 10.0, seed=3)
    assert a == b and a.n == 20
