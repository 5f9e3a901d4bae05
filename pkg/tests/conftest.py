from fractions import Fraction

import pytest

from hcglauber.families import complete_bipartite, doubling_tree
from hcglauber.graph import Graph

LAMBDAS = (Fraction(1, 2), Fraction(1), Fraction(2))


def grid_2x3() -> Graph:
    return Graph(6, [(0, 1), (1, 2), (3, 4), (4, 5), (0, 3), (1, 4), (2, 5)])


def suite_graphs() -> dict[str, Graph]:
    """Small fixed suite; every member has at most 20 independent sets."""
    return {
        "K2": Graph(2, [(0, 1)]),
        "P3": Graph(3, [(0, 1), (1, 2)]),
        "C4": Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)]),
        "K22": complete_bipartite(2),
        "K33": complete_bipartite(3),
        "G1": doubling_tree(1)[0],
        "grid2x3": grid_2x3(),
    }


@pytest.fixture(params=sorted(suite_graphs()))
def suite_graph(request):
    return request.param, suite_graphs()[request.param]
