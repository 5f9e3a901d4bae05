"""Exact and simulated Glauber dynamics for the hard-core model on small graphs."""

__version__ = "0.1.0"

from .errors import BudgetExceeded, InvalidInput
from .graph import Graph, StateSpace, VertexSet, enumerate_independent_sets, parse_graph
from .hardcore import activation_probability_exact, partition_function, stationary_distribution

__all__ = [
    "__version__",
    "BudgetExceeded",
    "InvalidInput",
    "Graph",
    "StateSpace",
    "VertexSet",
    "enumerate_independent_sets",
    "parse_graph",
    "activation_probability_exact",
    "partition_function",
    "stationary_distribution",
]
