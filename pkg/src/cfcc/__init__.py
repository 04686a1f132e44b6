"""Group current-flow closeness: exact and sketch-based greedy maximization.

The closeness of a vertex group ``S`` in a connected weighted graph is
``C(S) = n / tr(L_{-S}^{-1})``. :func:`exact_greedy` maximizes it with dense
rank-one updates; :func:`approx_greedy` uses random projections and sparse
Laplacian solves to scale to large sparse graphs.
"""

from .centrality import ClosenessValue, group_closeness, group_closeness_exact
from .errors import (
    CfccError,
    DenseCapError,
    EdgeListError,
    EnumerationCapError,
    NumericalDegeneracyError,
    PreconditionError,
    SolverError,
)
from .graph import Graph, VertexMap, largest_connected_component, parse_edge_list, read_edge_list
from .greedy_approx import approx_greedy
from .greedy_exact import Selection, exact_greedy
from .sketch import SketchConfig

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "VertexMap",
    "parse_edge_list",
    "read_edge_list",
    "largest_connected_component",
    "ClosenessValue",
    "group_closeness",
    "group_closeness_exact",
    "Selection",
    "exact_greedy",
    "approx_greedy",
    "SketchConfig",
    "CfccError",
    "PreconditionError",
    "DenseCapError",
    "EnumerationCapError",
    "EdgeListError",
    "SolverError",
    "NumericalDegeneracyError",
]
