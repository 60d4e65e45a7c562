"""Penalty matrices D for the generalized lasso.

Edge rows put -1 on the lower node index and +1 on the higher one; trend
filtering rows are unscaled integer difference compositions.
"""
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _components

from .data import load_graph_edges
from .errors import InputError
from .schemas import GraphEdges


def identity_penalty(p: int) -> np.ndarray:
    if p < 1:
        raise InputError(f"identity penalty needs p >= 1, got {p}")
    return np.eye(p)


def diff_1d(p: int) -> np.ndarray:
    if p < 2:
        raise InputError(f"first differences need p >= 2, got {p}")
    D = np.zeros((p - 1, p))
    rows = np.arange(p - 1)
    D[rows, rows] = -1.0
    D[rows, rows + 1] = 1.0
    return D


def difference_operator(p: int, order: int) -> np.ndarray:
    """Compose first differences ``order`` times: an (p - order) x p matrix."""
    if order < 1:
        raise InputError(f"difference order must be >= 1, got {order}")
    if p < order + 1:
        raise InputError(f"order-{order} differences need p >= {order + 1}, got {p}")
    D = diff_1d(p)
    for j in range(1, order):
        D = diff_1d(p - j) @ D
    return D


def trend_filter_penalty(p: int, k: int) -> np.ndarray:
    if k < 1:
        raise InputError(f"trend filtering order must be >= 1, got {k}")
    if p < k + 2:
        raise InputError(f"order-{k} trend filtering needs p >= {k + 2}, got {p}")
    return difference_operator(p, k + 1)


def graph_incidence(g: GraphEdges) -> np.ndarray:
    D = np.zeros((len(g.edges), g.node_count))
    for row, (a, b) in enumerate(g.edges):
        lo, hi = min(a, b), max(a, b)
        D[row, lo] = -1.0
        D[row, hi] = 1.0
    return D


def chain_graph(p: int) -> GraphEdges:
    return GraphEdges(node_count=p, edges=[(i, i + 1) for i in range(p - 1)])


def _adjacency(node_count: int, edges) -> coo_matrix:
    edges = list(edges)
    if not edges:
        return coo_matrix((node_count, node_count))
    a, b = np.asarray(edges, dtype=int).T
    return coo_matrix((np.ones(len(edges)), (a, b)), shape=(node_count, node_count))


def connected_components(g: GraphEdges) -> int:
    count, _ = _components(_adjacency(g.node_count, g.edges), directed=False)
    return int(count)


def fused_groups(g: GraphEdges, beta, tol: float = 1e-8) -> int:
    """Connected components once only fused edges (|b_i - b_j| <= tol) are kept."""
    beta = np.asarray(beta, dtype=float)
    fused = [(a, b) for a, b in g.edges if abs(beta[a] - beta[b]) <= tol]
    count, _ = _components(_adjacency(g.node_count, fused), directed=False)
    return int(count)


def knot_count(beta, k: int, tol: float = 1e-8) -> int:
    beta = np.asarray(beta, dtype=float)
    return int(np.count_nonzero(np.abs(trend_filter_penalty(beta.size, k) @ beta) > tol))


def penalty_from_spec(spec: str, p: int) -> np.ndarray:
    """Build D from ``identity``, ``chain``, ``graph:FILE`` or ``trend:K``."""
    kind, _, arg = spec.partition(":")
    if kind == "identity":
        return identity_penalty(p)
    if kind == "chain":
        return diff_1d(p)
    if kind == "graph":
        g = load_graph_edges(arg, node_count=p)
        return graph_incidence(g)
    if kind == "trend":
        try:
            k = int(arg)
        except ValueError:
            raise InputError(f"trend penalty needs an integer order, got {arg!r}")
        return trend_filter_penalty(p, k)
    raise InputError(f"unknown penalty spec {spec!r}; use identity|chain|graph:FILE|trend:K")
