"""Seeded graph families used by tests, benchmarks and the acceptance suite."""

from __future__ import annotations

from functools import lru_cache

import networkx as nx
import numpy as np

from .errors import PreconditionError
from .graph import Graph, largest_connected_component

__all__ = [
    "from_networkx",
    "path",
    "cycle",
    "complete",
    "complete_bipartite",
    "petersen",
    "circulant",
    "random_connected",
    "random_corpus",
    "cubic_graphs",
    "cubic_corpus",
    "random_geometric",
    "sparse_random",
]


def from_networkx(G: nx.Graph, weight: str = "weight") -> Graph:
    """Convert a networkx graph whose nodes are ``0..n-1``."""
    n = G.number_of_nodes()
    if set(G.nodes) != set(range(n)):
        G = nx.convert_node_labels_to_integers(G, ordering="sorted")
    if G.number_of_edges() == 0:
        return Graph.from_arrays(n, [], [], [])
    u, v, w = zip(*((a, b, d.get(weight, 1.0)) for a, b, d in G.edges(data=True)))
    return Graph.from_arrays(n, u, v, w)


def path(n: int) -> Graph:
    return Graph.from_arrays(n, np.arange(n - 1), np.arange(1, n))


def cycle(n: int) -> Graph:
    idx = np.arange(n)
    return Graph.from_arrays(n, idx, (idx + 1) % n)


def complete(n: int) -> Graph:
    u, v = np.triu_indices(n, 1)
    return Graph.from_arrays(n, u, v)


def complete_bipartite(a: int, b: int) -> Graph:
    """Sides ``0..a-1`` and ``a..a+b-1``."""
    u, v = np.meshgrid(np.arange(a), np.arange(a, a + b), indexing="ij")
    return Graph.from_arrays(a + b, u.ravel(), v.ravel())


def petersen() -> Graph:
    return from_networkx(nx.petersen_graph())


def circulant(n: int, offsets) -> Graph:
    """Unit-weight circulant graph; an offset of ``n/2`` contributes each edge once."""
    idx = np.arange(n)
    pairs = np.concatenate([np.sort(np.stack([idx, (idx + o) % n], axis=1), axis=1) for o in offsets])
    pairs = np.unique(pairs[pairs[:, 0] != pairs[:, 1]], axis=0)
    return Graph.from_arrays(n, pairs[:, 0], pairs[:, 1])


def random_connected(n: int, p: float, rng=None, *, weighted: bool = False,
                     max_tries: int = 1000) -> Graph:
    """Erdos-Renyi ``G(n, p)`` redrawn until connected.

    With ``weighted`` the edge weights are uniform on ``[0.5, 2]``.
    """
    rng = np.random.default_rng(rng)
    iu, iv = np.triu_indices(n, 1)
    for _ in range(max_tries):
        keep = rng.random(len(iu)) < p
        w = rng.uniform(0.5, 2.0, keep.sum()) if weighted else None
        g = Graph.from_arrays(n, iu[keep], iv[keep], w)
        if g.is_connected():
            return g
    raise PreconditionError(f"no connected G({n}, {p}) in {max_tries} draws")


def random_corpus(count: int = 200, seed: int = 0, n_range=(5, 12)) -> list[Graph]:
    """Connected random graphs with ``n`` uniform in ``n_range`` and mixed density.

    Every third graph carries random weights.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = float(rng.uniform(0.25, 0.7))
        out.append(random_connected(n, p, rng, weighted=(i % 3 == 2)))
    return out


def cubic_graphs(n: int, *, seed: int = 0, draws: int = 4000) -> list[Graph]:
    """Connected 3-regular graphs on ``n`` vertices, one per isomorphism class.

    Classes are collected from random regular draws, which for ``n <= 10``
    reaches every class (1, 2, 5 and 19 graphs for ``n`` = 4, 6, 8, 10).
    """
    if n < 4 or n % 2:
        raise PreconditionError("3-regular graphs need even n >= 4")
    return list(_cubic_classes(n, seed, draws))


@lru_cache(maxsize=None)
def _cubic_classes(n: int, seed: int, draws: int) -> tuple[Graph, ...]:
    rng = np.random.default_rng(seed)
    found: list[nx.Graph] = []
    buckets: dict[tuple, list[nx.Graph]] = {}
    for _ in range(draws):
        G = nx.random_regular_graph(3, n, seed=int(rng.integers(2**31)))
        if not nx.is_connected(G):
            continue
        same = buckets.setdefault(_invariant(G), [])
        if not any(nx.is_isomorphic(G, H) for H in same):
            same.append(G)
            found.append(G)
    found.sort(key=lambda H: sorted(H.edges()))
    return tuple(from_networkx(H) for H in found)


def _invariant(G: nx.Graph) -> tuple:
    """Isomorphism invariant: sorted per-vertex (triangles, distance histogram)."""
    A = nx.to_numpy_array(G, nodelist=sorted(G))
    tri = np.diagonal(A @ A @ A)
    rows = []
    for u, dist in nx.all_pairs_shortest_path_length(G):
        hist = np.bincount(list(dist.values()), minlength=len(G))
        rows.append((int(tri[u]),) + tuple(int(c) for c in hist))
    return tuple(sorted(rows))


def cubic_corpus(max_n: int = 10) -> list[Graph]:
    """Every connected 3-regular graph on at most ``max_n`` vertices, up to isomorphism.

    This includes K4, K_{3,3}, the Petersen graph and the Moebius ladders.
    """
    return [h for n in range(4, max_n + 1, 2) for h in cubic_graphs(n)]


def random_geometric(n0: int, radius: float, seed: int = 0) -> tuple[Graph, np.ndarray]:
    """Largest component of a random geometric graph in the unit square.

    Returns the graph and the retained original node ids.
    """
    G = nx.random_geometric_graph(n0, radius, seed=seed)
    g = from_networkx(G)
    lcc, vmap = largest_connected_component(g)
    return lcc, np.asarray(vmap.labels)


def sparse_random(n: int, m: int, seed: int = 0) -> Graph:
    """Connected sparse graph: a random Hamiltonian path plus uniform random edges.

    Duplicates and self-loops are discarded, so the edge count is at most ``m``
    and very close to it when ``m << n^2``.
    """
    if m < n - 1:
        raise PreconditionError("m must be at least n - 1")
    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    extra = m - (n - 1)
    u = np.concatenate([order[:-1], rng.integers(0, n, extra)])
    v = np.concatenate([order[1:], rng.integers(0, n, extra)])
    a, b = np.minimum(u, v), np.maximum(u, v)
    keep = a != b
    pairs = np.unique(np.stack([a[keep], b[keep]], axis=1), axis=0)
    return Graph.from_arrays(n, pairs[:, 0], pairs[:, 1])
