"""Weighted undirected graphs: construction, edge-list I/O and components.

All algorithms in the package speak dense internal vertex ids ``0..n-1``.
External labels (integers or arbitrary strings read from a file) live in a
:class:`VertexMap` next to the graph.
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse import csgraph

from .errors import EdgeListError, PreconditionError

__all__ = [
    "Graph",
    "VertexMap",
    "Diagnostics",
    "EdgeListWarning",
    "parse_edge_list",
    "read_edge_list",
    "serialize",
    "largest_connected_component",
    "validate",
]


class EdgeListWarning(UserWarning):
    """Recoverable oddities in edge-list input (self-loops)."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable weighted undirected simple graph.

    Edges are stored once each as ``(heads[i], tails[i], weights[i])`` with
    ``heads[i] < tails[i]``, sorted lexicographically. Use
    :meth:`from_edges` to build one; it merges parallel edges by summing
    their weights and drops self-loops.
    """

    n: int
    heads: np.ndarray
    tails: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for arr in (self.heads, self.tails, self.weights):
            arr.setflags(write=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], *, merge: bool = True) -> "Graph":
        """Build a graph on ``n`` vertices from ``(u, v)`` or ``(u, v, w)`` tuples."""
        us, vs, ws = [], [], []
        for e in edges:
            us.append(e[0])
            vs.append(e[1])
            ws.append(e[2] if len(e) > 2 else 1.0)
        return cls.from_arrays(n, np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64),
                               np.asarray(ws, dtype=np.float64), merge=merge)

    @classmethod
    def from_arrays(cls, n, u, v, w=None, *, merge: bool = True) -> "Graph":
        u = np.asarray(u, dtype=np.int64).ravel()
        v = np.asarray(v, dtype=np.int64).ravel()
        w = np.ones(len(u)) if w is None else np.asarray(w, dtype=np.float64).ravel()
        if not (len(u) == len(v) == len(w)):
            raise PreconditionError("edge arrays must have equal length")
        if n < 0:
            raise PreconditionError("vertex count must be nonnegative")
        if len(u) and (min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n):
            raise PreconditionError(f"edge endpoint outside 0..{n - 1}")
        if len(w) and not (np.all(np.isfinite(w)) and np.all(w > 0)):
            raise PreconditionError("edge weights must be finite and strictly positive")
        keep = u != v
        u, v, w = u[keep], v[keep], w[keep]
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        key = lo * max(n, 1) + hi
        order = np.argsort(key, kind="stable")
        key, lo, hi, w = key[order], lo[order], hi[order], w[order]
        if len(key):
            first = np.ones(len(key), dtype=bool)
            first[1:] = key[1:] != key[:-1]
            if not first.all():
                if not merge:
                    raise PreconditionError("duplicate undirected edge")
                starts = np.flatnonzero(first)
                w = np.add.reduceat(w, starts)
                lo, hi = lo[starts], hi[starts]
        return cls(int(n), lo.copy(), hi.copy(), w.copy())

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.heads.tolist(), self.tails.tolist(), self.weights.tolist()))

    @property
    def w_min(self) -> float:
        return float(self.weights.min()) if self.m else float("nan")

    @property
    def w_max(self) -> float:
        return float(self.weights.max()) if self.m else float("nan")

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric weighted adjacency matrix in CSR form."""
        a = sp.coo_matrix(
            (np.concatenate([self.weights, self.weights]),
             (np.concatenate([self.heads, self.tails]), np.concatenate([self.tails, self.heads]))),
            shape=(self.n, self.n),
        ).tocsr()
        a.sort_indices()
        return a

    @cached_property
    def degrees(self) -> np.ndarray:
        """Weighted degrees."""
        d = np.zeros(self.n)
        np.add.at(d, self.heads, self.weights)
        np.add.at(d, self.tails, self.weights)
        return d

    @cached_property
    def edge_counts(self) -> np.ndarray:
        """Unweighted degrees (number of incident edges)."""
        return np.bincount(np.concatenate([self.heads, self.tails]), minlength=self.n)

    def neighbors(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """Neighbor ids and the matching edge weights of vertex ``u``."""
        a = self.adjacency
        sl = slice(a.indptr[u], a.indptr[u + 1])
        return a.indices[sl], a.data[sl]

    def is_connected(self) -> bool:
        if self.n == 0:
            return False
        ncomp, _ = csgraph.connected_components(self.adjacency, directed=False)
        return ncomp == 1

    def subgraph(self, vertices: Sequence[int]) -> "Graph":
        """Induced subgraph; vertex ``vertices[i]`` becomes ``i``."""
        vertices = np.asarray(vertices, dtype=np.int64)
        relabel = np.full(self.n, -1, dtype=np.int64)
        relabel[vertices] = np.arange(len(vertices))
        hu, hv = relabel[self.heads], relabel[self.tails]
        keep = (hu >= 0) & (hv >= 0)
        return Graph.from_arrays(len(vertices), hu[keep], hv[keep], self.weights[keep])

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.heads, other.heads)
                and np.array_equal(self.tails, other.tails)
                and np.array_equal(self.weights, other.weights))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class VertexMap:
    """Bijection between internal ids and external labels."""

    labels: tuple
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lookup = {lab: i for i, lab in enumerate(self.labels)}
        if len(lookup) != len(self.labels):
            raise PreconditionError("vertex labels must be unique")
        object.__setattr__(self, "_lookup", lookup)

    @classmethod
    def identity(cls, n: int) -> "VertexMap":
        return cls(tuple(range(n)))

    def __len__(self):
        return len(self.labels)

    def to_external(self, u: int) -> Hashable:
        return self.labels[u]

    def to_internal(self, label) -> int:
        if label in self._lookup:
            return self._lookup[label]
        # labels typed on a command line arrive as strings
        if isinstance(label, str):
            try:
                as_int = int(label)
            except ValueError:
                as_int = None
            if as_int is not None and as_int in self._lookup:
                return self._lookup[as_int]
        raise KeyError(label)

    def compose(self, inner: "VertexMap") -> "VertexMap":
        """Map through ``inner`` first: ids of a subgraph whose labels are ids of ``self``."""
        return VertexMap(tuple(self.labels[i] for i in inner.labels))


def _label(token: str):
    try:
        return int(token)
    except ValueError:
        return token


def _label_key(label):
    return (0, label, "") if isinstance(label, int) else (1, 0, label)


def parse_edge_list(source, default_weight: float = 1.0) -> tuple[Graph, VertexMap]:
    """Parse ``u v [w]`` lines into a graph.

    ``source`` may be ``str``, ``bytes`` or a readable text/binary stream.
    Lines starting with ``#`` or ``%`` and blank lines are skipped. Labels are
    remapped densely in sorted order (integers numerically, before strings).
    Parallel edges merge by summing weights; self-loops are dropped with an
    :class:`EdgeListWarning` carrying the count.
    """
    if isinstance(source, bytes):
        source = source.decode()
    if isinstance(source, str):
        source = io.StringIO(source)
    us, vs, ws = [], [], []
    seen = set()
    loops = 0
    for lineno, raw in enumerate(source, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode()
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if len(tokens) not in (2, 3):
            raise EdgeListError(lineno, f"expected 'u v [w]', got {len(tokens)} fields")
        a, b = _label(tokens[0]), _label(tokens[1])
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise EdgeListError(lineno, f"non-numeric weight {tokens[2]!r}") from None
            if not np.isfinite(w):
                raise EdgeListError(lineno, f"non-finite weight {tokens[2]!r}")
            if w <= 0:
                raise EdgeListError(lineno, f"non-positive weight {w!r}")
        else:
            w = float(default_weight)
        seen.add(a)
        seen.add(b)
        if a == b:
            loops += 1
            continue
        us.append(a)
        vs.append(b)
        ws.append(w)
    if loops:
        warnings.warn(f"dropped {loops} self-loop(s)", EdgeListWarning, stacklevel=2)
    labels = tuple(sorted(seen, key=_label_key))
    vmap = VertexMap(labels)
    lk = vmap._lookup
    g = Graph.from_arrays(len(labels), [lk[a] for a in us], [lk[b] for b in vs], ws)
    return g, vmap


def read_edge_list(path, default_weight: float = 1.0) -> tuple[Graph, VertexMap]:
    with open(path, "rb") as fh:
        return parse_edge_list(fh, default_weight)


def serialize(g: Graph, vmap: VertexMap | None = None) -> str:
    """Canonical edge-list text: edges sorted by (min, max) endpoint, weights via ``repr``.

    With a vertex map, labels are written instead of ids and edges are
    ordered by label. Isolated vertices are not representable.
    """
    rows = []
    for u, v, w in g.edges:
        a, b = (u, v) if vmap is None else (vmap.to_external(u), vmap.to_external(v))
        if vmap is not None and _label_key(b) < _label_key(a):
            a, b = b, a
        rows.append((a, b, w))
    if vmap is not None:
        rows.sort(key=lambda r: (_label_key(r[0]), _label_key(r[1])))
    return "".join(f"{a} {b} {w!r}\n" for a, b, w in rows)


def _iter_components(g: Graph) -> Iterator[np.ndarray]:
    _, comp = csgraph.connected_components(g.adjacency, directed=False)
    order = np.argsort(comp, kind="stable")
    bounds = np.flatnonzero(np.diff(comp[order])) + 1
    yield from np.split(order, bounds)


def largest_connected_component(g: Graph) -> tuple[Graph, VertexMap]:
    """Induced subgraph on the largest component.

    Ties go to the component containing the smallest vertex id. The returned
    map sends new ids to ids of ``g``; compose it with the parser's map to
    recover external labels.
    """
    if g.n == 0:
        raise PreconditionError("graph is empty")
    best = max(_iter_components(g), key=lambda c: (len(c), -c.min()))
    best = np.sort(best)
    return g.subgraph(best), VertexMap(tuple(best.tolist()))


@dataclass(frozen=True)
class Diagnostics:
    connected: bool
    n: int
    m: int
    components: int
    w_min: float
    w_max: float
    min_degree: int
    max_degree: int


def validate(g: Graph) -> Diagnostics:
    ncomp = csgraph.connected_components(g.adjacency, directed=False)[0] if g.n else 0
    counts = g.edge_counts
    return Diagnostics(
        connected=ncomp == 1,
        n=g.n,
        m=g.m,
        components=int(ncomp),
        w_min=g.w_min,
        w_max=g.w_max,
        min_degree=int(counts.min()) if g.n else 0,
        max_degree=int(counts.max()) if g.n else 0,
    )
