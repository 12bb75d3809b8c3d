import logging
from dataclasses import dataclass
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.lib.errors import InputError

logger = logging.getLogger(__name__)

# stands for bottom in assignment and trace files
RESERVED_LABEL = "_"


def _check_label(label: str) -> str:
    label = str(label)
    if not label or any(ch.isspace() for ch in label):
        raise InputError(f"vertex label {label!r} must be non-empty and contain no whitespace")
    if label == RESERVED_LABEL:
        raise InputError(f"vertex label {RESERVED_LABEL!r} is reserved")
    return label


class Graph:
    """Finite simple undirected graph on vertices 0..n-1.

    The dense boolean adjacency matrix is the source of truth; neighbour
    tuples and bitmasks are derived caches. Instances are immutable.
    """

    def __init__(self, adjacency, labels: Optional[Sequence[str]] = None):
        adj = np.array(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InputError(f"adjacency must be a square matrix, got shape {adj.shape}")
        if adj.shape[0] and adj.diagonal().any():
            loop = int(np.flatnonzero(adj.diagonal())[0])
            raise InputError(f"self-loop at vertex {loop + 1}")
        if not np.array_equal(adj, adj.T):
            raise InputError("adjacency matrix is not symmetric")
        adj.setflags(write=False)
        self._adj = adj

        n = adj.shape[0]
        if labels is None:
            labels = [str(i + 1) for i in range(n)]
        labels = tuple(_check_label(label) for label in labels)
        if len(labels) != n:
            raise InputError(f"expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise InputError("vertex labels must be unique")
        self._labels = labels
        self._index = {label: i for i, label in enumerate(labels)}

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]],
                   labels: Optional[Sequence[str]] = None) -> "Graph":
        if n < 0:
            raise InputError(f"vertex count must be nonnegative, got {n}")
        adj = np.zeros((n, n), dtype=bool)
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u + 1}, {v + 1}) out of range 1..{n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u + 1}")
            if adj[u, v]:
                raise InputError(f"duplicate edge ({u + 1}, {v + 1})")
            adj[u, v] = adj[v, u] = True
        return cls(adj, labels)

    @property
    def vertex_count(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def labels(self) -> Tuple[str, ...]:
        return self._labels

    def label(self, v: int) -> str:
        return self._labels[v]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown vertex label {label!r}") from None

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u, v])

    @cached_property
    def _neighbor_lists(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in np.flatnonzero(row)) for row in self._adj)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._neighbor_lists[v]

    @cached_property
    def neighbor_masks(self) -> Tuple[int, ...]:
        # bit i set in masks[v] iff v ~ i; used by the exhaustive searches
        return tuple(sum(1 << u for u in nbrs) for nbrs in self._neighbor_lists)

    def degree(self, v: int) -> int:
        return len(self._neighbor_lists[v])

    def edges(self) -> List[Tuple[int, int]]:
        us, vs = np.nonzero(np.triu(self._adj))
        return sorted((int(u), int(v)) for u, v in zip(us, vs))

    @property
    def edge_count(self) -> int:
        return int(self._adj.sum()) // 2

    def with_labels(self, labels: Sequence[str]) -> "Graph":
        return Graph(self._adj, labels)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._labels == other._labels and np.array_equal(self._adj, other._adj)

    def __hash__(self) -> int:
        return hash((self._labels, self._adj.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


class BipartiteGraph:
    """A graph together with a bipartition (side1, side2) of its vertices."""

    def __init__(self, graph: Graph, side1: Iterable[int], side2: Iterable[int]):
        side1 = frozenset(int(v) for v in side1)
        side2 = frozenset(int(v) for v in side2)
        n = graph.vertex_count
        if side1 & side2:
            raise InputError("side1 and side2 overlap")
        if side1 | side2 != frozenset(range(n)):
            raise InputError("side1 and side2 do not cover the vertex set")
        for u, v in graph.edges():
            if (u in side1) == (v in side1):
                raise InputError(
                    f"edge {graph.label(u)}-{graph.label(v)} lies within one side"
                )
        self.graph = graph
        self.side1 = side1
        self.side2 = side2

    @classmethod
    def from_edges(cls, n1: int, n2: int, edges: Iterable[Tuple[int, int]],
                   labels: Optional[Sequence[str]] = None) -> "BipartiteGraph":
        """Build with V1 = 0..n1-1 and V2 = n1..n1+n2-1 (0-based indices)."""
        if n1 < 0 or n2 < 0:
            raise InputError("side sizes must be nonnegative")
        graph = Graph.from_edges(n1 + n2, edges, labels)
        return cls(graph, range(n1), range(n1, n1 + n2))

    @property
    def n1(self) -> int:
        return len(self.side1)

    @property
    def n2(self) -> int:
        return len(self.side2)

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    def side1_sorted(self) -> List[int]:
        return sorted(self.side1)

    def side2_sorted(self) -> List[int]:
        return sorted(self.side2)

    def edges(self) -> List[Tuple[int, int]]:
        """Edges oriented (side1 vertex, side2 vertex)."""
        return sorted((u, v) if u in self.side1 else (v, u) for u, v in self.graph.edges())

    def label(self, v: int) -> str:
        return self.graph.label(v)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.graph == other.graph and self.side1 == other.side1
                and self.side2 == other.side2)

    def __hash__(self) -> int:
        return hash((self.graph, self.side1, self.side2))

    def __repr__(self) -> str:
        return f"BipartiteGraph(n1={self.n1}, n2={self.n2}, m={self.graph.edge_count})"


GraphLike = Union[Graph, BipartiteGraph]


def _as_graph(g: GraphLike) -> Graph:
    return g.graph if isinstance(g, BipartiteGraph) else g


@dataclass(frozen=True)
class Path:
    """An ordered sequence of distinct vertices; the empty path has length -1."""
    vertices: Tuple[int, ...] = ()

    @property
    def length(self) -> int:
        return path_length(self.vertices)

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(self.vertices)

    @property
    def end(self) -> Optional[int]:
        return self.vertices[-1] if self.vertices else None

    def extended(self, *vertices: int) -> "Path":
        return Path(self.vertices + tuple(vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def path_length(seq: Sequence[int]) -> int:
    return len(seq) - 1


def neighborhood(g: GraphLike, s: Iterable[int]) -> FrozenSet[int]:
    """N_G(S): vertices outside S adjacent to some vertex of S."""
    g = _as_graph(g)
    s = sorted(set(int(v) for v in s))
    n = g.vertex_count
    for v in s:
        if not 0 <= v < n:
            raise InputError(f"vertex index {v} out of range 0..{n - 1}")
    if not s:
        return frozenset()
    mask = g.adjacency[s].any(axis=0)
    mask[s] = False
    return frozenset(int(v) for v in np.flatnonzero(mask))


def is_path(g: GraphLike, seq: Sequence[int]) -> bool:
    g = _as_graph(g)
    n = g.vertex_count
    for v in seq:
        if not 0 <= v < n:
            logger.warning("is_path: vertex index %s out of range 0..%d", v, n - 1)
            return False
    if len(set(seq)) != len(seq):
        return False
    return all(g.has_edge(a, b) for a, b in zip(seq, seq[1:]))


def induced_edges(g: GraphLike, s: Iterable[int]) -> FrozenSet[Tuple[int, int]]:
    """Edge set of the induced subgraph G[S], as sorted pairs."""
    g = _as_graph(g)
    s = sorted(set(s))
    return frozenset(
        (u, v) for i, u in enumerate(s) for v in s[i + 1:] if g.has_edge(u, v)
    )
