"""Seeded random instances and exhaustive enumerations of small ones."""
from itertools import combinations, islice
from typing import Iterator, Optional, Sequence

import numpy as np

from src.graphs import BipartiteGraph
from src.hungarian import WeightedBipartiteGraph
from src.hypergraph import Hypergraph

DENSITIES = (0.05, 0.2, 0.5, 0.9)


def random_bipartite(n1: int, n2: int, density: float, rng: np.random.Generator) -> BipartiteGraph:
    block = rng.random((n1, n2)) < density
    us, vs = np.nonzero(block)
    return BipartiteGraph.from_edges(n1, n2, [(int(u), n1 + int(v)) for u, v in zip(us, vs)])


def random_sized_bipartite(rng: np.random.Generator, max_side: int = 60,
                           densities: Sequence[float] = DENSITIES) -> BipartiteGraph:
    """Side sizes uniform in 1..max_side, density drawn from ``densities``."""
    n1 = int(rng.integers(1, max_side + 1))
    n2 = int(rng.integers(1, max_side + 1))
    density = float(densities[int(rng.integers(len(densities)))])
    return random_bipartite(n1, n2, density, rng)


def random_bipartite_batch(count: int, seed: Optional[int], max_side: int = 60) -> Iterator[BipartiteGraph]:
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_sized_bipartite(rng, max_side)


def all_bipartite(max_vertices: int) -> Iterator[BipartiteGraph]:
    """Every bipartite graph with n1 >= 1 and n1 + n2 <= max_vertices (labelled)."""
    for total in range(1, max_vertices + 1):
        for n1 in range(1, total + 1):
            n2 = total - n1
            slots = [(u, n1 + v) for u in range(n1) for v in range(n2)]
            for bits in range(1 << len(slots)):
                yield BipartiteGraph.from_edges(
                    n1, n2, [pair for i, pair in enumerate(slots) if bits >> i & 1]
                )


def random_weights(n: int, rng: np.random.Generator, low: int = -10, high: int = 20) -> WeightedBipartiteGraph:
    return WeightedBipartiteGraph(rng.integers(low, high + 1, size=(n, n)))


def random_hypergraph(n: int, m: int, rng: np.random.Generator, max_size: Optional[int] = None) -> Hypergraph:
    max_size = n if max_size is None else min(max_size, n)
    edges = []
    for _ in range(m):
        size = int(rng.integers(1, max_size + 1))
        edges.append(sorted(int(v) for v in rng.choice(n, size=size, replace=False)))
    return Hypergraph.from_edges(n, edges)


def all_hypergraphs(max_vertices: int, max_edges: int, cap: int = 10_000) -> Iterator[Hypergraph]:
    """Hypergraphs on 1..max_vertices hypervertices with 0..max_edges distinct
    nonempty hyperedges, in a fixed order; at most ``cap`` of them."""

    def generate():
        for n in range(1, max_vertices + 1):
            masks = range(1, 1 << n)
            for m in range(max_edges + 1):
                for chosen in combinations(masks, m):
                    yield Hypergraph.from_edges(n, [[v for v in range(n) if mask >> v & 1] for mask in chosen])

    return islice(generate(), cap)


def relabel_hypergraph(h: Hypergraph, vertex_order: Sequence[int], edge_order: Sequence[int]) -> Hypergraph:
    """Same hypergraph with hypervertex i renamed vertex_order[i] and hyperedges permuted."""
    edges = h.edge_lists()
    return Hypergraph.from_edges(
        h.vertex_count,
        [[vertex_order[v] for v in edges[j]] for j in edge_order],
    )

