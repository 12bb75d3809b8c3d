"""Shared hypothesis strategies for small graphs, weights and hypergraphs."""
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from src.graphs import BipartiteGraph
from src.hungarian import WeightedBipartiteGraph
from src.hypergraph import Hypergraph

PROPERTY_SETTINGS = settings(
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


@st.composite
def bipartite_graphs(draw, max_side: int = 6, min_side1: int = 1) -> BipartiteGraph:
    n1 = draw(st.integers(min_value=min_side1, max_value=max_side))
    n2 = draw(st.integers(min_value=0, max_value=max_side))
    slots = [(u, n1 + v) for u in range(n1) for v in range(n2)]
    edges = draw(st.lists(st.sampled_from(slots), unique=True)) if slots else []
    return BipartiteGraph.from_edges(n1, n2, edges)


@st.composite
def weight_matrices(draw, max_n: int = 6, low: int = -20, high: int = 20) -> WeightedBipartiteGraph:
    n = draw(st.integers(min_value=1, max_value=max_n))
    rows = draw(st.lists(
        st.lists(st.integers(min_value=low, max_value=high), min_size=n, max_size=n),
        min_size=n, max_size=n,
    ))
    return WeightedBipartiteGraph(rows)


@st.composite
def hypergraphs(draw, max_vertices: int = 4, max_edges: int = 4) -> Hypergraph:
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    vertex_sets = st.sets(st.integers(min_value=0, max_value=n - 1), min_size=1, max_size=n)
    edges = draw(st.lists(vertex_sets, max_size=max_edges))
    return Hypergraph.from_edges(n, [sorted(e) for e in edges])
