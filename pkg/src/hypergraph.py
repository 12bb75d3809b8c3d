"""Hypergraphs as incidence bipartite graphs, and assignments for their game.

A hypergraph H on hypervertices V and hyperedges E is stored as the bipartite
graph with sides V and E, hypervertices numbered 0..n-1 and hyperedges
n..n+m-1. Paths and cycles are those of the incidence graph; a strong one
induces no incidences besides its consecutive pairs.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from src.graphs import BipartiteGraph, Graph, induced_edges, is_path, path_length
from src.lib.config import HYPER_MAX_NODES_ENV, SEARCH_MAX_ENV, load_bounds
from src.lib.errors import InputError, InvariantViolation, SizeBoundError
from src.lib.verdict import Verdict, Violation

logger = logging.getLogger(__name__)

METHOD_MATCHING = "matching"
METHOD_DUALS = "duals"
METHOD_SEARCH = "search"


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Hypergraph:
    def __init__(self, incidence: BipartiteGraph):
        n = incidence.n1
        if incidence.side1 != frozenset(range(n)):
            raise InputError("hypervertices must be numbered 0..n-1 before the hyperedges")
        self.incidence = incidence
        self.vertex_count = n
        self.edge_count = incidence.n2
        for e in self.hyperedges():
            if not incidence.graph.neighbors(e):
                raise InputError(f"hyperedge {self.label(e)} is empty")

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Iterable[int]],
                   labels: Optional[Sequence[str]] = None) -> "Hypergraph":
        """Hyperedges given as collections of 0-based hypervertex indices.

        Default labels are 1..n for hypervertices and e1..em for hyperedges.
        """
        edges = [sorted(set(members)) for members in edges]
        m = len(edges)
        if labels is None:
            labels = [str(i + 1) for i in range(n)] + [f"e{j + 1}" for j in range(m)]
        pairs = []
        for j, members in enumerate(edges):
            for v in members:
                if not 0 <= v < n:
                    raise InputError(f"hyperedge {j + 1} names hypervertex {v + 1} outside 1..{n}")
                pairs.append((v, n + j))
        return cls(BipartiteGraph.from_edges(n, m, pairs, labels))

    @property
    def graph(self) -> Graph:
        return self.incidence.graph

    @property
    def node_count(self) -> int:
        return self.vertex_count + self.edge_count

    def vertices(self) -> range:
        return range(self.vertex_count)

    def hyperedges(self) -> range:
        return range(self.vertex_count, self.node_count)

    def is_vertex(self, node: int) -> bool:
        return 0 <= node < self.vertex_count

    def is_hyperedge(self, node: int) -> bool:
        return self.vertex_count <= node < self.node_count

    def edge_node(self, j: int) -> int:
        return self.vertex_count + j

    def members(self, e: int) -> Tuple[int, ...]:
        return self.graph.neighbors(e)

    def incident(self, v: int) -> Tuple[int, ...]:
        return self.graph.neighbors(v)

    def edge_lists(self) -> List[Tuple[int, ...]]:
        return [self.members(e) for e in self.hyperedges()]

    def label(self, node: int) -> str:
        return self.graph.label(node)

    def index_of(self, label: str) -> int:
        return self.graph.index_of(label)

    @property
    def member_masks(self) -> List[int]:
        # bit v set iff hypervertex v lies in the hyperedge; vertex bits only
        return [sum(1 << v for v in self.members(e)) for e in self.hyperedges()]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.incidence == other.incidence

    def __hash__(self) -> int:
        return hash(self.incidence)

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.vertex_count}, m={self.edge_count})"


def _check_bound(what: str, size: int, bound: Optional[int], default: int, env_var: str) -> None:
    limit = default if bound is None else bound
    if size > limit:
        raise SizeBoundError(what, size, limit, env_var)


def _consecutive_pairs(seq: Sequence[int]) -> FrozenSet[Tuple[int, int]]:
    return frozenset((min(a, b), max(a, b)) for a, b in zip(seq, seq[1:]))


def is_strong_path(h: Hypergraph, seq: Sequence[int]) -> bool:
    seq = tuple(seq)
    if not is_path(h.graph, seq):
        return False
    return induced_edges(h.graph, seq) == _consecutive_pairs(seq)


def is_strong_cycle(h: Hypergraph, seq: Sequence[int]) -> bool:
    """Closed walk z1 .. zk (z1 = zk) through at least three distinct nodes."""
    seq = tuple(seq)
    if len(seq) < 4 or seq[0] != seq[-1]:
        return False
    ring = seq[:-1]
    if not is_path(h.graph, ring) or not h.graph.has_edge(ring[-1], ring[0]):
        return False
    return induced_edges(h.graph, ring) == _consecutive_pairs(seq)


def iter_strong_cycles(h: Hypergraph) -> Iterator[Tuple[int, ...]]:
    """Each strong cycle once, closed, starting at its smallest node and
    running towards the smaller of that node's two cycle neighbours."""
    masks = h.graph.neighbor_masks

    def extend(path: Tuple[int, ...], used: int, inner: int, higher: int, s: int):
        end = path[-1]
        for x in _bits(masks[end] & higher & ~used):
            if masks[x] & inner:
                continue
            if len(path) > 1 and masks[x] >> s & 1:
                if len(path) > 2 and path[1] < x:
                    yield path + (x, s)
                continue
            grown = inner | (1 << end) if len(path) > 1 else inner
            yield from extend(path + (x,), used | (1 << x), grown, higher, s)

    for s in range(h.node_count):
        higher = ~((1 << (s + 1)) - 1)
        yield from extend((s,), 1 << s, 0, higher, s)


def is_unbalancing_length(length: int) -> bool:
    return length >= 6 and length % 4 == 2


@dataclass(frozen=True)
class BalanceVerdict:
    balanced: bool
    witness: Optional[Tuple[int, ...]] = None

    def __bool__(self) -> bool:
        return self.balanced


def is_balanced_bruteforce(h: Hypergraph, bound: Optional[int] = None) -> BalanceVerdict:
    """Balanced iff no strong cycle has length 6, 10, 14, ...; the witness is the
    shortest such cycle, ties broken lexicographically."""
    _check_bound("is_balanced_bruteforce", h.node_count, bound, load_bounds().hyper_max_nodes,
                 HYPER_MAX_NODES_ENV)
    best = None
    for cycle in iter_strong_cycles(h):
        if not is_unbalancing_length(path_length(cycle)):
            continue
        key = (len(cycle), cycle)
        if best is None or key < best:
            best = key
    if best is None:
        return BalanceVerdict(True)
    logger.debug("is_balanced_bruteforce: witness of length %d", path_length(best[1]))
    return BalanceVerdict(False, best[1])


def is_matching(h: Hypergraph, edges: Iterable[int]) -> bool:
    seen = 0
    for e in edges:
        if not h.is_hyperedge(e):
            return False
        mask = h.member_masks[e - h.vertex_count]
        if seen & mask:
            return False
        seen |= mask
    return True


def is_independent(h: Hypergraph, vertices: Iterable[int]) -> bool:
    """Meets every hyperedge at most once."""
    chosen = set(vertices)
    if not all(h.is_vertex(v) for v in chosen):
        return False
    return all(len(chosen.intersection(h.members(e))) <= 1 for e in h.hyperedges())


def is_transversal(h: Hypergraph, vertices: Iterable[int]) -> bool:
    chosen = set(vertices)
    if not all(h.is_vertex(v) for v in chosen):
        return False
    return all(chosen.intersection(h.members(e)) for e in h.hyperedges())


def covers(h: Hypergraph, edges: Iterable[int], vertices: Iterable[int]) -> bool:
    """Every given hypervertex lies in one of the given hyperedges."""
    covered = set()
    for e in edges:
        covered.update(h.members(e))
    return set(vertices) <= covered


def _max_matching(masks: Sequence[int]) -> Tuple[int, ...]:
    for size in range(len(masks), 0, -1):
        for picks in combinations(range(len(masks)), size):
            seen = 0
            for j in picks:
                if seen & masks[j]:
                    break
                seen |= masks[j]
            else:
                return picks
    return ()


def _min_transversal(masks: Sequence[int], n: int) -> Tuple[int, ...]:
    for size in range(n + 1):
        for picks in combinations(range(n), size):
            chosen = sum(1 << v for v in picks)
            if all(mask & chosen for mask in masks):
                return picks
    raise InvariantViolation("hyperedges are nonempty, so V is a transversal")


def max_matching_bruteforce(h: Hypergraph, bound: Optional[int] = None) -> Tuple[int, ...]:
    """A maximum matching (hyperedge nodes); the lexicographically first of maximum size."""
    _check_bound("max_matching_bruteforce", h.edge_count, bound, load_bounds().hyper_max_nodes,
                 HYPER_MAX_NODES_ENV)
    return tuple(h.edge_node(j) for j in _max_matching(h.member_masks))


def min_transversal_bruteforce(h: Hypergraph, bound: Optional[int] = None) -> Tuple[int, ...]:
    _check_bound("min_transversal_bruteforce", h.vertex_count, bound, load_bounds().hyper_max_nodes,
                 HYPER_MAX_NODES_ENV)
    return _min_transversal(h.member_masks, h.vertex_count)


def find_independent_transversal(h: Hypergraph, bound: Optional[int] = None) -> Optional[FrozenSet[int]]:
    """Smallest U meeting every hyperedge exactly once (size order, then index order)."""
    _check_bound("find_independent_transversal", h.vertex_count, bound, load_bounds().hyper_max_nodes,
                 HYPER_MAX_NODES_ENV)
    masks = h.member_masks
    for size in range(h.vertex_count + 1):
        for picks in combinations(range(h.vertex_count), size):
            chosen = sum(1 << v for v in picks)
            if all((mask & chosen).bit_count() == 1 for mask in masks):
                return frozenset(picks)
    return None


@dataclass(frozen=True)
class PartialCheck:
    """Outcome of searching the edge-deleted partial hypergraphs for nu != tau."""
    found: bool
    kept_edges: Optional[Tuple[int, ...]] = None
    nu: Optional[int] = None
    tau: Optional[int] = None


def nu_tau_partial_check(h: Hypergraph, bound: Optional[int] = None) -> PartialCheck:
    """Look for a partial hypergraph (H itself first, then fewer hyperedges) with nu != tau."""
    _check_bound("nu_tau_partial_check", h.node_count, bound, load_bounds().hyper_max_nodes,
                 HYPER_MAX_NODES_ENV)
    masks = h.member_masks
    for size in range(h.edge_count, 0, -1):
        for picks in combinations(range(h.edge_count), size):
            sub = [masks[j] for j in picks]
            nu = len(_max_matching(sub))
            tau = len(_min_transversal(sub, h.vertex_count))
            if nu != tau:
                return PartialCheck(True, tuple(h.edge_node(j) for j in picks), nu, tau)
    return PartialCheck(False)


@dataclass(frozen=True, eq=False)
class AugmentedHypergraph:
    """H' = H plus hypervertices v1, v0, the hyperedge e0 = {v0, v1} and
    f_u = {v1, u} for every u in the independent transversal U.

    Numbering: hypervertices of H, v1, v0, then hyperedges of H, e0 and the
    f_u by increasing u.
    """
    hypergraph: Hypergraph
    original: Hypergraph
    u_set: FrozenSet[int]
    f: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        h2, h = self.hypergraph, self.original
        if h2.vertex_count != h.vertex_count + 2:
            raise InputError("H' must add exactly two hypervertices")
        if set(h2.members(self.e0)) != {self.v0, self.v1}:
            raise InputError("N(e0) must be {v0, v1}")
        if set(self.f) != set(self.u_set):
            raise InputError("there must be one hyperedge f_u per u in U")
        for u, fu in self.f.items():
            if set(h2.members(fu)) != {self.v1, u}:
                raise InputError(f"N(f_{h.label(u)}) must be {{v1, {h.label(u)}}}")
        for e in h.hyperedges():
            if h2.members(self.lift(e)) != h.members(e):
                raise InputError(f"hyperedge {h.label(e)} changed in H'")

    @property
    def v1(self) -> int:
        return self.original.vertex_count

    @property
    def v0(self) -> int:
        return self.original.vertex_count + 1

    @property
    def e0(self) -> int:
        return self.hypergraph.vertex_count + self.original.edge_count

    def lift(self, node: int) -> int:
        """Node of H to the same node of H'."""
        return node if self.original.is_vertex(node) else node + 2

    def label(self, node: int) -> str:
        return self.hypergraph.label(node)

    @property
    def vertex_count(self) -> int:
        return self.hypergraph.vertex_count


def augment_hypergraph(h: Hypergraph, u_set: Iterable[int]) -> AugmentedHypergraph:
    u_set = frozenset(u_set)
    if not all(h.is_vertex(u) for u in u_set):
        raise InputError("U must consist of hypervertices")
    for e in h.hyperedges():
        hits = len(u_set.intersection(h.members(e)))
        if hits > 1:
            raise InputError(f"U is not independent: hyperedge {h.label(e)} meets it {hits} times")
        if hits == 0:
            raise InputError(f"U is not a transversal: hyperedge {h.label(e)} misses it")

    n = h.vertex_count
    v1, v0 = n, n + 1
    ordered_u = sorted(u_set)
    edges = [list(members) for members in h.edge_lists()]
    edges.append([v0, v1])
    edges.extend([v1, u] for u in ordered_u)

    extra_vertices = ["v1", "v0"]
    extra_edges = ["e0"] + [f"f{h.label(u)}" for u in ordered_u]
    labels = list(h.graph.labels)
    if set(labels) & set(extra_vertices + extra_edges):
        extra_vertices = ["@" + x for x in extra_vertices]
        extra_edges = ["@" + x for x in extra_edges]
    labels = labels[:n] + extra_vertices + labels[n:] + extra_edges

    h2 = Hypergraph.from_edges(n + 2, edges, labels)
    first_f = h2.vertex_count + h.edge_count + 1
    f = {u: first_f + i for i, u in enumerate(ordered_u)}
    return AugmentedHypergraph(h2, h, u_set, f)


@dataclass(frozen=True)
class HyperAssignment:
    """(R, sigma) on H' with sigma[v] a hyperedge node of H' or None for bottom."""
    reachable: FrozenSet[int]
    sigma: Tuple[Optional[int], ...]

    def with_sigma(self, v: int, value: Optional[int]) -> "HyperAssignment":
        sigma = list(self.sigma)
        sigma[v] = value
        return HyperAssignment(self.reachable, tuple(sigma))


def verify_hyper_assignment(ha: AugmentedHypergraph, a: HyperAssignment) -> Verdict:
    """Check v0 in R and C1-C3 on H'; every violation is reported."""
    h2 = ha.hypergraph
    n = h2.vertex_count
    if len(a.sigma) != n:
        return Verdict.of([Violation("domain", detail=f"sigma has {len(a.sigma)} entries, expected {n}")])
    sigma, reachable = a.sigma, a.reachable
    found = []
    if ha.v0 not in reachable:
        found.append(Violation("R", ha.v0, detail="v0 is not in R"))
    for v in sorted(reachable):
        if not h2.is_vertex(v):
            found.append(Violation("R", v, detail="not a hypervertex of H'"))

    # N_sigma(u): vertices other than u whose sigma is a hyperedge at u
    n_sigma: Dict[int, List[int]] = {}
    for v, e in enumerate(sigma):
        if e is None:
            continue
        if not h2.is_hyperedge(e):
            found.append(Violation("C1", v, detail=f"sigma value {e} is not a hyperedge"))
            continue
        for u in h2.members(e):
            if u != v:
                n_sigma.setdefault(u, []).append(v)

    for v in sorted(x for x in reachable if h2.is_vertex(x)):
        e = sigma[v]
        if e is not None:
            if not h2.is_hyperedge(e):
                continue
            if not h2.graph.has_edge(v, e):
                found.append(Violation("C1", v, e, "sigma(v) is not incident to v"))
            for u in h2.members(e):
                if u == v:
                    continue
                if u not in reachable:
                    found.append(Violation("C1", v, u, f"{ha.label(u)} in sigma(v) is outside R"))
                elif sigma[u] is not None:
                    found.append(Violation("C1", v, u, f"{ha.label(u)} in sigma(v) is not bottom"))
        else:
            for f in h2.incident(v):
                if not any(u in reachable and sigma[u] is not None for u in h2.members(f)):
                    found.append(Violation("C2", v, f, "hyperedge has no winning vertex in R"))
        if len(n_sigma.get(v, ())) > 1:
            found.append(Violation("C3", v, detail=f"|N_sigma| = {len(n_sigma[v])}"))
    if n_sigma.get(ha.v0):
        found.append(Violation("C3", ha.v0, n_sigma[ha.v0][0], "N_sigma(v0) is not empty"))
    return Verdict.of(found)


def _require_verified(ha: AugmentedHypergraph, a: HyperAssignment) -> HyperAssignment:
    verdict = verify_hyper_assignment(ha, a)
    if not verdict.ok:
        raise InvariantViolation("; ".join(verdict.lines(ha.label)))
    return a


def assignment_from_matching(ha: AugmentedHypergraph, matching: Iterable[int]) -> HyperAssignment:
    """sigma(v0) = e0 and sigma(u) = the matching hyperedge at u for u in U.

    ``matching`` holds hyperedge nodes of the original hypergraph.
    """
    h = ha.original
    matching = tuple(matching)
    if not is_matching(h, matching):
        raise InputError("the given hyperedges do not form a matching")
    if not covers(h, matching, ha.u_set):
        raise InputError("the matching does not cover U")
    sigma: List[Optional[int]] = [None] * ha.vertex_count
    sigma[ha.v0] = ha.e0
    for u in ha.u_set:
        edge = next(e for e in matching if u in h.members(e))
        sigma[u] = ha.lift(edge)
    a = HyperAssignment(frozenset(range(ha.vertex_count)), tuple(sigma))
    return _require_verified(ha, a)


def assignment_from_duals(ha: AugmentedHypergraph, matching: Iterable[int],
                          transversal: Iterable[int], r: int) -> HyperAssignment:
    """sigma(v1) = f_r and every transversal vertex points at its matching hyperedge.

    Needs |M| = |T|, which makes every T-vertex lie in exactly one M-edge and
    every M-edge hold exactly one T-vertex.
    """
    h = ha.original
    matching = tuple(matching)
    transversal = frozenset(transversal)
    if not is_matching(h, matching):
        raise InputError("the given hyperedges do not form a matching")
    if not is_transversal(h, transversal):
        raise InputError("the given vertices do not form a transversal")
    if len(matching) != len(transversal):
        raise InputError(f"slackness fails: |M| = {len(matching)} but |T| = {len(transversal)}")
    if r not in ha.u_set:
        raise InputError(f"{h.label(r)} is not in U")
    if covers(h, matching, [r]):
        raise InputError(f"{h.label(r)} is covered by the matching")

    sigma: List[Optional[int]] = [None] * ha.vertex_count
    sigma[ha.v1] = ha.f[r]
    for e in matching:
        hit = transversal.intersection(h.members(e))
        if len(hit) != 1:
            raise InputError(f"slackness fails: hyperedge {h.label(e)} holds {len(hit)} transversal vertices")
    for t in sorted(transversal):
        edges = [e for e in matching if t in h.members(e)]
        if len(edges) != 1:
            raise InputError(f"slackness fails: {h.label(t)} lies in {len(edges)} matching hyperedges")
        sigma[t] = ha.lift(edges[0])
    a = HyperAssignment(frozenset(range(ha.vertex_count)), tuple(sigma))
    return _require_verified(ha, a)


@dataclass(frozen=True)
class ConstructionResult:
    assignment: Optional[HyperAssignment]
    method: str


def construct_assignment(ha: AugmentedHypergraph) -> ConstructionResult:
    """Build an assignment from a matching covering U, or else from a maximum
    matching and a minimum transversal; exhaustive search when neither applies."""
    h = ha.original
    matching = max_matching_bruteforce(h)
    if covers(h, matching, ha.u_set):
        return ConstructionResult(assignment_from_matching(ha, matching), METHOD_MATCHING)
    transversal = min_transversal_bruteforce(h)
    r = min(u for u in ha.u_set if not covers(h, matching, [u]))
    try:
        return ConstructionResult(assignment_from_duals(ha, matching, transversal, r), METHOD_DUALS)
    except InputError as exc:
        logger.info("falling back to exhaustive search: %s", exc)
    return ConstructionResult(search_assignment_bruteforce(ha), METHOD_SEARCH)


def search_assignment_bruteforce(ha: AugmentedHypergraph, bound: Optional[int] = None) -> Optional[HyperAssignment]:
    """Backtracking search for an assignment with R = V'.

    Hypervertices are decided in index order, bottom first and then the
    incident hyperedges in increasing order; partial C1 and C3 violations and
    hyperedges left without a winning vertex prune the search.
    """
    h2 = ha.hypergraph
    limit = load_bounds().search_max if bound is None else bound
    for what, size in (("|V'|", h2.vertex_count), ("|E'|", h2.edge_count)):
        if size > limit:
            raise SizeBoundError(f"search_assignment_bruteforce {what}", size, limit, SEARCH_MAX_ENV)

    n = h2.vertex_count
    sigma: List[Optional[int]] = [None] * n
    n_sigma = [0] * n
    last_member = {e: max(h2.members(e)) for e in h2.hyperedges()}
    explored = 0

    def consistent(x: int, e: Optional[int]) -> bool:
        if e is not None:
            for u in h2.members(e):
                if u < x and sigma[u] is not None:
                    return False
                if u != x and (u == ha.v0 or n_sigma[u] >= 1):
                    return False
            for v in range(x):
                if sigma[v] is not None and x in h2.members(sigma[v]):
                    return False
        for f in h2.incident(x):
            if last_member[f] == x and e is None:
                if not any(sigma[u] is not None for u in h2.members(f) if u != x):
                    return False
        return True

    def place(x: int) -> bool:
        nonlocal explored
        explored += 1
        if x == n:
            return True
        for e in (None,) + h2.incident(x):
            if not consistent(x, e):
                continue
            sigma[x] = e
            if e is not None:
                for u in h2.members(e):
                    if u != x:
                        n_sigma[u] += 1
            if place(x + 1):
                return True
            if e is not None:
                for u in h2.members(e):
                    if u != x:
                        n_sigma[u] -= 1
            sigma[x] = None
        return False

    found = place(0)
    logger.debug("search_assignment_bruteforce: %d nodes explored", explored)
    if not found:
        return None
    return _require_verified(ha, HyperAssignment(frozenset(range(n)), tuple(sigma)))
