"""Assignments for the path game on an augmented bipartite graph.

An assignment (R, sigma) certifies, for every reachable position, whether the
player about to move from it wins (sigma(v) is the winning reply) or loses
(sigma(v) is None). ``compute_assignment`` builds one by exploring the game
tree along a single path P, retracting the last two vertices whenever the
endpoint has no losing neighbour left.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.graphs import BipartiteGraph, Graph, is_path, neighborhood
from src.lib.errors import InputError, InvariantViolation
from src.lib.verdict import Verdict, Violation

logger = logging.getLogger(__name__)

BOTTOM = -1
V0_LABEL = "v0"
V1_LABEL = "v1"

TIE_BREAK_LOWEST = "lowest"
TIE_BREAK_RANDOM = "random"


@dataclass(frozen=True, eq=False)
class AugmentedGraph:
    """G' = G plus an apex v1 and a start vertex v0 whose only neighbour is v1."""
    graph: Graph
    v0: int
    v1: int
    original: Optional[BipartiteGraph] = None

    def __post_init__(self):
        g = self.graph
        n = g.vertex_count
        if not (0 <= self.v0 < n and 0 <= self.v1 < n):
            raise InputError("v0 and v1 must be vertices of the graph")
        if g.neighbors(self.v0) != (self.v1,):
            raise InputError(
                f"N(v0) must be exactly {{{g.label(self.v1)}}}, got "
                f"{{{', '.join(g.label(u) for u in g.neighbors(self.v0))}}}"
            )
        if self.original is not None:
            src = self.original
            expected = set(src.side1) | {self.v0}
            if set(g.neighbors(self.v1)) != expected:
                raise InputError("N(v1) must be V1 plus v0")
            m = src.vertex_count
            if not np.array_equal(g.adjacency[:m, :m], src.graph.adjacency):
                raise InputError("G' restricted to V1 and V2 differs from the source graph")

    @classmethod
    def from_start(cls, graph: Graph, v0: int) -> "AugmentedGraph":
        """Use a prebuilt graph as (G', v0); v1 is the unique neighbour of v0."""
        nbrs = graph.neighbors(v0)
        if len(nbrs) != 1:
            raise InputError(f"start vertex {graph.label(v0)} must have exactly one neighbour")
        return cls(graph, v0, nbrs[0])

    @property
    def vertex_count(self) -> int:
        return self.graph.vertex_count

    def label(self, v: int) -> str:
        return self.graph.label(v)


@dataclass(frozen=True)
class Assignment:
    """(R, sigma) with sigma[v] a vertex or None for bottom."""
    reachable: FrozenSet[int]
    sigma: Tuple[Optional[int], ...]

    def is_winning(self, v: int) -> bool:
        return self.sigma[v] is not None

    def with_sigma(self, v: int, value: Optional[int]) -> "Assignment":
        sigma = list(self.sigma)
        sigma[v] = value
        return Assignment(self.reachable, tuple(sigma))

    def with_reachable(self, reachable: Iterable[int]) -> "Assignment":
        return Assignment(frozenset(reachable), self.sigma)


@dataclass(frozen=True)
class TraceStep:
    step: int
    kind: str  # "intro" or "del"
    x: int
    y: Optional[int]


@dataclass(frozen=True)
class AssignmentStats:
    iterations: int
    introductions: int
    deletions: int
    vertex_count: int
    trace: Optional[Tuple[TraceStep, ...]] = None

    @property
    def bound(self) -> int:
        return iteration_bound(self.vertex_count)


def iteration_bound(n: int) -> int:
    return 2 * n * n + 1


@dataclass
class AlgoState:
    """Live state of the exploration: P as a fixed-capacity array plus bitmaps."""
    path: np.ndarray
    path_len: int
    on_path: np.ndarray
    reachable: np.ndarray
    sigma: np.ndarray
    tau: np.ndarray
    iterations: int = 0
    trace: Optional[List[TraceStep]] = None

    @classmethod
    def initial(cls, ga: AugmentedGraph, trace: bool = False) -> "AlgoState":
        n = ga.vertex_count
        st = cls(
            path=np.full(n, BOTTOM, dtype=np.int64),
            path_len=0,
            on_path=np.zeros(n, dtype=bool),
            reachable=np.zeros(n, dtype=bool),
            sigma=np.full(n, BOTTOM, dtype=np.int64),
            tau=np.full(n, BOTTOM, dtype=np.int64),
            trace=[] if trace else None,
        )
        st.push(ga.v0)
        st.push(ga.v1)
        st.reachable[[ga.v0, ga.v1]] = True
        return st

    @classmethod
    def from_parts(cls, ga: AugmentedGraph, path: Sequence[int], reachable: Iterable[int],
                   sigma: Dict[int, int], tau: Dict[int, int]) -> "AlgoState":
        """Assemble an arbitrary state (maps hold only the non-bottom entries)."""
        n = ga.vertex_count
        st = cls(
            path=np.full(n, BOTTOM, dtype=np.int64),
            path_len=0,
            on_path=np.zeros(n, dtype=bool),
            reachable=np.zeros(n, dtype=bool),
            sigma=np.full(n, BOTTOM, dtype=np.int64),
            tau=np.full(n, BOTTOM, dtype=np.int64),
        )
        for v in path:
            st.push(v)
        for v in reachable:
            st.reachable[v] = True
        for v, u in sigma.items():
            st.sigma[v] = u
        for v, u in tau.items():
            st.tau[v] = u
        return st

    def push(self, v: int) -> None:
        if self.path_len >= self.path.shape[0]:
            raise InvariantViolation("path exceeds the vertex count")
        self.path[self.path_len] = v
        self.path_len += 1
        self.on_path[v] = True

    def pop(self) -> int:
        self.path_len -= 1
        v = int(self.path[self.path_len])
        self.path[self.path_len] = BOTTOM
        self.on_path[v] = False
        return v

    def path_vertices(self) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.path[:self.path_len])

    def reachable_set(self) -> FrozenSet[int]:
        return frozenset(int(v) for v in np.flatnonzero(self.reachable))

    def to_assignment(self) -> Assignment:
        sigma = tuple(None if s == BOTTOM else int(s) for s in self.sigma)
        return Assignment(self.reachable_set(), sigma)


@dataclass(frozen=True)
class MatchingCert:
    edges: FrozenSet[Tuple[int, int]]

    def violations(self, g: BipartiteGraph) -> Verdict:
        found = []
        seen: Dict[int, Tuple[int, int]] = {}
        for u, v in sorted(self.edges):
            if u not in g.side1 or v not in g.side2:
                found.append(Violation("matching", u, v, "edge does not join V1 to V2"))
            elif not g.graph.has_edge(u, v):
                found.append(Violation("matching", u, v, "not an edge of G"))
            for x in (u, v):
                if x in seen:
                    found.append(Violation("matching", x, None, "covered twice"))
                seen[x] = (u, v)
        for u in g.side1_sorted():
            if u not in seen:
                found.append(Violation("matching", u, None, "V1 vertex not covered"))
        return Verdict.of(found)


@dataclass(frozen=True)
class ViolatorCert:
    subset: FrozenSet[int]
    witness_neighborhood: FrozenSet[int]

    def violations(self, g: BipartiteGraph) -> Verdict:
        found = []
        if not self.subset <= g.side1:
            found.append(Violation("violator", detail="S is not a subset of V1"))
        if neighborhood(g, self.subset) != self.witness_neighborhood:
            found.append(Violation("violator", detail="witness differs from N(S)"))
        if len(self.witness_neighborhood) >= len(self.subset):
            found.append(Violation("violator", detail="|N(S)| >= |S|"))
        return Verdict.of(found)


Certificate = Union[MatchingCert, ViolatorCert]


def augment(g: BipartiteGraph) -> AugmentedGraph:
    """Add v1 adjacent to all of V1 and v0 adjacent to v1 (indices n and n+1)."""
    n = g.vertex_count
    v1, v0 = n, n + 1
    adj = np.zeros((n + 2, n + 2), dtype=bool)
    adj[:n, :n] = g.graph.adjacency
    side1 = g.side1_sorted()
    adj[v1, side1] = True
    adj[side1, v1] = True
    adj[v0, v1] = adj[v1, v0] = True

    labels = list(g.graph.labels)
    extra = [V1_LABEL, V0_LABEL]
    if V1_LABEL in labels or V0_LABEL in labels:
        extra = ["@" + V1_LABEL, "@" + V0_LABEL]
    return AugmentedGraph(Graph(adj, labels + extra), v0=v0, v1=v1, original=g)


def tightness_instance(n: int) -> AugmentedGraph:
    """Worst case for the iteration count: N(v_i) = {w_1, ..., w_{n-i+1}}.

    Numbering: v0 = 0, v_i = i, w_j = n + j.
    """
    if n < 1:
        raise InputError(f"tightness instance needs n >= 1, got {n}")
    edges = [(0, 1)]
    for i in range(1, n + 1):
        for j in range(1, n - i + 2):
            edges.append((i, n + j))
    labels = [f"v{i}" for i in range(n + 1)] + [f"w{j}" for j in range(1, n + 1)]
    graph = Graph.from_edges(2 * n + 1, edges, labels)
    return AugmentedGraph(graph, v0=0, v1=1)


def _check_step_sizing(step: TraceStep, len_before: int, len_after: int,
                       r_before: int, r_after: int, newly_reached: bool) -> None:
    if step.kind == "del":
        ok = len_after == len_before - 2 and r_after == r_before
    elif step.y is None:
        ok = len_after == len_before + 1 and r_after == r_before + 1 and newly_reached
    else:
        ok = len_after == len_before + 2 and r_after == r_before
    if not ok:
        raise InvariantViolation(
            f"step {step.step} ({step.kind} {step.x} {step.y}) changed |P| by "
            f"{len_after - len_before} and |R| by {r_after - r_before}"
        )


def compute_assignment(ga: AugmentedGraph, *, tie_break: str = TIE_BREAK_LOWEST,
                       seed: Optional[int] = None, trace: bool = False,
                       debug_invariants: bool = False) -> Tuple[Assignment, AssignmentStats]:
    """Run the exploration until |P| < 1 and return (R, sigma) with run statistics.

    Args:
        ga: the arena (G', v0).
        tie_break: "lowest" picks the lowest-index candidate z, "random" draws
            it from ``numpy.random.default_rng(seed)``.
        trace: record every introduction / deletion step.
        debug_invariants: check the step invariants and step sizes after
            every iteration; raises InvariantViolation on the first failure.
    """
    if not isinstance(ga, AugmentedGraph):
        raise InputError("compute_assignment expects an AugmentedGraph")
    if tie_break not in (TIE_BREAK_LOWEST, TIE_BREAK_RANDOM):
        raise InputError(f"unknown tie-break {tie_break!r}")

    n = ga.vertex_count
    adj = ga.graph.adjacency
    limit = iteration_bound(n)
    rng = np.random.default_rng(seed) if tie_break == TIE_BREAK_RANDOM else None

    st = AlgoState.initial(ga, trace=trace or debug_invariants)
    if debug_invariants:
        _require_step_ok(st, ga)

    introductions = deletions = 0
    while st.path_len - 1 >= 1:
        st.iterations += 1
        if st.iterations > limit:
            raise InvariantViolation(
                f"iteration {st.iterations} exceeds the proved bound 2n^2+1 = {limit}"
            )
        len_before = st.path_len
        r_before = int(st.reachable.sum())

        vk = int(st.path[st.path_len - 1])
        candidates = np.flatnonzero(adj[vk] & ~st.on_path & (st.sigma == BOTTOM))
        if candidates.size == 0:
            vk = st.pop()
            prev = st.pop()
            st.sigma[prev] = vk
            st.sigma[vk] = BOTTOM
            st.tau[vk] = prev
            st.tau[prev] = BOTTOM
            deletions += 1
            step = TraceStep(st.iterations, "del", prev, vk)
            newly_reached = False
        else:
            if rng is None:
                z = int(candidates[0])
            else:
                z = int(rng.choice(candidates))
            w = int(st.tau[z])
            newly_reached = not st.reachable[z]
            st.push(z)
            st.reachable[z] = True
            if w != BOTTOM:
                st.push(w)
            introductions += 1
            step = TraceStep(st.iterations, "intro", z, None if w == BOTTOM else w)

        if st.trace is not None:
            st.trace.append(step)
        if debug_invariants:
            _check_step_sizing(step, len_before, st.path_len, r_before,
                               int(st.reachable.sum()), newly_reached)
            _require_step_ok(st, ga)

    stats = AssignmentStats(
        iterations=st.iterations,
        introductions=introductions,
        deletions=deletions,
        vertex_count=n,
        trace=tuple(st.trace) if trace else None,
    )
    logger.debug("compute_assignment: n=%d iterations=%d introductions=%d deletions=%d",
                 n, stats.iterations, introductions, deletions)
    return st.to_assignment(), stats


def _require_step_ok(st: AlgoState, ga: AugmentedGraph) -> None:
    verdict = check_step_invariants(st, ga)
    if not verdict.ok:
        raise InvariantViolation(
            f"step {st.iterations}: " + "; ".join(verdict.lines(ga.label))
        )


def check_step_invariants(st: AlgoState, ga: AugmentedGraph) -> Verdict:
    """Check the four step invariants: P a path inside R, (sigma, tau) a valid
    tuple for (Q, R), and the winning / losing conditions restricted to Q."""
    g = ga.graph
    n = ga.vertex_count
    sigma, tau = st.sigma, st.tau
    path = st.path_vertices()
    on_path = set(path)
    reachable = st.reachable_set()
    found = []

    if not is_path(g, path):
        found.append(Violation("path", detail="P is not a path of G'"))
    if path and path[0] != ga.v0:
        found.append(Violation("path", path[0], detail="P does not start at v0"))
    for v in path:
        if v not in reachable:
            found.append(Violation("path", v, detail="path vertex outside R"))

    for u in range(n):
        if (sigma[u] != BOTTOM or tau[u] != BOTTOM) and u not in reachable:
            found.append(Violation("valid-tuple", u, detail="sigma or tau set outside R"))

    q_set = reachable - on_path
    for q in sorted(q_set):
        s, t = int(sigma[q]), int(tau[q])
        if s != BOTTOM:
            partner = s
            matched = (t == BOTTOM and partner in q_set and sigma[partner] == BOTTOM
                       and tau[partner] == q)
        elif t != BOTTOM:
            partner = t
            matched = partner in q_set and sigma[partner] == q and tau[partner] == BOTTOM
        else:
            partner, matched = None, False
        if not matched:
            found.append(Violation("valid-tuple", q, partner, "vertex of Q is not in a match"))

    for v in sorted(q_set):
        u = int(sigma[v])
        if u != BOTTOM:
            if not (0 <= u < n and g.has_edge(v, u) and u in q_set and sigma[u] == BOTTOM):
                found.append(Violation("losing-choice", v, u, "sigma(v) is not a losing neighbour in Q"))
        else:
            for x in g.neighbors(v):
                if x in on_path:
                    continue
                if x not in q_set or sigma[x] == BOTTOM:
                    found.append(Violation("winning-neighbours", v, x, "neighbour off P is not winning in Q"))
    return Verdict.of(found)


def verify_assignment(ga: AugmentedGraph, a: Assignment) -> Verdict:
    """Check v0 in R and C1-C3; every violation is reported, not just the first."""
    g = ga.graph
    n = ga.vertex_count
    if len(a.sigma) != n:
        return Verdict.of([Violation("domain", detail=f"sigma has {len(a.sigma)} entries, expected {n}")])
    found = []
    reachable = a.reachable
    sigma = a.sigma

    if ga.v0 not in reachable:
        found.append(Violation("R", ga.v0, detail="v0 is not in R"))
    for v in sorted(reachable):
        if not 0 <= v < n:
            found.append(Violation("R", v, detail="vertex out of range"))

    preimage: Dict[int, List[int]] = {}
    for v, u in enumerate(sigma):
        if u is not None and 0 <= u < n:
            preimage.setdefault(u, []).append(v)

    for v in sorted(x for x in reachable if 0 <= x < n):
        u = sigma[v]
        if u is not None:
            if not 0 <= u < n:
                found.append(Violation("C1", v, None, f"sigma value {u} out of range"))
                continue
            if not g.has_edge(v, u):
                found.append(Violation("C1", v, u, "sigma(v) is not a neighbour"))
            if u not in reachable:
                found.append(Violation("C1", v, u, "sigma(v) is outside R"))
            if sigma[u] is not None:
                found.append(Violation("C1", v, u, "sigma(sigma(v)) is not bottom"))
        else:
            for x in g.neighbors(v):
                if x not in reachable:
                    found.append(Violation("C2", v, x, "neighbour outside R"))
                elif sigma[x] is None:
                    found.append(Violation("C2", v, x, "neighbour has sigma = bottom"))
        if len(preimage.get(v, ())) > 1:
            found.append(Violation("C3", v, None, f"{len(preimage[v])} vertices map to it"))
    if preimage.get(ga.v0):
        found.append(Violation("C3", ga.v0, preimage[ga.v0][0], "sigma^-1(v0) is not empty"))
    return Verdict.of(found)


def extract_certificate(ga: AugmentedGraph, a: Assignment) -> Certificate:
    """Turn a verified assignment into a matching covering V1 or a Hall violator."""
    g = ga.original
    if g is None:
        raise InputError("certificate extraction needs an arena built from a bipartite graph")
    sigma = a.sigma
    v0, v1 = ga.v0, ga.v1

    if sigma[v0] is not None:
        if sigma[v0] != v1:
            raise InvariantViolation("sigma(v0) must be v1")
        edges = []
        for u in g.side1_sorted():
            w = sigma[u]
            if w is None or w not in g.side2:
                raise InvariantViolation(f"sigma({ga.label(u)}) is not a V2 vertex")
            edges.append((u, w))
        cert = MatchingCert(frozenset(edges))
        verdict = cert.violations(g)
        if not verdict.ok:
            raise InvariantViolation("; ".join(verdict.lines(ga.label)))
        return cert

    subset = frozenset(u for u in g.side1 if u in a.reachable and sigma[u] is None)
    witness = neighborhood(g, subset)
    for v in sorted(witness):
        if v not in a.reachable or sigma[v] not in subset:
            raise InvariantViolation(f"N(S) vertex {ga.label(v)} is not mapped into S")
    r = sigma[v1]
    if r is None or r not in subset:
        raise InvariantViolation("sigma(v1) must lie in S")
    if [v for v, u in enumerate(sigma) if u == r] != [v1]:
        raise InvariantViolation("sigma^-1(sigma(v1)) must be {v1}")
    if len(witness) >= len(subset):
        raise InvariantViolation(f"|N(S)| = {len(witness)} is not below |S| = {len(subset)}")
    return ViolatorCert(subset, witness)
