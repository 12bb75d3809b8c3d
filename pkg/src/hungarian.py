"""Maximum-weight perfect matching by the Hungarian method.

The feasibility subroutine is the assignment algorithm itself: on the
equality subgraph it returns either a matching covering V1 (done) or a Hall
violator S, which tells us which potentials to move.
"""
import logging
from dataclasses import dataclass
from itertools import permutations
from typing import FrozenSet, Optional, Sequence, Tuple

import numpy as np

from src.assignment import MatchingCert, augment, compute_assignment, extract_certificate
from src.graphs import BipartiteGraph
from src.lib.errors import InputError, InvariantViolation, SizeBoundError
from src.lib.verdict import Verdict, Violation

logger = logging.getLogger(__name__)

# weight of a missing edge; token "x" in weighted instance files
MISSING_EDGE = -10 ** 9

BRUTE_FORCE_MAX_N = 8


class WeightedBipartiteGraph:
    """Complete bipartite graph K_{n,n} with integer weights; row = V1 vertex, column = V2 vertex."""

    def __init__(self, weights):
        w = np.asarray(weights)
        if w.ndim != 2 or w.shape[0] != w.shape[1]:
            raise InputError(f"weight matrix must be square, got shape {w.shape}")
        if w.shape[0] < 1:
            raise InputError("weighted instance needs n >= 1")
        if w.dtype.kind not in "iu":
            if w.dtype.kind == "f" and np.all(np.isfinite(w)) and np.all(w == np.round(w)):
                w = w.astype(np.int64)
            else:
                raise InputError("weights must be finite integers")
        w = w.astype(np.int64)
        w.setflags(write=False)
        self.weights = w

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    def weight_of(self, matching) -> int:
        return int(sum(int(self.weights[u, v]) for u, v in matching))

    def __repr__(self) -> str:
        return f"WeightedBipartiteGraph(n={self.n})"


@dataclass(frozen=True)
class DualPair:
    y1: Tuple[int, ...]
    y2: Tuple[int, ...]

    @property
    def objective(self) -> int:
        return sum(self.y1) + sum(self.y2)

    def violations(self, g: WeightedBipartiteGraph, matching=()) -> Verdict:
        """Dual feasibility on every pair and equality on the matched pairs."""
        y1 = np.array(self.y1, dtype=np.int64)
        y2 = np.array(self.y2, dtype=np.int64)
        slack = y1[:, None] + y2[None, :] - g.weights
        found = [
            Violation("feasibility", int(u), int(v), f"y1 + y2 falls short of w by {-int(slack[u, v])}")
            for u, v in zip(*np.nonzero(slack < 0))
        ]
        for u, v in sorted(matching):
            if slack[u, v] != 0:
                found.append(Violation("slackness", u, v, f"matched pair has slack {int(slack[u, v])}"))
        return Verdict.of(found)


@dataclass(frozen=True)
class WeightedMatching:
    pairs: FrozenSet[Tuple[int, int]]
    duals: DualPair
    total_weight: int
    updates: int


def _equality_graph(g: WeightedBipartiteGraph, y1: np.ndarray, y2: np.ndarray) -> BipartiteGraph:
    n = g.n
    tight = (y1[:, None] + y2[None, :]) == g.weights
    edges = [(int(u), n + int(v)) for u, v in zip(*np.nonzero(tight))]
    return BipartiteGraph.from_edges(n, n, edges)


def max_weight_matching(g: WeightedBipartiteGraph) -> WeightedMatching:
    """Perfect matching of maximum total weight together with optimal duals."""
    n = g.n
    w = g.weights
    y1 = w.max(axis=1).astype(np.int64)
    y2 = np.zeros(n, dtype=np.int64)

    # every update lowers the dual objective by at least 1 and it never drops
    # below the weight of any perfect matching, e.g. the identity
    max_updates = int(y1.sum()) - int(np.trace(w))
    updates = 0
    while True:
        eq = _equality_graph(g, y1, y2)
        arena = augment(eq)
        a, _ = compute_assignment(arena)
        cert = extract_certificate(arena, a)
        if isinstance(cert, MatchingCert):
            pairs = frozenset((u, v - n) for u, v in cert.edges)
            break

        subset = sorted(cert.subset)
        covered = sorted(v - n for v in cert.witness_neighborhood)
        outside = np.ones(n, dtype=bool)
        outside[covered] = False
        if not outside.any():
            raise InvariantViolation("no column outside N(S) to take the dual step from")
        slack = y1[subset][:, None] + y2[None, outside] - w[np.ix_(subset, np.flatnonzero(outside))]
        delta = int(slack.min())
        if delta <= 0:
            raise InvariantViolation(f"dual step {delta} is not positive")
        y1[subset] -= delta
        y2[covered] += delta
        updates += 1
        logger.debug("dual update %d: delta=%d |S|=%d |N(S)|=%d", updates, delta, len(subset), len(covered))
        if updates > max_updates:
            raise InvariantViolation(f"{updates} dual updates exceed the initial dual gap {max_updates}")
    if updates > n * n:
        logger.warning("max_weight_matching: %d dual updates exceed n^2 = %d", updates, n * n)

    duals = DualPair(tuple(int(x) for x in y1), tuple(int(x) for x in y2))
    verdict = duals.violations(g, pairs)
    if not verdict.ok:
        raise InvariantViolation("; ".join(verdict.lines()))
    total = g.weight_of(pairs)
    if total != duals.objective:
        raise InvariantViolation(f"matching weight {total} differs from dual objective {duals.objective}")
    logger.info("max_weight_matching: n=%d weight=%d updates=%d", n, total, updates)
    return WeightedMatching(pairs, duals, total, updates)


def brute_force_max_weight(g: WeightedBipartiteGraph, bound: Optional[int] = None) -> Tuple[int, Tuple[int, ...]]:
    """Best total weight over all n! permutations, with the first optimal permutation."""
    limit = BRUTE_FORCE_MAX_N if bound is None else bound
    if g.n > limit:
        raise SizeBoundError("brute_force_max_weight", g.n, limit)
    w = g.weights
    rows = np.arange(g.n)
    best: Optional[int] = None
    best_perm: Sequence[int] = ()
    for perm in permutations(range(g.n)):
        total = int(w[rows, list(perm)].sum())
        if best is None or total > best:
            best, best_perm = total, perm
    return best, tuple(best_perm)
