"""Independent ground truth for the assignment algorithm.

Classical augmenting-path matching and brute-force Hall checks; both are
deliberately simple so that they are obviously right.
"""
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Optional, Set, Tuple

from src.assignment import ViolatorCert
from src.graphs import BipartiteGraph, neighborhood
from src.lib.config import HALL_MAX_SIDE_ENV, load_bounds
from src.lib.errors import InvariantViolation, SizeBoundError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OracleMatching:
    edges: FrozenSet[Tuple[int, int]]

    @property
    def size(self) -> int:
        return len(self.edges)

    def covers_side1(self, g: BipartiteGraph) -> bool:
        return {u for u, _ in self.edges} == set(g.side1)


def max_matching(g: BipartiteGraph) -> OracleMatching:
    """Maximum-cardinality matching by repeated augmenting-path search (Kuhn)."""
    match_of: Dict[int, int] = {}  # V2 vertex -> its V1 partner

    def augment_from(u: int, seen: Set[int]) -> bool:
        for v in g.graph.neighbors(u):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_of or augment_from(match_of[v], seen):
                match_of[v] = u
                return True
        return False

    for u in g.side1_sorted():
        augment_from(u, set())
    return OracleMatching(frozenset((u, v) for v, u in match_of.items()))


def _side1_masks(g: BipartiteGraph):
    side1 = g.side1_sorted()
    masks = g.graph.neighbor_masks
    return side1, [masks[u] for u in side1]


def _check_hall_bound(g: BipartiteGraph, bound: Optional[int]) -> None:
    limit = load_bounds().hall_max_side if bound is None else bound
    if g.n1 > limit:
        raise SizeBoundError("hall_violator_bruteforce", g.n1, limit, HALL_MAX_SIDE_ENV)


def hall_violator_bruteforce(g: BipartiteGraph, bound: Optional[int] = None) -> Optional[ViolatorCert]:
    """Smallest S in V1 with |N(S)| < |S| (subsets in size, then index order), or None."""
    _check_hall_bound(g, bound)
    side1, masks = _side1_masks(g)
    found = None
    for size in range(1, len(side1) + 1):
        for picks in combinations(range(len(side1)), size):
            nbrs = 0
            for i in picks:
                nbrs |= masks[i]
            if nbrs.bit_count() < size:
                subset = frozenset(side1[i] for i in picks)
                found = ViolatorCert(subset, neighborhood(g, subset))
                break
        if found is not None:
            break

    covers = max_matching(g).covers_side1(g)
    if covers == (found is not None):
        raise InvariantViolation("Hall condition and maximum matching disagree")
    return found


def max_deficiency_bruteforce(g: BipartiteGraph, bound: Optional[int] = None) -> int:
    """max over S in V1 (empty set included) of |S| - |N(S)|."""
    _check_hall_bound(g, bound)
    side1, masks = _side1_masks(g)
    best = 0
    for bits in range(1, 1 << len(side1)):
        nbrs = 0
        size = 0
        rest = bits
        while rest:
            low = rest & -rest
            nbrs |= masks[low.bit_length() - 1]
            size += 1
            rest ^= low
        best = max(best, size - nbrs.bit_count())
    return best
