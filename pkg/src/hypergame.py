"""The path game on an augmented hypergraph (H', v0).

A play v0 e0 v1 e1 ... vk ek is a strong path of H'. Player 1 moves when k
is even, Player 2 when k is odd; a move appends a pair (v, e).
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterator, Optional, Sequence, Tuple

from src.game import (PLAYER_ONE, PLAYER_TWO, MatchResult, Strategy, explore_playouts,
                      run_match)
from src.hypergraph import (AugmentedHypergraph, HyperAssignment, covers, is_balanced_bruteforce,
                            is_strong_path, max_matching_bruteforce)
from src.lib.config import HYPER_GAME_MAX_NODES_ENV, load_bounds
from src.lib.errors import InputError, InvariantViolation, SizeBoundError
from src.lib.verdict import Verdict, Violation

logger = logging.getLogger(__name__)

Move = Tuple[int, int]


@dataclass(frozen=True)
class HyperPlay:
    arena: AugmentedHypergraph
    play: Tuple[int, ...]

    def __post_init__(self):
        if self.play[:2] != (self.arena.v0, self.arena.e0) or len(self.play) % 2:
            raise InputError("a play must start with v0 e0 and alternate hypervertices and hyperedges")

    @classmethod
    def initial(cls, arena: AugmentedHypergraph) -> "HyperPlay":
        return cls(arena, (arena.v0, arena.e0))

    @classmethod
    def of(cls, arena: AugmentedHypergraph, nodes: Sequence[int]) -> "HyperPlay":
        if not is_strong_path(arena.hypergraph, nodes):
            raise InputError("play is not a strong path of H'")
        return cls(arena, tuple(nodes))

    @property
    def k(self) -> int:
        return len(self.play) // 2 - 1

    @property
    def to_move(self) -> int:
        return PLAYER_ONE if self.k % 2 == 0 else PLAYER_TWO

    @property
    def transcript(self) -> Tuple[int, ...]:
        return self.play

    @property
    def support_mask(self) -> int:
        return sum(1 << x for x in self.play)

    def extended(self, move: Move) -> "HyperPlay":
        return HyperPlay(self.arena, self.play + tuple(move))

    def moves(self) -> frozenset:
        return hyper_legal_moves(self)


def _legal_pairs(masks: Sequence[int], used: int, ek: int) -> Iterator[Move]:
    ek_bit = 1 << ek
    vs = masks[ek] & ~used
    while vs:
        low = vs & -vs
        vs ^= low
        v = low.bit_length() - 1
        # v may touch the play only through e_k
        if masks[v] & used != ek_bit:
            continue
        es = masks[v] & ~used
        while es:
            elow = es & -es
            es ^= elow
            e = elow.bit_length() - 1
            if masks[e] & used == 0:
                yield v, e


def hyper_legal_moves(st: HyperPlay) -> frozenset:
    """Pairs (v, e) such that P v e is still a strong path of H'."""
    masks = st.arena.hypergraph.graph.neighbor_masks
    return frozenset(_legal_pairs(masks, st.support_mask, st.play[-1]))


def hyper_designated_player(arena: AugmentedHypergraph, a: HyperAssignment) -> int:
    """Player 1 wins when sigma(v0) is bottom, Player 2 otherwise."""
    return PLAYER_ONE if a.sigma[arena.v0] is None else PLAYER_TWO


def hyper_strategy_from_assignment(a: HyperAssignment) -> Strategy:
    """From P = ... vk ek play the lowest v in N(ek) - {vk} with sigma(v) set,
    together with sigma(v)."""

    def choose(st: HyperPlay) -> Move:
        arena = st.arena
        if st.to_move != hyper_designated_player(arena, a):
            raise InvariantViolation(f"assignment strategy asked to move for player {st.to_move}")
        vk, ek = st.play[-2], st.play[-1]
        h2 = arena.hypergraph
        candidates = [v for v in h2.members(ek) if v != vk and v in a.reachable and a.sigma[v] is not None]
        if not candidates:
            raise InvariantViolation(f"no winning hypervertex in {arena.label(ek)} besides {arena.label(vk)}")
        v = candidates[0]
        move = (v, a.sigma[v])
        if move not in st.moves():
            raise InvariantViolation(
                f"({arena.label(v)}, {arena.label(move[1])}) does not extend the play to a strong path"
            )
        return move

    return Strategy("assign", choose)


class _HyperGameSolver:
    """Win/loss of the player to move, memoized on (support mask, e_k)."""

    def __init__(self, masks: Sequence[int]):
        self.masks = masks
        self.memo: Dict[Tuple[int, int], bool] = {}

    def wins(self, used: int, ek: int) -> bool:
        key = (used, ek)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        result = any(not self.wins(used | (1 << v) | (1 << e), e)
                     for v, e in _legal_pairs(self.masks, used, ek))
        self.memo[key] = result
        return result


def _check_hyper_game_bound(arena: AugmentedHypergraph, bound: Optional[int]) -> None:
    limit = load_bounds().hyper_game_max_nodes if bound is None else bound
    size = arena.hypergraph.node_count
    if size > limit:
        raise SizeBoundError("hyper_minimax", size, limit, HYPER_GAME_MAX_NODES_ENV)


def hyper_minimax(arena: AugmentedHypergraph, bound: Optional[int] = None) -> int:
    """Exact game value. For balanced H it must be 2 exactly when some matching covers U."""
    _check_hyper_game_bound(arena, bound)
    solver = _HyperGameSolver(arena.hypergraph.graph.neighbor_masks)
    start = HyperPlay.initial(arena)
    value = PLAYER_ONE if solver.wins(start.support_mask, arena.e0) else PLAYER_TWO
    logger.debug("hyper_minimax: %d positions explored", len(solver.memo))

    h = arena.original
    if is_balanced_bruteforce(h, bound=h.node_count):
        matched = covers(h, max_matching_bruteforce(h, bound=h.edge_count), arena.u_set)
        if (value == PLAYER_TWO) != matched:
            raise InvariantViolation(
                f"game value {value} disagrees with matching coverage of U ({matched})"
            )
    return value


def hyper_minimax_strategy(bound: Optional[int] = None) -> Strategy:
    """Lowest winning move, or the lowest legal move in a lost position."""
    solvers: Dict[int, _HyperGameSolver] = {}

    def choose(st: HyperPlay):
        key = id(st.arena)
        if key not in solvers:
            _check_hyper_game_bound(st.arena, bound)
            solvers[key] = _HyperGameSolver(st.arena.hypergraph.graph.neighbor_masks)
        moves = sorted(st.moves())
        if not moves:
            return None
        used = st.support_mask
        for v, e in moves:
            if not solvers[key].wins(used | (1 << v) | (1 << e), e):
                return v, e
        return moves[0]

    return Strategy("minimax", choose)


def check_compatible(arena: AugmentedHypergraph, a: HyperAssignment, play: Sequence[int]) -> Verdict:
    """Compatibility of a play with an assignment.

    With sigma(v0) bottom, odd positions i need sigma(v_i) set and e_i = sigma(v_i)
    while even positions need sigma(v_i) bottom; with sigma(v0) set the parities
    swap. Every v_i must lie in R and the play must be a strong path.
    """
    winning_parity = 1 if a.sigma[arena.v0] is None else 0
    found = []
    if not is_strong_path(arena.hypergraph, play):
        found.append(Violation("strong-path", detail="play is not a strong path of H'"))
    for i in range(len(play) // 2):
        v, e = play[2 * i], play[2 * i + 1]
        if v not in a.reachable:
            found.append(Violation("compatible", v, detail=f"v_{i} outside R"))
        elif i % 2 == winning_parity:
            if a.sigma[v] is None:
                found.append(Violation("compatible", v, detail=f"sigma(v_{i}) should be set"))
            elif a.sigma[v] != e:
                found.append(Violation("compatible", v, e, f"e_{i} is not sigma(v_{i})"))
        elif a.sigma[v] is not None:
            found.append(Violation("compatible", v, detail=f"sigma(v_{i}) should be bottom"))
    return Verdict.of(found)


def play_hyper_match(p1: Strategy, p2: Strategy, arena: AugmentedHypergraph) -> MatchResult:
    return run_match(HyperPlay.initial(arena), p1, p2)


def exhaustive_hyper_playouts(arena: AugmentedHypergraph, strategy: Strategy, player: int) -> Iterator[MatchResult]:
    return explore_playouts(HyperPlay.initial(arena), strategy, player)
