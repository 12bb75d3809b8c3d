"""The two-player path game on (G', v0).

Starting from P = v0 the players alternately extend P by a neighbour of its
endpoint that is not yet on P; the first player unable to move loses.
Player 1 moves when |P| is even, Player 2 when it is odd.
"""
import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, Optional, Sequence, TextIO, Tuple

import numpy as np

from src.assignment import Assignment, AugmentedGraph
from src.graphs import Path, is_path
from src.lib.config import GAME_MAX_VERTICES_ENV, load_bounds
from src.lib.errors import InputError, InvariantViolation, SizeBoundError
from src.lib.verdict import Verdict, Violation

logger = logging.getLogger(__name__)

PLAYER_ONE = 1
PLAYER_TWO = 2


def other_player(player: int) -> int:
    return PLAYER_TWO if player == PLAYER_ONE else PLAYER_ONE


@dataclass(frozen=True)
class PlayState:
    arena: AugmentedGraph
    play: Path

    def __post_init__(self):
        if not self.play.vertices or self.play.vertices[0] != self.arena.v0:
            raise InputError("a play must start at v0")

    @classmethod
    def initial(cls, arena: AugmentedGraph) -> "PlayState":
        return cls(arena, Path((arena.v0,)))

    @classmethod
    def of(cls, arena: AugmentedGraph, vertices: Sequence[int]) -> "PlayState":
        if not is_path(arena.graph, vertices):
            raise InputError("play is not a path of G'")
        return cls(arena, Path(tuple(vertices)))

    @property
    def k(self) -> int:
        return self.play.length

    @property
    def to_move(self) -> int:
        # Player s moves when k - 1 = s (mod 2)
        return PLAYER_ONE if (self.k - 1) % 2 == 1 else PLAYER_TWO

    @property
    def transcript(self) -> Tuple[int, ...]:
        return self.play.vertices

    def extended(self, v: int) -> "PlayState":
        return PlayState(self.arena, self.play.extended(v))

    def moves(self) -> frozenset:
        return legal_moves(self)


@dataclass(frozen=True)
class Strategy:
    name: str
    choose: Callable[[Any], Any]

    def __call__(self, state):
        return self.choose(state)


@dataclass(frozen=True)
class MatchResult:
    winner: int
    transcript: Tuple
    forfeit: Optional[str] = None


def legal_moves(st: PlayState) -> frozenset:
    """Z: neighbours of the endpoint that are not on the play yet."""
    on_play = st.play.support
    return frozenset(u for u in st.arena.graph.neighbors(st.play.end) if u not in on_play)


def designated_player(arena: AugmentedGraph, a: Assignment) -> int:
    """The player an assignment makes win: 1 if sigma(v0) is set, else 2."""
    return PLAYER_ONE if a.sigma[arena.v0] is not None else PLAYER_TWO


def strategy_from_assignment(a: Assignment) -> Strategy:
    """Memoryless strategy: from v_k play sigma(v_k).

    It plays for Player 1 when sigma(v0) is set and for Player 2 otherwise;
    being asked to move anywhere its invariant does not hold is a bug.
    """

    def choose(st: PlayState) -> int:
        arena = st.arena
        if st.to_move != designated_player(arena, a):
            raise InvariantViolation(f"assignment strategy asked to move for player {st.to_move}")
        v = st.play.end
        if v not in a.reachable or a.sigma[v] is None:
            raise InvariantViolation(
                f"assignment strategy reached {arena.label(v)}, which is not a winning position"
            )
        u = a.sigma[v]
        if u in st.play.support:
            raise InvariantViolation(f"sigma({arena.label(v)}) = {arena.label(u)} is already on the play")
        return u

    return Strategy("assign", choose)


def random_strategy(seed: Optional[int] = None) -> Strategy:
    rng = np.random.default_rng(seed)

    def choose(st):
        moves = sorted(st.moves())
        if not moves:
            return None
        return moves[int(rng.integers(len(moves)))]

    return Strategy("random", choose)


def resign_strategy() -> Strategy:
    return Strategy("resign", lambda st: None)


def minimax_strategy(bound: Optional[int] = None) -> Strategy:
    """Plays the lowest-index winning move, or the lowest legal move when lost."""
    solvers: Dict[int, _GameSolver] = {}

    def choose(st: PlayState):
        key = id(st.arena)
        if key not in solvers:
            _check_game_bound(st.arena, bound)
            solvers[key] = _GameSolver(st.arena.graph.neighbor_masks)
        solver = solvers[key]
        used = sum(1 << v for v in st.play.vertices)
        moves = sorted(legal_moves(st))
        if not moves:
            return None
        for z in moves:
            if not solver.wins(z, used | (1 << z)):
                return z
        return moves[0]

    return Strategy("minimax", choose)


def stdin_strategy(stream: TextIO, prompt: Optional[TextIO] = None) -> Strategy:
    """Reads one vertex label per ply; end of input resigns."""

    def choose(st: PlayState):
        if prompt is not None:
            options = " ".join(st.arena.label(u) for u in sorted(legal_moves(st)))
            prompt.write(f"player {st.to_move} to move from {st.arena.label(st.play.end)} [{options}]: ")
            prompt.flush()
        line = stream.readline()
        if not line:
            return None
        try:
            return st.arena.graph.index_of(line.strip())
        except InputError:
            logger.warning("unknown vertex label %r", line.strip())
            return -1

    return Strategy("stdin", choose)


def run_match(state, p1: Strategy, p2: Strategy) -> MatchResult:
    strategies = {PLAYER_ONE: p1, PLAYER_TWO: p2}
    while True:
        player = state.to_move
        moves = state.moves()
        if not moves:
            return MatchResult(other_player(player), state.transcript)
        move = strategies[player](state)
        if move is None:
            return MatchResult(other_player(player), state.transcript, f"player {player} resigned")
        if move not in moves:
            logger.info("player %d (%s) made an illegal move %r", player, strategies[player].name, move)
            return MatchResult(other_player(player), state.transcript,
                               f"player {player} made an illegal move")
        state = state.extended(move)


def play_match(p1: Strategy, p2: Strategy, arena: AugmentedGraph) -> MatchResult:
    return run_match(PlayState.initial(arena), p1, p2)


def explore_playouts(state, strategy: Strategy, player: int) -> Iterator[MatchResult]:
    """Every play where ``strategy`` moves for ``player`` and the opponent tries
    each legal reply in turn: the full tree of deterministic adversaries."""
    moves = state.moves()
    if not moves:
        yield MatchResult(other_player(state.to_move), state.transcript)
        return
    if state.to_move == player:
        move = strategy(state)
        if move is None or move not in moves:
            yield MatchResult(other_player(player), state.transcript,
                              f"player {player} made an illegal move")
            return
        yield from explore_playouts(state.extended(move), strategy, player)
    else:
        for move in sorted(moves):
            yield from explore_playouts(state.extended(move), strategy, player)


def exhaustive_playouts(arena: AugmentedGraph, strategy: Strategy, player: int) -> Iterator[MatchResult]:
    return explore_playouts(PlayState.initial(arena), strategy, player)


def check_play_invariant(arena: AugmentedGraph, a: Assignment, play: Sequence[int]) -> Verdict:
    """The invariant the assignment strategy maintains along a play.

    For the designated side's positions i (even i when sigma(v0) is set, odd i
    otherwise): v_i in R, sigma(v_i) set and v_{i+1} = sigma(v_i). For the other
    positions: v_i in R and sigma(v_i) = bottom.
    """
    winning_parity = 0 if a.sigma[arena.v0] is not None else 1
    found = []
    for i, v in enumerate(play):
        if v not in a.reachable:
            found.append(Violation("play", v, detail=f"position {i} outside R"))
            continue
        if i % 2 == winning_parity:
            if a.sigma[v] is None:
                found.append(Violation("play", v, detail=f"position {i} should be winning"))
            elif i + 1 < len(play) and play[i + 1] != a.sigma[v]:
                found.append(Violation("play", v, play[i + 1], f"position {i + 1} is not sigma(v_{i})"))
        elif a.sigma[v] is not None:
            found.append(Violation("play", v, detail=f"position {i} should be losing"))
    return Verdict.of(found)


class _GameSolver:
    """Win/loss of the player to move, memoized on (endpoint, used-vertex bitmask)."""

    def __init__(self, masks: Sequence[int]):
        self.masks = masks
        self.memo: Dict[Tuple[int, int], bool] = {}

    def wins(self, end: int, used: int) -> bool:
        key = (end, used)
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        free = self.masks[end] & ~used
        result = False
        while free:
            low = free & -free
            z = low.bit_length() - 1
            if not self.wins(z, used | low):
                result = True
                break
            free ^= low
        self.memo[key] = result
        return result


def _check_game_bound(arena: AugmentedGraph, bound: Optional[int]) -> None:
    limit = load_bounds().game_max_vertices if bound is None else bound
    if arena.vertex_count > limit:
        raise SizeBoundError("minimax", arena.vertex_count, limit, GAME_MAX_VERTICES_ENV)


def minimax_value(arena: AugmentedGraph, bound: Optional[int] = None) -> int:
    """Winner under optimal play, by exhaustive search."""
    _check_game_bound(arena, bound)
    solver = _GameSolver(arena.graph.neighbor_masks)
    first_wins = solver.wins(arena.v0, 1 << arena.v0)
    logger.debug("minimax_value: %d positions explored", len(solver.memo))
    return PLAYER_ONE if first_wins else PLAYER_TWO
