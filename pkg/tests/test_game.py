import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.assignment import augment, compute_assignment, tightness_instance
from src.game import (PLAYER_ONE, PLAYER_TWO, PlayState, Strategy, check_play_invariant,
                      designated_player, exhaustive_playouts, legal_moves, minimax_strategy,
                      minimax_value, play_match, random_strategy, resign_strategy, stdin_strategy,
                      strategy_from_assignment)
from src.graphs import BipartiteGraph
from src.lib.errors import InputError, InvariantViolation, SizeBoundError
from src.lib.generators import all_bipartite
from tests.strategies import PROPERTY_SETTINGS, bipartite_graphs


@pytest.fixture
def k11():
    return augment(BipartiteGraph.from_edges(1, 1, [(0, 1)]))


@pytest.fixture
def star():
    return augment(BipartiteGraph.from_edges(2, 1, [(0, 2), (1, 2)], ["u1", "u2", "w1"]))


def test_initial_state(k11):
    st_ = PlayState.initial(k11)
    assert st_.k == 0
    assert st_.to_move == PLAYER_ONE
    assert legal_moves(st_) == {k11.v1}
    assert st_.extended(k11.v1).to_move == PLAYER_TWO


def test_play_must_be_a_path_from_v0(k11):
    with pytest.raises(InputError):
        PlayState.of(k11, [k11.v0, 0])
    with pytest.raises(InputError):
        PlayState.of(k11, [k11.v1, k11.v0])


def test_minimax_examples(k11, star):
    assert minimax_value(k11) == PLAYER_ONE
    assert minimax_value(star) == PLAYER_TWO
    assert minimax_value(tightness_instance(2)) == PLAYER_TWO


def test_minimax_size_bound(star):
    with pytest.raises(SizeBoundError):
        minimax_value(star, bound=3)


def test_designated_player(k11, star):
    assert designated_player(k11, compute_assignment(k11)[0]) == PLAYER_ONE
    assert designated_player(star, compute_assignment(star)[0]) == PLAYER_TWO


def test_assignment_strategy_beats_random(star):
    a, _ = compute_assignment(star)
    for seed in range(20):
        result = play_match(random_strategy(seed), strategy_from_assignment(a), star)
        assert result.winner == PLAYER_TWO
        assert result.forfeit is None
        assert check_play_invariant(star, a, result.transcript).ok


def test_assignment_strategy_for_wrong_player_is_a_bug(star):
    a, _ = compute_assignment(star)
    with pytest.raises(InvariantViolation):
        play_match(strategy_from_assignment(a), random_strategy(0), star)


def test_resign_forfeits(k11):
    result = play_match(resign_strategy(), random_strategy(1), k11)
    assert result.winner == PLAYER_TWO
    assert result.forfeit == "player 1 resigned"
    assert result.transcript == (k11.v0,)


def test_illegal_move_forfeits(k11):
    result = play_match(Strategy("bad", lambda st_: k11.v0), random_strategy(1), k11)
    assert result.winner == PLAYER_TWO
    assert result.forfeit == "player 1 made an illegal move"


def test_stdin_strategy_reads_labels(k11):
    stream = io.StringIO("v1\n2\n")
    result = play_match(stdin_strategy(stream), minimax_strategy(), k11)
    assert result.winner == PLAYER_ONE
    assert result.transcript == (k11.v0, k11.v1, 0, 1)


def test_stdin_strategy_unknown_label_is_illegal(k11):
    result = play_match(stdin_strategy(io.StringIO("nope\n")), minimax_strategy(), k11)
    assert result.winner == PLAYER_TWO
    assert "illegal" in result.forfeit


def test_stdin_strategy_resigns_at_eof(k11):
    result = play_match(stdin_strategy(io.StringIO("")), minimax_strategy(), k11)
    assert result.forfeit == "player 1 resigned"


def test_play_invariant_flags_a_deviation(k11):
    a, _ = compute_assignment(k11)
    assert check_play_invariant(k11, a, [k11.v0, k11.v1, 0, 1]).ok
    verdict = check_play_invariant(k11, a, [k11.v0, 0])
    assert not verdict.ok


def test_minimax_strategy_wins_when_it_should(star):
    for seed in range(10):
        result = play_match(random_strategy(seed), minimax_strategy(), star)
        assert result.winner == PLAYER_TWO


@PROPERTY_SETTINGS
@given(bipartite_graphs(max_side=4), st.integers(0, 1000))
def test_minimax_agrees_with_assignment(g, seed):
    arena = augment(g)
    a, _ = compute_assignment(arena, tie_break="random", seed=seed)
    assert minimax_value(arena) == designated_player(arena, a)


def test_assignment_strategy_wins_every_playout_on_small_graphs():
    for g in all_bipartite(5):
        arena = augment(g)
        a, _ = compute_assignment(arena)
        player = designated_player(arena, a)
        strategy = strategy_from_assignment(a)
        for result in exhaustive_playouts(arena, strategy, player):
            assert result.winner == player
            assert result.forfeit is None
            assert check_play_invariant(arena, a, result.transcript).ok


def test_assignment_strategy_wins_on_worst_case_family():
    for n in (1, 2, 3):
        arena = tightness_instance(n)
        a, _ = compute_assignment(arena)
        player = designated_player(arena, a)
        assert player == minimax_value(arena)
        for result in exhaustive_playouts(arena, strategy_from_assignment(a), player):
            assert result.winner == player
