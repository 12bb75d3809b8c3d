import pytest

from src.game import PLAYER_ONE, PLAYER_TWO, Strategy
from src.hypergame import (HyperPlay, check_compatible, exhaustive_hyper_playouts,
                           hyper_designated_player, hyper_legal_moves, hyper_minimax,
                           hyper_minimax_strategy, hyper_strategy_from_assignment,
                           play_hyper_match)
from src.hypergraph import (Hypergraph, augment_hypergraph, construct_assignment,
                            find_independent_transversal, is_balanced_bruteforce)
from src.lib.errors import InputError, InvariantViolation, SizeBoundError
from src.lib.generators import all_hypergraphs


@pytest.fixture
def single():
    # H' numbering: 1 = 0, v1 = 1, v0 = 2, e1 = 3, e0 = 4, f1 = 5
    return augment_hypergraph(Hypergraph.from_edges(1, [[0]]), {0})


@pytest.fixture
def duals():
    return augment_hypergraph(Hypergraph.from_edges(3, [[0, 2], [1, 2]]), {0, 1})


def test_initial_play(single):
    st_ = HyperPlay.initial(single)
    assert st_.transcript == (2, 4)
    assert st_.k == 0
    assert st_.to_move == PLAYER_ONE
    assert hyper_legal_moves(st_) == {(1, 5)}


def test_legal_moves_along_the_only_play(single):
    st_ = HyperPlay.initial(single).extended((1, 5))
    assert st_.to_move == PLAYER_TWO
    assert st_.moves() == {(0, 3)}
    assert st_.extended((0, 3)).moves() == frozenset()


def test_play_must_be_strong_from_v0(single):
    with pytest.raises(InputError):
        HyperPlay.of(single, [2, 4, 0, 3])
    with pytest.raises(InputError):
        HyperPlay(single, (1, 5))


def test_hyper_minimax_examples(single, duals):
    assert hyper_minimax(single) == PLAYER_TWO
    assert hyper_minimax(duals) == PLAYER_ONE
    empty = augment_hypergraph(Hypergraph.from_edges(1, []), frozenset())
    assert hyper_minimax(empty) == PLAYER_TWO


def test_hyper_minimax_bound(duals):
    with pytest.raises(SizeBoundError):
        hyper_minimax(duals, bound=6)


def test_designated_player_is_mirrored(single, duals):
    assert hyper_designated_player(single, construct_assignment(single).assignment) == PLAYER_TWO
    assert hyper_designated_player(duals, construct_assignment(duals).assignment) == PLAYER_ONE


def test_assignment_strategy_wins_the_duals_instance(duals):
    a = construct_assignment(duals).assignment
    strategy = hyper_strategy_from_assignment(a)
    results = list(exhaustive_hyper_playouts(duals, strategy, PLAYER_ONE))
    assert results
    for result in results:
        assert result.winner == PLAYER_ONE
        assert check_compatible(duals, a, result.transcript).ok


def test_assignment_strategy_for_the_wrong_player(single):
    a = construct_assignment(single).assignment
    with pytest.raises(InvariantViolation):
        play_hyper_match(hyper_strategy_from_assignment(a), hyper_minimax_strategy(), single)


def test_match_against_minimax(single):
    a = construct_assignment(single).assignment
    result = play_hyper_match(hyper_minimax_strategy(), hyper_strategy_from_assignment(a), single)
    assert result.winner == PLAYER_TWO
    assert result.transcript == (2, 4, 1, 5, 0, 3)


def test_illegal_pair_forfeits(single):
    result = play_hyper_match(Strategy("bad", lambda st_: (0, 3)), hyper_minimax_strategy(), single)
    assert result.winner == PLAYER_TWO
    assert result.forfeit == "player 1 made an illegal move"


def test_check_compatible_flags_deviations(duals):
    a = construct_assignment(duals).assignment
    # v0 e0 v1 f2 1 e2: v1 plays sigma(v1) = f2, then 1 is losing
    assert check_compatible(duals, a, [4, 7, 3, 9, 1, 6]).ok
    verdict = check_compatible(duals, a, [4, 7, 3, 8, 0, 5])
    assert verdict.conditions() == {"compatible"}
    assert "strong-path" in check_compatible(duals, a, [4, 7, 3, 9, 0, 5]).conditions()


def test_strategy_wins_on_small_balanced_hypergraphs():
    checked = 0
    for h in all_hypergraphs(4, 4):
        if not is_balanced_bruteforce(h):
            continue
        u_set = find_independent_transversal(h)
        if u_set is None:
            continue
        arena = augment_hypergraph(h, u_set)
        a = construct_assignment(arena).assignment
        player = hyper_designated_player(arena, a)
        assert hyper_minimax(arena) == player
        for result in exhaustive_hyper_playouts(arena, hyper_strategy_from_assignment(a), player):
            assert result.winner == player
            assert result.forfeit is None
            assert check_compatible(arena, a, result.transcript).ok
        checked += 1
    assert checked > 100
