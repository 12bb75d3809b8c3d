import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.hypergraph import (METHOD_DUALS, METHOD_MATCHING, HyperAssignment, Hypergraph,
                            assignment_from_duals, assignment_from_matching, augment_hypergraph,
                            construct_assignment, covers, find_independent_transversal,
                            is_balanced_bruteforce, is_independent, is_matching, is_strong_cycle,
                            is_strong_path, is_transversal, is_unbalancing_length, iter_strong_cycles,
                            max_matching_bruteforce, min_transversal_bruteforce, nu_tau_partial_check,
                            search_assignment_bruteforce, verify_hyper_assignment)
from src.lib.config import SEARCH_MAX_ENV
from src.lib.errors import InputError, SizeBoundError
from src.lib.generators import all_hypergraphs, relabel_hypergraph
from tests.strategies import PROPERTY_SETTINGS, hypergraphs


@pytest.fixture
def triangle():
    return Hypergraph.from_edges(3, [[0, 1], [1, 2], [2, 0]])


@pytest.fixture
def interval():
    return Hypergraph.from_edges(3, [[0, 1], [1, 2], [0, 1, 2]])


@pytest.fixture
def duals():
    return Hypergraph.from_edges(3, [[0, 2], [1, 2]])


def test_numbering_and_labels(triangle):
    assert list(triangle.vertices()) == [0, 1, 2]
    assert list(triangle.hyperedges()) == [3, 4, 5]
    assert triangle.members(5) == (0, 2)
    assert triangle.incident(1) == (3, 4)
    assert triangle.label(4) == "e2"
    assert triangle.index_of("3") == 2
    assert triangle.member_masks == [0b011, 0b110, 0b101]


def test_rejects_bad_hyperedges():
    with pytest.raises(InputError):
        Hypergraph.from_edges(2, [[0, 2]])
    with pytest.raises(InputError):
        Hypergraph.from_edges(2, [[]])


def test_strong_paths(triangle, interval):
    assert is_strong_path(triangle, [0, 3, 1, 4, 2])
    assert not is_strong_path(triangle, [0, 3, 1, 4, 2, 5])
    assert not is_strong_path(triangle, [0, 4])
    assert is_strong_path(interval, [0, 3, 1, 4, 2])
    assert not is_strong_path(interval, [0, 3, 1, 5])


def test_strong_cycles(triangle, interval):
    assert is_strong_cycle(triangle, [0, 3, 1, 4, 2, 5, 0])
    assert is_strong_cycle(interval, [0, 3, 1, 5, 0])
    assert not is_strong_cycle(interval, [0, 3, 1, 4, 2, 5, 0])
    assert not is_strong_cycle(triangle, [0, 3, 1, 4, 2, 5])
    assert not is_strong_cycle(triangle, [0, 3, 0])


def test_iter_strong_cycles_lists_each_cycle_once(triangle, interval):
    assert list(iter_strong_cycles(triangle)) == [(0, 3, 1, 4, 2, 5, 0)]
    found = list(iter_strong_cycles(interval))
    assert len(found) == len(set(found))
    assert (0, 3, 1, 5, 0) in found
    assert all(is_strong_cycle(interval, c) for c in found)


@pytest.mark.parametrize("length,expected", [(2, False), (4, False), (6, True), (8, False), (10, True)])
def test_unbalancing_lengths(length, expected):
    assert is_unbalancing_length(length) is expected


def test_balance_examples(triangle, interval, duals):
    verdict = is_balanced_bruteforce(triangle)
    assert not verdict.balanced
    assert verdict.witness == (0, 3, 1, 4, 2, 5, 0)
    assert is_balanced_bruteforce(interval)
    assert is_balanced_bruteforce(duals)


def test_balance_bound(triangle):
    with pytest.raises(SizeBoundError):
        is_balanced_bruteforce(triangle, bound=5)


def test_matching_and_transversal_predicates(triangle, interval):
    assert is_matching(triangle, [3])
    assert not is_matching(triangle, [3, 4])
    assert not is_matching(triangle, [0])
    assert is_transversal(triangle, [0, 1])
    assert not is_transversal(triangle, [0])
    assert is_independent(interval, [1])
    assert not is_independent(interval, [0, 1])
    assert covers(interval, [3], [0, 1])
    assert not covers(interval, [3], [2])


def test_nu_and_tau(triangle, interval):
    assert len(max_matching_bruteforce(triangle)) == 1
    assert len(min_transversal_bruteforce(triangle)) == 2
    assert len(max_matching_bruteforce(interval)) == 1
    assert min_transversal_bruteforce(interval) == (1,)


def test_partial_check(triangle, interval):
    check = nu_tau_partial_check(triangle)
    assert check.found
    assert (check.nu, check.tau) == (1, 2)
    assert check.kept_edges == (3, 4, 5)
    assert not nu_tau_partial_check(interval).found


def test_independent_transversal(triangle, interval):
    assert find_independent_transversal(triangle) is None
    assert find_independent_transversal(interval) == {1}
    assert find_independent_transversal(Hypergraph.from_edges(1, [])) == frozenset()


def test_augment_layout(duals):
    ha = augment_hypergraph(duals, {0, 1})
    h2 = ha.hypergraph
    assert (ha.v1, ha.v0, ha.e0) == (3, 4, 7)
    assert h2.vertex_count == 5
    assert h2.edge_count == 5
    assert ha.f == {0: 8, 1: 9}
    assert [ha.label(x) for x in (3, 4, 5, 6, 7, 8, 9)] == ["v1", "v0", "e1", "e2", "e0", "f1", "f2"]
    assert set(h2.members(ha.f[1])) == {ha.v1, 1}
    assert ha.lift(3) == 5 and ha.lift(2) == 2


def test_augment_rejects_bad_u(triangle, interval):
    with pytest.raises(InputError, match="not independent"):
        augment_hypergraph(triangle, {0, 1})
    with pytest.raises(InputError, match="not a transversal"):
        augment_hypergraph(interval, {0})


def test_augment_prefixes_clashing_labels():
    h = Hypergraph.from_edges(1, [[0]], ["v1", "e1"])
    ha = augment_hypergraph(h, {0})
    assert ha.label(ha.v0) == "@v0"
    assert ha.label(ha.e0) == "@e0"


def test_matching_construction():
    h = Hypergraph.from_edges(1, [[0]])
    ha = augment_hypergraph(h, {0})
    result = construct_assignment(ha)
    assert result.method == METHOD_MATCHING
    assert result.assignment.sigma == (3, None, 4)


def test_duals_construction(duals):
    ha = augment_hypergraph(duals, {0, 1})
    result = construct_assignment(ha)
    assert result.method == METHOD_DUALS
    a = result.assignment
    assert a.sigma == (None, None, 5, 9, None)
    assert a.reachable == frozenset(range(5))
    assert verify_hyper_assignment(ha, a).ok


def test_duals_construction_checks_its_inputs(duals):
    ha = augment_hypergraph(duals, {0, 1})
    with pytest.raises(InputError, match="slackness"):
        assignment_from_duals(ha, [3], [0, 1], 1)
    with pytest.raises(InputError):
        assignment_from_duals(ha, [3], [2], 0)
    with pytest.raises(InputError):
        assignment_from_matching(ha, [3])


def test_empty_hypergraph_construction():
    ha = augment_hypergraph(Hypergraph.from_edges(1, []), frozenset())
    result = construct_assignment(ha)
    assert result.method == METHOD_MATCHING
    assert result.assignment.sigma[ha.v0] == ha.e0


def test_search_finds_the_matching_assignment():
    ha = augment_hypergraph(Hypergraph.from_edges(1, [[0]]), {0})
    a = search_assignment_bruteforce(ha)
    assert a.sigma == (3, None, 4)


def test_search_bound(duals, monkeypatch):
    ha = augment_hypergraph(duals, {0, 1})
    monkeypatch.setenv(SEARCH_MAX_ENV, "4")
    with pytest.raises(SizeBoundError, match=SEARCH_MAX_ENV):
        search_assignment_bruteforce(ha)


def test_verify_reports_each_condition(duals):
    ha = augment_hypergraph(duals, {0, 1})
    a = construct_assignment(ha).assignment

    broken = a.with_sigma(ha.v1, None)
    assert "C2" in verify_hyper_assignment(ha, broken).conditions()

    broken = a.with_sigma(0, 6)
    assert "C1" in verify_hyper_assignment(ha, broken).conditions()

    broken = a.with_sigma(ha.v1, ha.e0)
    assert "C3" in verify_hyper_assignment(ha, broken).conditions()

    broken = HyperAssignment(frozenset({0}), a.sigma)
    assert "R" in verify_hyper_assignment(ha, broken).conditions()

    assert verify_hyper_assignment(ha, HyperAssignment(a.reachable, ())).conditions() == {"domain"}


def test_balanced_small_hypergraphs():
    seen = 0
    for h in all_hypergraphs(4, 4):
        if not is_balanced_bruteforce(h):
            partial = nu_tau_partial_check(h)
            assert not partial.found or partial.nu != partial.tau
            continue
        seen += 1
        assert len(max_matching_bruteforce(h)) == len(min_transversal_bruteforce(h))
        assert not nu_tau_partial_check(h).found
        u_set = find_independent_transversal(h)
        if u_set is None:
            continue
        ha = augment_hypergraph(h, u_set)
        result = construct_assignment(ha)
        assert result.method in (METHOD_MATCHING, METHOD_DUALS)
        assert verify_hyper_assignment(ha, result.assignment).ok
        found = search_assignment_bruteforce(ha)
        assert found is not None
        assert verify_hyper_assignment(ha, found).ok
    assert seen > 1000



def test_unbalanced_with_konig_partial_hypergraphs():
    # every hyperedge also holds 3, so each edge subset has nu = tau = 1
    h = Hypergraph.from_edges(4, [[0, 1, 3], [1, 2, 3], [0, 2, 3]])
    verdict = is_balanced_bruteforce(h)
    assert not verdict.balanced
    assert is_strong_cycle(h, verdict.witness)
    assert not nu_tau_partial_check(h).found

@PROPERTY_SETTINGS
@given(hypergraphs(), st.randoms(use_true_random=False))
def test_balance_survives_relabelling(h, rnd):
    vertex_order = list(range(h.vertex_count))
    edge_order = list(range(h.edge_count))
    rnd.shuffle(vertex_order)
    rnd.shuffle(edge_order)
    moved = relabel_hypergraph(h, vertex_order, edge_order)
    assert is_balanced_bruteforce(moved).balanced == is_balanced_bruteforce(h).balanced
    assert len(max_matching_bruteforce(moved)) == len(max_matching_bruteforce(h))


@PROPERTY_SETTINGS
@given(hypergraphs())
def test_witness_is_a_strong_unbalancing_cycle(h):
    verdict = is_balanced_bruteforce(h)
    if verdict.witness is not None:
        assert is_strong_cycle(h, verdict.witness)
        assert is_unbalancing_length(len(verdict.witness) - 1)
