import numpy as np
import pytest
from hypothesis import given
from scipy.optimize import linear_sum_assignment

from src.hungarian import (MISSING_EDGE, DualPair, WeightedBipartiteGraph, brute_force_max_weight,
                           max_weight_matching)
from src.lib.errors import InputError, SizeBoundError
from src.lib.generators import random_weights
from tests.strategies import PROPERTY_SETTINGS, weight_matrices


def test_anti_diagonal_needs_no_updates():
    result = max_weight_matching(WeightedBipartiteGraph([[1, 2], [2, 1]]))
    assert result.total_weight == 4
    assert result.pairs == {(0, 1), (1, 0)}
    assert result.duals == DualPair((2, 2), (0, 0))
    assert result.updates == 0


def test_single_dual_update():
    result = max_weight_matching(WeightedBipartiteGraph([[1, 0], [1, 0]]))
    assert result.total_weight == 1
    assert result.updates == 1
    assert result.duals == DualPair((0, 0), (1, 0))


def test_one_by_one():
    result = max_weight_matching(WeightedBipartiteGraph([[-5]]))
    assert result.total_weight == -5
    assert result.pairs == {(0, 0)}


def test_missing_edges_are_avoided():
    g = WeightedBipartiteGraph([[MISSING_EDGE, 3], [4, MISSING_EDGE]])
    assert max_weight_matching(g).total_weight == 7


def test_integral_floats_are_accepted():
    g = WeightedBipartiteGraph(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert g.weights.dtype == np.int64
    assert max_weight_matching(g).total_weight == 5


@pytest.mark.parametrize("weights", [
    [[1, 2]],
    [],
    [[1.5, 2], [3, 4]],
    [[np.inf, 0], [0, 0]],
])
def test_rejects_bad_matrices(weights):
    with pytest.raises(InputError):
        WeightedBipartiteGraph(weights)


def test_dual_violations():
    g = WeightedBipartiteGraph([[3, 0], [0, 3]])
    verdict = DualPair((1, 3), (0, 0)).violations(g, [(1, 1), (0, 0)])
    assert verdict.conditions() == {"feasibility", "slackness"}
    assert ("feasibility", 0, 0) in {(v.condition, v.vertex, v.neighbor) for v in verdict.violations}


def test_brute_force_bound():
    with pytest.raises(SizeBoundError):
        brute_force_max_weight(WeightedBipartiteGraph(np.zeros((3, 3), dtype=int)), bound=2)


def test_random_instances_against_scipy():
    rng = np.random.default_rng(2024)
    for _ in range(30):
        g = random_weights(int(rng.integers(1, 12)), rng)
        rows, cols = linear_sum_assignment(g.weights, maximize=True)
        result = max_weight_matching(g)
        assert result.total_weight == int(g.weights[rows, cols].sum())
        assert result.duals.violations(g, result.pairs).ok
        assert result.updates <= g.n * g.n


@PROPERTY_SETTINGS
@given(weight_matrices())
def test_optimal_against_brute_force(g):
    result = max_weight_matching(g)
    best, perm = brute_force_max_weight(g)
    assert result.total_weight == best
    assert result.total_weight == result.duals.objective
    assert g.weight_of(enumerate(perm)) == best
    assert sorted(u for u, _ in result.pairs) == list(range(g.n))
    assert sorted(v for _, v in result.pairs) == list(range(g.n))
