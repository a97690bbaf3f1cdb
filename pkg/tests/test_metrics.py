import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from persistnet.errors import ParameterError
from persistnet.metrics import get_metric, hellinger, hellinger_affinity, mean_distance, total_variation
from persistnet.network.graph import DegreeDistribution, Graph

HALF = DegreeDistribution.from_mapping({0: 0.5, 1: 0.5})
POINT = DegreeDistribution.from_mapping({0: 1.0})

counts = st.lists(st.integers(0, 20), min_size=1, max_size=12)


def _dist(values):
    assume(sum(values) > 0)
    return DegreeDistribution.from_counts(values)


def test_worked_examples():
    assert total_variation(HALF, POINT) == pytest.approx(0.5)
    expected = math.sqrt((math.sqrt(0.5) - 1) ** 2 + 0.5) / math.sqrt(2)
    assert hellinger(HALF, POINT) == pytest.approx(expected)
    assert hellinger(HALF, POINT) == pytest.approx(0.5412, abs=1e-4)


def test_disjoint_supports_are_at_distance_one():
    far = DegreeDistribution.from_mapping({3: 1.0})
    assert total_variation(POINT, far) == 1.0
    assert hellinger(POINT, far) == pytest.approx(1.0)


@given(counts, counts)
def test_metric_properties(a, b):
    p, q = _dist(a), _dist(b)
    for fn in (total_variation, hellinger):
        assert fn(p, p) == pytest.approx(0.0, abs=1e-12)
        assert fn(p, q) == pytest.approx(fn(q, p), abs=1e-12)
        assert 0.0 <= fn(p, q) <= 1.0
    assert hellinger(p, q) == pytest.approx(hellinger_affinity(p, q), abs=1e-6)


def test_get_metric():
    assert get_metric("TV") is total_variation
    with pytest.raises(ParameterError):
        get_metric("kl")


def test_mean_distance_over_graphs(triangle):
    path = Graph(3, frozenset({(0, 1), (1, 2)}))
    assert mean_distance([(triangle, triangle)]) == 0.0
    # triangle: all degree 2; path: degrees 1, 2, 1
    assert mean_distance([(triangle, path), (triangle, triangle)]) == pytest.approx(1 / 3)
    assert mean_distance([(HALF, POINT)], metric=hellinger) == pytest.approx(hellinger(HALF, POINT))


def test_mean_distance_needs_pairs():
    with pytest.raises(ParameterError):
        mean_distance([])
