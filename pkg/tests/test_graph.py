import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from persistnet.errors import ParameterError
from persistnet.network.graph import (
    DegreeDistribution,
    DegreeSequence,
    Graph,
    StubPool,
    canonical_edge,
)


def test_edges_are_canonicalised():
    graph = Graph(4, frozenset({(3, 1), (0, 2)}))
    assert graph.sorted_edges() == [(0, 2), (1, 3)]
    assert graph.has_edge(1, 3) and graph.has_edge(3, 1)


def test_self_loop_rejected():
    with pytest.raises(ParameterError, match="Self-loop"):
        Graph(3, frozenset({(1, 1)}))


def test_edge_outside_range_rejected():
    with pytest.raises(ParameterError):
        Graph(3, frozenset({(0, 3)}))


def test_degrees_and_neighbors(triangle):
    assert triangle.degrees().tolist() == [2, 2, 2]
    assert triangle.neighbors()[0] == [1, 2]
    assert triangle.without_edges([(0, 1)]).degrees().tolist() == [1, 1, 2]


def test_networkx_round_trip(triangle):
    assert Graph.from_networkx(triangle.to_networkx()) == triangle


def test_degree_sequence_requires_even_sum():
    with pytest.raises(ParameterError, match="odd"):
        DegreeSequence(np.array([1, 1, 1]))


def test_degree_sequence_copies_input():
    raw = np.array([1, 1, 2, 2])
    seq = DegreeSequence(raw)
    raw[0] = 5
    assert seq.degrees[0] == 1
    assert seq.stubs().stubs.tolist() == [0, 1, 2, 2, 3, 3]


def test_stub_pool_from_edges():
    assert StubPool.from_edges([(0, 1), (2, 3)]).stubs.tolist() == [0, 1, 2, 3]
    assert len(StubPool.from_edges([])) == 0


def test_degree_distribution_validation():
    with pytest.raises(ParameterError):
        DegreeDistribution(np.array([0.5, 0.4]))
    dist = DegreeDistribution.from_mapping({0: 0.25, 2: 0.75})
    assert dist.masses.tolist() == [0.25, 0.0, 0.75]
    assert dist.mean() == pytest.approx(1.5)
    assert dist.mass(7) == 0.0


def test_aligned_pads_shorter_support():
    a = DegreeDistribution(np.array([1.0]))
    b = DegreeDistribution(np.array([0.5, 0.0, 0.5]))
    left, right = a.aligned(b)
    assert left.tolist() == [1.0, 0.0, 0.0]
    assert right.tolist() == [0.5, 0.0, 0.5]


@given(st.sets(st.tuples(st.integers(0, 19), st.integers(0, 19)).filter(lambda e: e[0] != e[1])))
def test_degree_sum_is_twice_edge_count(pairs):
    graph = Graph(20, frozenset(pairs))
    assert int(graph.degrees().sum()) == 2 * graph.edge_count
    assert all(u < v for u, v in graph.edges)
    assert {canonical_edge(u, v) for u, v in pairs} == set(graph.edges)
