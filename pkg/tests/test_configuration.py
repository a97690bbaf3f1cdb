import logging
from collections import Counter

import numpy as np
import pytest

from persistnet.errors import ParameterError
from persistnet.network.configuration import (
    configuration_model,
    degree_distribution,
    rematch_stubs,
    sample_constant_degrees,
    sample_poisson_degrees,
)
from persistnet.network.graph import DegreeSequence, Graph, StubPool


def test_poisson_degrees_have_even_sum(rng):
    for _ in range(20):
        seq = sample_poisson_degrees(101, 3.0, rng)
        assert seq.stub_count % 2 == 0


def test_constant_degree_parity_repair(rng, caplog):
    with caplog.at_level(logging.WARNING, logger="persistnet"):
        seq = sample_constant_degrees(3, 1, rng)
    assert seq.repaired
    assert sorted(seq.degrees.tolist()) == [1, 1, 2]
    assert "Odd degree sum" in caplog.text


def test_two_nodes_of_degree_one_form_one_edge(rng):
    result = configuration_model(sample_constant_degrees(2, 1, rng), rng)
    assert result.graph.sorted_edges() == [(0, 1)]
    assert result.discards == 0


def test_four_stubs_pick_each_matching_uniformly():
    counts = Counter(
        tuple(configuration_model([1, 1, 1, 1], np.random.default_rng(seed)).graph.sorted_edges())
        for seed in range(3000)
    )
    assert set(counts) == {((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))}
    for count in counts.values():
        assert abs(count / 3000 - 1 / 3) < 0.03


def test_lone_self_loop_is_discarded(rng):
    result = configuration_model([2, 0], rng)
    assert result.graph.edge_count == 0
    assert result.discards == 1


def test_matching_is_simple_and_accounts_for_every_stub(rng):
    seq = sample_poisson_degrees(500, 6.0, rng)
    result = configuration_model(seq, rng)
    degrees = result.graph.degrees()
    assert np.all(degrees <= seq.degrees)
    assert result.graph.edge_count + result.discards == seq.stub_count // 2


def test_mean_edge_count_matches_degree_law(rng):
    counts = [
        configuration_model(sample_poisson_degrees(1000, 6.0, rng), rng).graph.edge_count
        for _ in range(5)
    ]
    assert abs(np.mean(counts) - 3000) < 300


def test_retries_reduce_discards():
    degrees = DegreeSequence(np.array([6, 6, 6, 2, 2, 2, 2, 2]))
    plain = sum(configuration_model(degrees, np.random.default_rng(s)).discards for s in range(50))
    repaired = sum(
        configuration_model(degrees, np.random.default_rng(s), max_retries=5).discards for s in range(50)
    )
    assert repaired <= plain


def test_rematch_never_duplicates_or_reforms_forbidden(rng):
    base = Graph(6, frozenset({(0, 1), (2, 3)}))
    forbidden = frozenset({(4, 5)})
    for _ in range(50):
        result = rematch_stubs(base, [4, 5, 0, 2], rng, forbidden=forbidden)
        assert base.edges <= result.graph.edges
        assert (4, 5) not in result.graph.edges
        assert result.graph.edge_count == 2 + len(result.added)
        assert len(result.added) + result.discards == 2


def test_rematching_a_fifth_of_the_edges_loses_few(poisson_graph):
    edges = poisson_graph.sorted_edges()
    ratios = []
    for seed in range(50):
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(edges), size=len(edges) // 5, replace=False)
        broken = [edges[i] for i in picked]
        remaining = poisson_graph.without_edges(broken)
        result = rematch_stubs(remaining, StubPool.from_edges(broken), rng)
        assert result.graph.edge_count == poisson_graph.edge_count - result.discards
        ratios.append(result.discards / poisson_graph.edge_count)
    assert np.mean(ratios) < 0.02
    assert max(ratios) < 0.02


def test_rematch_rejects_odd_pool(rng):
    with pytest.raises(ParameterError, match="odd"):
        rematch_stubs(Graph.empty(4), [0, 1, 2], rng)


def test_rematch_rejects_unknown_nodes(rng):
    with pytest.raises(ParameterError):
        rematch_stubs(Graph.empty(4), [0, 7], rng)


def test_degree_distribution_includes_isolated_nodes():
    graph = Graph(4, frozenset({(0, 1)}))
    assert degree_distribution(graph).masses.tolist() == [0.5, 0.5]
