"""
Degree-sequence sampling and configuration-model stub matching.
"""

from dataclasses import dataclass
from typing import AbstractSet, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from ..config.logging_config import get_logger
from ..errors import ParameterError
from .graph import DegreeDistribution, DegreeSequence, Edge, Graph, StubPool

logger = get_logger("network.configuration")


@dataclass(frozen=True)
class MatchResult:
    """A graph produced by stub matching plus the matching's bookkeeping."""
    graph: Graph
    discards: int
    added: Tuple[Edge, ...] = ()


def _repair_parity(degrees: np.ndarray, rng: np.random.Generator) -> DegreeSequence:
    if int(degrees.sum()) % 2 == 0:
        return DegreeSequence(degrees)
    node = int(rng.integers(degrees.size))
    degrees[node] += 1
    logger.warning(f"Odd degree sum repaired by adding a stub to node {node}")
    return DegreeSequence(degrees, repaired=True)


def sample_poisson_degrees(n: int, mean: float, rng: np.random.Generator) -> DegreeSequence:
    """Draw ``n`` independent Poisson(mean) degrees, repairing an odd sum."""
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    if not mean > 0:
        raise ParameterError(f"Poisson mean must be positive, got {mean}")
    return _repair_parity(rng.poisson(mean, size=n).astype(np.int64), rng)


def sample_constant_degrees(n: int, degree: int, rng: np.random.Generator) -> DegreeSequence:
    """Give every node the same degree, repairing an odd sum."""
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    if degree < 0:
        raise ParameterError(f"Degree must be non-negative, got {degree}")
    return _repair_parity(np.full(n, degree, dtype=np.int64), rng)


def _pair_stubs(
    pool: np.ndarray,
    blocked: AbstractSet[Edge],
    formed: List[Edge],
    formed_set: set,
) -> List[int]:
    """Pair consecutive stubs; returns the stubs of rejected pairs."""
    rejected: List[int] = []
    for i in range(0, pool.size, 2):
        u, v = int(pool[i]), int(pool[i + 1])
        if u == v:
            rejected.extend((u, v))
            continue
        edge = (u, v) if u < v else (v, u)
        if edge in blocked or edge in formed_set:
            rejected.extend((u, v))
            continue
        formed_set.add(edge)
        formed.append(edge)
    return rejected


def _match(
    stubs: np.ndarray,
    blocked: AbstractSet[Edge],
    rng: np.random.Generator,
    max_retries: int,
) -> Tuple[List[Edge], int]:
    """Uniformly match ``stubs`` avoiding self-loops, ``blocked`` edges and duplicates.

    Each retry round pools the rejected stubs with the stubs of as many randomly dissolved
    new edges and matches them again.
    """
    if stubs.size % 2:
        raise ParameterError(f"Stub count {stubs.size} is odd")
    pool = stubs.copy()
    rng.shuffle(pool)
    formed: List[Edge] = []
    formed_set: set = set()
    rejected = _pair_stubs(pool, blocked, formed, formed_set)

    for _ in range(max_retries):
        if not rejected:
            break
        dissolve = min(len(formed), len(rejected) // 2)
        released: List[int] = []
        if dissolve:
            picked = set(rng.choice(len(formed), size=dissolve, replace=False).tolist())
            kept = []
            for index, edge in enumerate(formed):
                if index in picked:
                    released.extend(edge)
                    formed_set.discard(edge)
                else:
                    kept.append(edge)
            formed = kept
        pool = np.asarray(rejected + released, dtype=np.int64)
        rng.shuffle(pool)
        rejected = _pair_stubs(pool, blocked, formed, formed_set)

    return formed, len(rejected) // 2


def configuration_model(
    degrees: Union[DegreeSequence, Sequence[int]],
    rng: np.random.Generator,
    max_retries: int = 0,
) -> MatchResult:
    """Build a simple graph by shuffling stubs and pairing them in order.

    Pairs that would form a self-loop or a multi-edge are discarded with both stubs consumed.
    """
    if not isinstance(degrees, DegreeSequence):
        degrees = DegreeSequence(np.asarray(degrees, dtype=np.int64))
    formed, discards = _match(degrees.stubs().stubs, frozenset(), rng, max_retries)
    graph = Graph(degrees.node_count, frozenset(formed))
    pairs = degrees.stub_count // 2
    if discards > 0.01 * pairs:
        logger.warning(f"Configuration model discarded {discards} of {pairs} pairs")
    elif discards:
        logger.debug(f"Configuration model discarded {discards} of {pairs} pairs")
    return MatchResult(graph=graph, discards=discards, added=tuple(formed))


def rematch_stubs(
    graph: Graph,
    stubs: Union[StubPool, Sequence[int]],
    rng: np.random.Generator,
    max_retries: int = 0,
    forbidden: Optional[AbstractSet[Edge]] = None,
) -> MatchResult:
    """Match free stubs uniformly and add the new edges to ``graph``.

    Pairs forming a self-loop, an edge already in ``graph`` or an edge in ``forbidden``
    are discarded.
    """
    if not isinstance(stubs, StubPool):
        stubs = StubPool(np.asarray(stubs, dtype=np.int64))
    if stubs.stubs.size and (stubs.stubs.min() < 0 or stubs.stubs.max() >= graph.node_count):
        raise ParameterError("Stub pool references nodes outside the graph")
    blocked: AbstractSet[Edge] = graph.edges
    if forbidden:
        blocked = graph.edges | frozenset(forbidden)
    formed, discards = _match(stubs.stubs, blocked, rng, max_retries)
    return MatchResult(graph=graph.with_edges(formed), discards=discards, added=tuple(formed))


def degree_distribution(graph: Graph) -> DegreeDistribution:
    """Fraction of the N nodes having each degree 0..max_degree."""
    return DegreeDistribution.from_counts(nx.degree_histogram(graph.to_networkx()))
