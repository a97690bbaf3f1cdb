"""
Simple undirected graphs, degree sequences, stub pools and degree distributions.
"""

from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, Iterator, List, Mapping, Sequence, Tuple

import networkx as nx
import numpy as np

from ..errors import ParameterError

Edge = Tuple[int, int]


def canonical_edge(u: int, v: int) -> Edge:
    """Order an unordered node pair as (min, max)."""
    u, v = int(u), int(v)
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """An immutable simple graph over dense node indices 0..N-1."""
    node_count: int
    edges: FrozenSet[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.node_count < 1:
            raise ParameterError(f"node_count must be positive, got {self.node_count}")
        edges = frozenset(canonical_edge(u, v) for u, v in self.edges)
        for u, v in edges:
            if u == v:
                raise ParameterError(f"Self-loop on node {u}")
            if u < 0 or v >= self.node_count:
                raise ParameterError(f"Edge ({u}, {v}) outside node range [0, {self.node_count})")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def empty(cls, node_count: int) -> "Graph":
        return cls(node_count, frozenset())

    @classmethod
    def from_networkx(cls, graph: nx.Graph) -> "Graph":
        """Build from a networkx graph whose nodes are 0..N-1."""
        nodes = sorted(graph.nodes())
        if nodes != list(range(len(nodes))):
            graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
        return cls(graph.number_of_nodes(), frozenset(graph.edges()))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(self.sorted_edges())
        return graph

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self.edges

    def sorted_edges(self) -> List[Edge]:
        """Edges in lexicographic order; the iteration order every stochastic step relies on."""
        return sorted(self.edges)

    def degrees(self) -> np.ndarray:
        degrees = np.zeros(self.node_count, dtype=np.int64)
        if self.edges:
            endpoints = np.fromiter(
                (node for edge in self.edges for node in edge),
                dtype=np.int64,
                count=2 * len(self.edges),
            )
            np.add.at(degrees, endpoints, 1)
        return degrees

    def neighbors(self) -> List[List[int]]:
        adjacency: List[List[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.sorted_edges():
            adjacency[u].append(v)
            adjacency[v].append(u)
        return adjacency

    def with_edges(self, added: Iterable[Edge]) -> "Graph":
        return Graph(self.node_count, self.edges | frozenset(added))

    def without_edges(self, removed: Iterable[Edge]) -> "Graph":
        return Graph(self.node_count, self.edges - frozenset(removed))

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.sorted_edges())

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class DegreeSequence:
    """Requested degrees k_i for every node; the sum is always even."""
    degrees: np.ndarray
    repaired: bool = False

    def __post_init__(self):
        degrees = np.array(self.degrees, dtype=np.int64)
        if degrees.ndim != 1 or degrees.size < 1:
            raise ParameterError("A degree sequence needs at least one node")
        if np.any(degrees < 0):
            raise ParameterError("Degrees must be non-negative")
        if int(degrees.sum()) % 2:
            raise ParameterError(f"Degree sum {int(degrees.sum())} is odd")
        degrees.setflags(write=False)
        object.__setattr__(self, "degrees", degrees)

    @property
    def node_count(self) -> int:
        return int(self.degrees.size)

    @property
    def stub_count(self) -> int:
        return int(self.degrees.sum())

    def stubs(self) -> "StubPool":
        return StubPool(np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees))


@dataclass(frozen=True)
class StubPool:
    """Free half-edges: node i appears once per unmatched stub it owns."""
    stubs: np.ndarray

    def __post_init__(self):
        stubs = np.asarray(self.stubs, dtype=np.int64).ravel()
        object.__setattr__(self, "stubs", stubs)

    @classmethod
    def from_edges(cls, edges: Sequence[Edge]) -> "StubPool":
        """The stubs released by breaking ``edges``."""
        if not edges:
            return cls(np.empty(0, dtype=np.int64))
        return cls(np.asarray(edges, dtype=np.int64).ravel())

    def __len__(self) -> int:
        return int(self.stubs.size)


@dataclass(frozen=True)
class DegreeDistribution:
    """Probability mass over degrees 0..k_max."""
    masses: np.ndarray

    def __post_init__(self):
        masses = np.array(self.masses, dtype=float).ravel()
        if masses.size == 0:
            raise ParameterError("A degree distribution needs at least one mass")
        if np.any(masses < 0):
            raise ParameterError("Degree masses must be non-negative")
        total = float(masses.sum())
        if abs(total - 1.0) > 1e-9:
            raise ParameterError(f"Degree masses sum to {total}, expected 1")
        masses.setflags(write=False)
        object.__setattr__(self, "masses", masses)

    @classmethod
    def from_counts(cls, counts: Sequence[float]) -> "DegreeDistribution":
        counts = np.asarray(counts, dtype=float)
        return cls(counts / counts.sum())

    @classmethod
    def from_mapping(cls, masses: Mapping[int, float]) -> "DegreeDistribution":
        vector = np.zeros(max(masses) + 1)
        for degree, mass in masses.items():
            vector[degree] = mass
        return cls(vector)

    @property
    def max_degree(self) -> int:
        return int(self.masses.size - 1)

    def mass(self, degree: int) -> float:
        return float(self.masses[degree]) if 0 <= degree < self.masses.size else 0.0

    def padded(self, max_degree: int) -> np.ndarray:
        """Masses zero-padded to support 0..max_degree."""
        out = np.zeros(max(max_degree, self.max_degree) + 1)
        out[: self.masses.size] = self.masses
        return out

    def aligned(self, other: "DegreeDistribution") -> Tuple[np.ndarray, np.ndarray]:
        top = max(self.max_degree, other.max_degree)
        return self.padded(top), other.padded(top)

    def mean(self) -> float:
        return float(np.dot(np.arange(self.masses.size), self.masses))
