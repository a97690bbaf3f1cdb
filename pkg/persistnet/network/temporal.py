"""
Temporal configuration model engine: evolves G_0 into G_0..G_T under a persistence model.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..config.logging_config import get_logger
from ..errors import ParameterError
from .configuration import rematch_stubs
from .graph import Edge, Graph, StubPool
from .persistence import ModelKind, PersistenceModel

logger = get_logger("network.temporal")

DEFAULT_REMATCH_RETRIES = 0


@dataclass(frozen=True)
class StepStats:
    """Bookkeeping of one transition G_{t-1} -> G_t."""
    step: int
    previous_edges: int  # X_{t-1}^+
    survived: int  # X_t
    broken: int
    rewired: int  # Y_t
    discards: int

    @property
    def survival_ratio(self) -> float:
        return self.survived / self.previous_edges if self.previous_edges else float("nan")


@dataclass
class TemporalNetwork:
    """Snapshots G_0..G_T with the engine state left after the last step."""
    model: PersistenceModel
    snapshots: List[Graph]
    step_stats: List[StepStats] = field(default_factory=list)
    edge_persistence: Dict[Edge, float] = field(default_factory=dict)
    node_persistence: Optional[np.ndarray] = None
    # persistence probabilities of G_0 edges that have survived every step so far, per snapshot
    survivor_persistence: List[np.ndarray] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.snapshots) - 1

    @property
    def node_count(self) -> int:
        return self.snapshots[0].node_count

    @property
    def initial(self) -> Graph:
        return self.snapshots[0]

    def __getitem__(self, t: int) -> Graph:
        return self.snapshots[t]

    def __len__(self) -> int:
        return len(self.snapshots)


class TemporalEvolver:
    """Stepwise TCM engine.

    The probability assigned to an edge at snapshot s governs the transition s -> s+1.
    Under a window T0 fresh probabilities are drawn at every snapshot s with s % T0 == 0.
    """

    def __init__(
        self,
        initial: Graph,
        model: PersistenceModel,
        rng: np.random.Generator,
        max_retries: int = DEFAULT_REMATCH_RETRIES,
        forbid_reformation: bool = True,
    ):
        self.model = model
        self.rng = rng
        self.max_retries = max_retries
        self.forbid_reformation = forbid_reformation
        self.graph = initial
        self.t = 0
        self.edge_prob: Dict[Edge, float] = {}
        self.node_prob: Optional[np.ndarray] = None
        self.dyad_cache: Dict[Edge, float] = {}

        if model.kind is ModelKind.MODEL2:
            edges = initial.sorted_edges()
            draws = model.w.sample(rng, len(edges))
            self.edge_prob = dict(zip(edges, draws.tolist()))
            if model.fixed_forever:
                self.dyad_cache = self.edge_prob
        elif model.kind is ModelKind.MODEL3:
            self.node_prob = model.w.sample(rng, initial.node_count)

        self.survivors = set(initial.edges) if model.is_heterogeneous else set()
        self.survivor_persistence: List[np.ndarray] = []
        if model.is_heterogeneous:
            self.survivor_persistence.append(self._probabilities(sorted(self.survivors)))

    def _probabilities(self, edges: Sequence[Edge]) -> np.ndarray:
        if not edges:
            return np.empty(0)
        if self.model.kind is ModelKind.MODEL2:
            return np.fromiter((self.edge_prob[e] for e in edges), dtype=float, count=len(edges))
        if self.model.kind is ModelKind.MODEL3:
            pairs = np.asarray(edges, dtype=np.int64)
            return self.node_prob[pairs[:, 0]] * self.node_prob[pairs[:, 1]]
        return np.full(len(edges), float(self.model.p))

    def _refresh(self) -> None:
        if self.model.kind is ModelKind.MODEL2:
            edges = self.graph.sorted_edges()
            self.edge_prob = dict(zip(edges, self.model.w.sample(self.rng, len(edges)).tolist()))
        elif self.model.kind is ModelKind.MODEL3:
            self.node_prob = self.model.w.sample(self.rng, self.graph.node_count)
        logger.debug(f"Persistence probabilities redrawn at snapshot {self.t}")

    def _assign_new(self, added: Sequence[Edge], broken: Sequence[Edge]) -> None:
        if self.model.kind is not ModelKind.MODEL2:
            return
        if self.model.fixed_forever:
            # a dyad keeps its first draw even after breaking and re-forming
            for edge in added:
                if edge not in self.dyad_cache:
                    self.dyad_cache[edge] = float(self.model.w.sample(self.rng, 1)[0])
            self.edge_prob = self.dyad_cache
            return
        for edge in broken:
            self.edge_prob.pop(edge, None)
        if added:
            draws = self.model.w.sample(self.rng, len(added)).tolist()
            self.edge_prob.update(zip(added, draws))

    def current_probabilities(self) -> Dict[Edge, float]:
        """Persistence probability of every edge of the current snapshot."""
        edges = self.graph.sorted_edges()
        return dict(zip(edges, self._probabilities(edges).tolist()))

    def step(self) -> StepStats:
        """Advance one transition and return its bookkeeping."""
        if self.t > 0 and self.model.is_boundary(self.t):
            self._refresh()

        edges = self.graph.sorted_edges()
        probs = self._probabilities(edges)
        keep = self.rng.random(len(edges)) < probs
        survived = [edge for edge, kept in zip(edges, keep) if kept]
        broken = [edge for edge, kept in zip(edges, keep) if not kept]

        result = rematch_stubs(
            Graph(self.graph.node_count, frozenset(survived)),
            StubPool.from_edges(broken),
            self.rng,
            max_retries=self.max_retries,
            forbidden=frozenset(broken) if self.forbid_reformation else None,
        )
        self._assign_new(result.added, broken)

        self.t += 1
        self.graph = result.graph
        stats = StepStats(
            step=self.t,
            previous_edges=len(edges),
            survived=len(survived),
            broken=len(broken),
            rewired=len(result.added),
            discards=result.discards,
        )
        if self.model.is_heterogeneous:
            self.survivors.intersection_update(survived)
            self.survivor_persistence.append(self._probabilities(sorted(self.survivors)))

        logger.debug(
            f"Step {self.t}: survived={stats.survived}/{stats.previous_edges} "
            f"rewired={stats.rewired} discards={stats.discards}"
        )
        return stats


def evolve(
    initial: Graph,
    model: PersistenceModel,
    steps: int,
    rng: np.random.Generator,
    max_retries: int = DEFAULT_REMATCH_RETRIES,
    forbid_reformation: bool = True,
) -> TemporalNetwork:
    """Produce G_0..G_T from ``initial`` under ``model``."""
    if steps < 0:
        raise ParameterError(f"steps must be non-negative, got {steps}")

    evolver = TemporalEvolver(initial, model, rng, max_retries, forbid_reformation)
    snapshots = [initial]
    stats: List[StepStats] = []
    for _ in range(steps):
        stats.append(evolver.step())
        snapshots.append(evolver.graph)

    lost = initial.edge_count - snapshots[-1].edge_count
    logger.info(
        f"Evolved {model.label} for {steps} steps on N={initial.node_count}: "
        f"{initial.edge_count} -> {snapshots[-1].edge_count} edges ({lost} lost to discards)"
    )
    return TemporalNetwork(
        model=model,
        snapshots=snapshots,
        step_stats=stats,
        edge_persistence=evolver.current_probabilities(),
        node_persistence=None if evolver.node_prob is None else evolver.node_prob.copy(),
        survivor_persistence=evolver.survivor_persistence,
    )


@dataclass(frozen=True)
class DriftRow:
    step: int
    survivors: int
    q1: float
    median: float
    q3: float


def persistence_drift_report(tn: TemporalNetwork) -> List[DriftRow]:
    """Quartiles of the persistence probabilities of G_0 edges still alive at each step."""
    if not tn.model.is_heterogeneous:
        raise ParameterError(
            f"{tn.model.kind.value} has a single persistence probability; no drift to report"
        )
    if not tn.model.fixed_forever:
        raise ParameterError("Drift is only defined for fixed-forever persistence probabilities")

    rows = []
    for step, probs in enumerate(tn.survivor_persistence):
        if probs.size:
            q1, median, q3 = np.quantile(probs, [0.25, 0.5, 0.75])
        else:
            q1 = median = q3 = float("nan")
        rows.append(DriftRow(step, int(probs.size), float(q1), float(median), float(q3)))
    return rows
