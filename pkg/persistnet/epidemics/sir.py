"""
Discrete-time SIR epidemic co-generated with a temporal configuration model.

Within step t: infectious nodes transmit along the edges of G_t, nodes infectious at the
start of the step recover, then the network evolves to G_{t+1}.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, FrozenSet, Optional, TextIO, Union

import numpy as np
import pandas as pd

from ..config.logging_config import get_logger
from ..errors import ParameterError
from ..network.graph import Graph
from ..network.persistence import PersistenceModel
from ..network.temporal import DEFAULT_REMATCH_RETRIES, TemporalEvolver

logger = get_logger("epidemics.sir")

SUSCEPTIBLE = 0
INFECTIOUS = 1
RECOVERED = 2

NEVER = -1
DEFAULT_EARLY_FRACTION = 0.01


@dataclass(frozen=True)
class EpidemicParams:
    """Per-step transmission and recovery probabilities plus the seeding."""
    beta: float
    gamma: float
    initial_infected: Union[int, FrozenSet[int]] = 1

    def __post_init__(self):
        if not 0.0 <= self.beta <= 1.0:
            raise ParameterError(f"beta must lie in [0, 1], got {self.beta}")
        if not 0.0 < self.gamma <= 1.0:
            raise ParameterError(f"gamma must lie in (0, 1], got {self.gamma}")
        if isinstance(self.initial_infected, int):
            if self.initial_infected < 1:
                raise ParameterError("At least one node must be seeded")
        else:
            seeds = frozenset(int(node) for node in self.initial_infected)
            if not seeds:
                raise ParameterError("At least one node must be seeded")
            object.__setattr__(self, "initial_infected", seeds)

    def seeds(self, node_count: int, rng: np.random.Generator) -> np.ndarray:
        """Seed nodes, drawn uniformly when only a count is given."""
        if isinstance(self.initial_infected, int):
            if self.initial_infected > node_count:
                raise ParameterError(f"Cannot seed {self.initial_infected} of {node_count} nodes")
            return np.sort(rng.choice(node_count, size=self.initial_infected, replace=False))
        seeds = np.array(sorted(self.initial_infected), dtype=np.int64)
        if seeds[0] < 0 or seeds[-1] >= node_count:
            raise ParameterError("Seed nodes outside the graph")
        return seeds


@dataclass
class EpidemicTrace:
    """Compartment counts per step and infection history per node.

    Index 0 of the count arrays is the state right after seeding. ``NEVER`` (-1) marks a node
    that was never infected, has not recovered, or (for ``infector``) was a seed.
    """
    node_count: int
    susceptible: np.ndarray
    infectious: np.ndarray
    recovered: np.ndarray
    infected_at: np.ndarray
    recovered_at: np.ndarray
    infector: np.ndarray
    generation: np.ndarray
    early_fraction: float = DEFAULT_EARLY_FRACTION

    @property
    def steps(self) -> int:
        return int(self.susceptible.size - 1)

    @property
    def seeds(self) -> np.ndarray:
        return np.flatnonzero(self.generation == 0)

    @property
    def final_size(self) -> int:
        return int(np.count_nonzero(self.infected_at != NEVER))

    def secondary_infections(self) -> np.ndarray:
        """Number of nodes each node infected."""
        infectors = self.infector[self.infector != NEVER]
        return np.bincount(infectors, minlength=self.node_count)

    def measured_r0(self) -> float:
        """Mean secondary infections of the seeds."""
        return float(self.secondary_infections()[self.seeds].mean())

    def early_infectees(self, early_fraction: Optional[float] = None) -> np.ndarray:
        """Non-seed nodes infected while fewer than ``early_fraction * N`` infections had
        happened in earlier steps, and that recovered before the trace ended."""
        fraction = self.early_fraction if early_fraction is None else early_fraction
        infected = self.infected_at != NEVER
        times = np.sort(self.infected_at[infected])
        earlier = np.searchsorted(times, self.infected_at, side="left")
        qualifying = (
            infected
            & (self.generation >= 1)
            & (earlier < fraction * self.node_count)
            & (self.recovered_at != NEVER)
        )
        return np.flatnonzero(qualifying)

    def measured_r_star(self, early_fraction: Optional[float] = None) -> float:
        """Mean secondary infections of early-stage infectees, seeds excluded (NaN if none)."""
        nodes = self.early_infectees(early_fraction)
        if nodes.size == 0:
            return float("nan")
        return float(self.secondary_infections()[nodes].mean())

    def secondary_by_generation(self) -> Dict[int, float]:
        """Mean secondary infections of the recovered nodes of each generation."""
        secondary = self.secondary_infections()
        done = self.recovered_at != NEVER
        return {
            int(g): float(secondary[done & (self.generation == g)].mean())
            for g in np.unique(self.generation[done])
        }

    def counts_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "step": np.arange(self.steps + 1),
                "S": self.susceptible,
                "I": self.infectious,
                "R": self.recovered,
            }
        )

    def nodes_frame(self) -> pd.DataFrame:
        """One row per node that was ever infected."""
        nodes = np.flatnonzero(self.infected_at != NEVER)
        return pd.DataFrame(
            {
                "node": nodes,
                "infected_at": self.infected_at[nodes],
                "recovered_at": self.recovered_at[nodes],
                "infector": self.infector[nodes],
            }
        )

    def write_counts(self, stream: Union[TextIO, str, Path]) -> None:
        self.counts_frame().to_csv(stream, index=False, lineterminator="\n")

    def write_nodes(self, stream: Union[TextIO, str, Path]) -> None:
        self.nodes_frame().to_csv(stream, index=False, lineterminator="\n")


class SIRSimulator:
    """Runs the epidemic and the network evolution in lockstep."""

    def __init__(
        self,
        initial: Graph,
        model: PersistenceModel,
        params: EpidemicParams,
        rng: np.random.Generator,
        max_retries: int = DEFAULT_REMATCH_RETRIES,
        forbid_reformation: bool = True,
    ):
        self.params = params
        self.rng = rng
        self.evolver = TemporalEvolver(initial, model, rng, max_retries, forbid_reformation)
        n = initial.node_count
        self.state = np.full(n, SUSCEPTIBLE, dtype=np.int8)
        self.infected_at = np.full(n, NEVER, dtype=np.int64)
        self.recovered_at = np.full(n, NEVER, dtype=np.int64)
        self.infector = np.full(n, NEVER, dtype=np.int64)
        self.generation = np.full(n, NEVER, dtype=np.int64)

        seeds = params.seeds(n, rng)
        self.state[seeds] = INFECTIOUS
        self.infected_at[seeds] = 0
        self.generation[seeds] = 0
        self.t = 0
        self._counts = [self._compartments()]

    @property
    def graph(self) -> Graph:
        return self.evolver.graph

    @property
    def infectious_count(self) -> int:
        return int(np.count_nonzero(self.state == INFECTIOUS))

    def _compartments(self):
        counts = np.bincount(self.state, minlength=3)
        return int(counts[SUSCEPTIBLE]), int(counts[INFECTIOUS]), int(counts[RECOVERED])

    def _transmit(self) -> np.ndarray:
        edges = self.graph.sorted_edges()
        if not edges:
            return np.empty(0, dtype=np.int64)
        pairs = np.asarray(edges, dtype=np.int64)
        left, right = self.state[pairs[:, 0]], self.state[pairs[:, 1]]
        forward = (left == INFECTIOUS) & (right == SUSCEPTIBLE)
        backward = (right == INFECTIOUS) & (left == SUSCEPTIBLE)
        exposed = np.flatnonzero(forward | backward)
        if exposed.size == 0:
            return np.empty(0, dtype=np.int64)
        success = self.rng.random(exposed.size) < self.params.beta

        infected = []
        for index in exposed[success]:
            source, target = pairs[index]
            if backward[index]:
                source, target = target, source
            # first success in edge order is credited
            if self.infected_at[target] != NEVER:
                continue
            self.infected_at[target] = self.t
            self.infector[target] = source
            self.generation[target] = self.generation[source] + 1
            infected.append(target)
        return np.asarray(infected, dtype=np.int64)

    def step(self) -> None:
        """One SIR step on G_t followed by one network transition."""
        self.t += 1
        was_infectious = np.flatnonzero(self.state == INFECTIOUS)
        newly_infected = self._transmit()

        recovering = was_infectious[self.rng.random(was_infectious.size) < self.params.gamma]
        self.state[recovering] = RECOVERED
        self.recovered_at[recovering] = self.t
        self.state[newly_infected] = INFECTIOUS

        self.evolver.step()
        self._counts.append(self._compartments())
        logger.debug(
            f"SIR step {self.t}: +{newly_infected.size} infected, {recovering.size} recovered"
        )

    def run(self, max_steps: int, early_fraction: float = DEFAULT_EARLY_FRACTION) -> EpidemicTrace:
        if max_steps < 0:
            raise ParameterError(f"max_steps must be non-negative, got {max_steps}")
        while self.t < max_steps and self.infectious_count > 0:
            self.step()
        return self.trace(early_fraction)

    def trace(self, early_fraction: float = DEFAULT_EARLY_FRACTION) -> EpidemicTrace:
        counts = np.asarray(self._counts, dtype=np.int64)
        return EpidemicTrace(
            node_count=self.state.size,
            susceptible=counts[:, 0],
            infectious=counts[:, 1],
            recovered=counts[:, 2],
            infected_at=self.infected_at.copy(),
            recovered_at=self.recovered_at.copy(),
            infector=self.infector.copy(),
            generation=self.generation.copy(),
            early_fraction=early_fraction,
        )


def simulate_sir(
    initial: Graph,
    model: PersistenceModel,
    params: EpidemicParams,
    max_steps: int,
    rng: np.random.Generator,
    early_fraction: float = DEFAULT_EARLY_FRACTION,
    max_retries: int = DEFAULT_REMATCH_RETRIES,
    forbid_reformation: bool = True,
) -> EpidemicTrace:
    """Simulate until no node is infectious or ``max_steps`` steps have run."""
    if not 0.0 < early_fraction <= 1.0:
        raise ParameterError(f"early_fraction must lie in (0, 1], got {early_fraction}")
    simulator = SIRSimulator(initial, model, params, rng, max_retries, forbid_reformation)
    trace = simulator.run(max_steps, early_fraction)
    logger.info(
        f"SIR on {model.label} (beta={params.beta}, gamma={params.gamma}) ended at step "
        f"{trace.steps}: final size {trace.final_size}/{trace.node_count}, "
        f"R0={trace.measured_r0():.4g}, R*={trace.measured_r_star():.4g}"
    )
    return trace
