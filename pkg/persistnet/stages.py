"""
Pipeline stage implementations for the empirical fitting pipeline:
pings -> period networks -> unions -> fitted models -> predicted-vs-observed distances.
"""

from typing import Any, Dict, Hashable, List, Optional, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from .config.logging_config import get_logger
from .dataio.pings import DEFAULT_RSSI_THRESHOLD, read_pings
from .dataio.sequences import (
    DAY,
    NetworkSequence,
    build_period_networks,
    fit_from_sequence,
    union_networks,
)
from .metrics.distances import get_metric, mean_distance
from .network.configuration import degree_distribution
from .network.persistence import ModelKind
from .network.temporal import evolve
from .pipeline import PipelineStage
from .seeding import child_rng

logger = get_logger("stages")


class LoadPings(PipelineStage):
    """Reads the ping CSV and keeps strong contact pings."""

    def __init__(self, path: str, rssi_threshold: float = DEFAULT_RSSI_THRESHOLD):
        self.path = path
        self.rssi_threshold = rssi_threshold

    def process(self, context: Dict[str, Any]) -> None:
        context["pings"] = read_pings(self.path, self.rssi_threshold)


class BuildPeriodNetworks(PipelineStage):
    """One contact network per period (daily by default)."""

    def __init__(
        self,
        period_length: int = DAY,
        n_periods: Optional[int] = None,
        roster: Optional[Sequence[Hashable]] = None,
    ):
        self.period_length = period_length
        self.n_periods = n_periods
        self.roster = roster

    def process(self, context: Dict[str, Any]) -> None:
        pings = self.require(context, "pings")
        context["periods"] = build_period_networks(
            pings, self.period_length, self.n_periods, self.roster
        )


class UnionPeriods(PipelineStage):
    """Merges consecutive periods, e.g. seven days into a week."""

    def __init__(self, group_size: int):
        self.group_size = group_size

    def process(self, context: Dict[str, Any]) -> None:
        periods: NetworkSequence = self.require(context, "periods")
        context["sequence"] = union_networks(periods, self.group_size)
        logger.info(
            f"Merged {len(periods)} periods into {len(context['sequence'])} networks; "
            f"edges: {[g.edge_count for g in context['sequence'].graphs]}"
        )


class FitModels(PipelineStage):
    """Fits each requested persistence model to the sequence."""

    def __init__(
        self, kinds: Sequence[str] = ("m0", "m1", "m2", "m3"), window: Optional[int] = None
    ):
        self.kinds = [ModelKind(kind) for kind in kinds]
        self.window = window

    def process(self, context: Dict[str, Any]) -> None:
        sequence = self.require(context, "sequence")
        context["models"] = {
            kind.value: fit_from_sequence(sequence, kind, self.window) for kind in self.kinds
        }


class PredictAndCompare(PipelineStage):
    """Evolves the first observed network under every fitted model and measures how far the
    predicted degree distributions land from the observed ones.

    A run's distance is the mean over the predicted snapshots 1..T; the stage reports the mean
    and sample standard deviation of that quantity over ``runs`` seeded runs.
    """

    def __init__(
        self,
        runs: int = 100,
        seed: int = 0,
        metrics: Sequence[str] = ("tv", "hellinger"),
        evolution_options: Optional[Dict[str, Any]] = None,
        progress: bool = False,
    ):
        self.runs = runs
        self.seed = seed
        self.metrics = list(metrics)
        self.evolution_options = evolution_options or {}
        self.progress = progress

    def process(self, context: Dict[str, Any]) -> None:
        sequence: NetworkSequence = self.require(context, "sequence")
        models = self.require(context, "models")
        observed = [degree_distribution(g) for g in sequence.graphs]
        steps = len(sequence) - 1
        metric_fns = {name: get_metric(name) for name in self.metrics}

        per_run: Dict[str, Dict[str, List[float]]] = {}
        rows = []
        for label, model in models.items():
            scores: Dict[str, List[float]] = {name: [] for name in self.metrics}
            for r in tqdm(range(self.runs), desc=f"predict {label}", disable=not self.progress):
                rng = child_rng(self.seed, r)
                tn = evolve(sequence.graphs[0], model, steps, rng, **self.evolution_options)
                predicted = [degree_distribution(g) for g in tn.snapshots[1:]]
                for name, fn in metric_fns.items():
                    scores[name].append(mean_distance(list(zip(predicted, observed[1:])), fn))
            per_run[label] = scores
            for name, values in scores.items():
                rows.append(
                    {
                        "model": label,
                        "fitted": model.label,
                        "metric": name,
                        "mean": float(np.mean(values)),
                        "sd": float(np.std(values, ddof=1)) if len(values) > 1 else 0.0,
                        "runs": len(values),
                    }
                )
        context["run_distances"] = per_run
        context["distances"] = pd.DataFrame(rows)
