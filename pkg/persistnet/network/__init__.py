"""
Graphs, configuration-model matching and the temporal configuration model engine.
"""

from .configuration import (
    MatchResult,
    configuration_model,
    degree_distribution,
    rematch_stubs,
    sample_constant_degrees,
    sample_poisson_degrees,
)
from .graph import DegreeDistribution, DegreeSequence, Edge, Graph, StubPool
from .persistence import BetaParams, ModelKind, PersistenceModel
from .temporal import (
    DriftRow,
    StepStats,
    TemporalEvolver,
    TemporalNetwork,
    evolve,
    persistence_drift_report,
)

__all__ = [
    "BetaParams",
    "DegreeDistribution",
    "DegreeSequence",
    "DriftRow",
    "Edge",
    "Graph",
    "MatchResult",
    "ModelKind",
    "PersistenceModel",
    "StepStats",
    "StubPool",
    "TemporalEvolver",
    "TemporalNetwork",
    "configuration_model",
    "degree_distribution",
    "evolve",
    "persistence_drift_report",
    "rematch_stubs",
    "sample_constant_degrees",
    "sample_poisson_degrees",
]
