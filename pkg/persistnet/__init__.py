"""
persistnet: temporal configuration-model networks, persistence estimation and epidemics.
"""

__version__ = "0.1.0"

from .errors import (
    DataError,
    EstimationError,
    InfeasibleMomentsError,
    ParameterError,
    PersistnetError,
)
from .network import (
    BetaParams,
    DegreeDistribution,
    Graph,
    ModelKind,
    PersistenceModel,
    TemporalNetwork,
    configuration_model,
    evolve,
)

__all__ = [
    "DataError",
    "EstimationError",
    "InfeasibleMomentsError",
    "ParameterError",
    "PersistnetError",
    "BetaParams",
    "DegreeDistribution",
    "Graph",
    "ModelKind",
    "PersistenceModel",
    "TemporalNetwork",
    "configuration_model",
    "evolve",
]
