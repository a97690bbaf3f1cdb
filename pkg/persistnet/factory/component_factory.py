import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional

import numpy as np
from pydantic import ValidationError

from ..config.logging_config import get_logger
from ..epidemics.pgf import Pgf, poisson_pgf, regular_pgf
from ..epidemics.sir import DEFAULT_EARLY_FRACTION, EpidemicParams
from ..errors import ParameterError
from ..models.reports import ExperimentConfig
from ..network.configuration import sample_constant_degrees, sample_poisson_degrees
from ..network.graph import DegreeSequence
from ..network.persistence import BetaParams, ModelKind, PersistenceModel
from ..network.temporal import DEFAULT_REMATCH_RETRIES

logger = get_logger("factory.component")

_MODEL_SPEC = re.compile(r"^(m[0-3])(?::([^@]+))?(?:@(\d+))?$")


@dataclass(frozen=True)
class DegreeLaw:
    """A named degree law such as ``poisson:6`` or ``const:4``."""
    name: str
    parameter: float

    @property
    def spec(self) -> str:
        return f"{self.name}:{self.parameter:g}"

    def sample(self, n: int, rng: np.random.Generator) -> DegreeSequence:
        return ModelFactory.DEGREE_SAMPLERS[self.name](n, self.parameter, rng)

    def pgf(self) -> Pgf:
        if self.name == "poisson":
            return poisson_pgf(self.parameter)
        return regular_pgf(int(self.parameter))


def _number(text: str, spec: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"Malformed number '{text}' in '{spec}'") from None


class ModelFactory:
    """Builds persistence models, degree laws and epidemic parameters from specs and config."""

    DEGREE_SAMPLERS: Dict[str, Callable[[int, Any, np.random.Generator], DegreeSequence]] = {
        "poisson": lambda n, mean, rng: sample_poisson_degrees(n, mean, rng),
        "const": lambda n, degree, rng: sample_constant_degrees(n, int(degree), rng),
    }

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or {}

    @staticmethod
    def parse_model(spec: str) -> PersistenceModel:
        """``m0``, ``m1:<p>``, ``m2:<alpha>,<beta>[@<T0>]`` or ``m3:<alpha>,<beta>[@<T0>]``."""
        match = _MODEL_SPEC.match(spec.strip().lower())
        if not match:
            raise ParameterError(f"Unsupported model spec: '{spec}'")
        kind, params, window = ModelKind(match.group(1)), match.group(2), match.group(3)
        if kind is ModelKind.MODEL0:
            if params or window:
                raise ParameterError("m0 takes no parameters")
            return PersistenceModel.model0()
        if kind is ModelKind.MODEL1:
            if params is None or window:
                raise ParameterError(f"Expected 'm1:<p>', got '{spec}'")
            return PersistenceModel.model1(_number(params, spec))
        shapes = (params or "").split(",")
        if len(shapes) != 2:
            raise ParameterError(f"Expected '{kind.value}:<alpha>,<beta>[@<T0>]', got '{spec}'")
        w = BetaParams(_number(shapes[0], spec), _number(shapes[1], spec))
        return PersistenceModel(kind, w=w, window=int(window) if window else None)

    @staticmethod
    def parse_degree_law(spec: str) -> DegreeLaw:
        name, _, value = spec.strip().lower().partition(":")
        if name not in ModelFactory.DEGREE_SAMPLERS or not value:
            raise ParameterError(
                f"Unsupported degree law '{spec}', expected one of "
                f"{[f'{law}:<value>' for law in ModelFactory.DEGREE_SAMPLERS]}"
            )
        parameter = _number(value, spec)
        if name == "const" and parameter != int(parameter):
            raise ParameterError(f"Constant degree must be an integer, got {value}")
        return DegreeLaw(name, parameter)

    @staticmethod
    def create_epidemic_params(beta: float, gamma: float, seeds: int = 1) -> EpidemicParams:
        return EpidemicParams(beta=beta, gamma=gamma, initial_infected=seeds)

    @staticmethod
    def create_experiment_config(**fields: Any) -> ExperimentConfig:
        """Validated experiment cell; the model and degree specs must parse."""
        try:
            config = ExperimentConfig(**{k: v for k, v in fields.items() if v is not None})
        except ValidationError as e:
            raise ParameterError(f"Invalid experiment configuration: {e}") from e
        ModelFactory.parse_model(config.model)
        ModelFactory.parse_degree_law(config.degree)
        return config

    def evolution_options(self) -> Dict[str, Any]:
        """Keyword arguments for ``evolve`` and the SIR simulator from the ``network`` section."""
        network = self.config.get("network") or {}
        options = {
            "max_retries": int(network.get("rematch_retries", DEFAULT_REMATCH_RETRIES)),
            "forbid_reformation": bool(network.get("forbid_reformation", True)),
        }
        if options["max_retries"] < 0:
            raise ParameterError("network.rematch_retries must be non-negative")
        logger.debug(f"Evolution options: {options}")
        return options

    def early_fraction(self) -> float:
        epidemics = self.config.get("epidemics") or {}
        return float(epidemics.get("early_fraction", DEFAULT_EARLY_FRACTION))

    def workers(self) -> int:
        experiments = self.config.get("experiments") or {}
        return max(1, int(experiments.get("workers", 1)))
