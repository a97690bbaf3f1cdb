"""
Core pipeline interfaces for the empirical fitting stages.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from .config.logging_config import get_logger
from .errors import DataError

logger = get_logger("pipeline")


class PipelineStage(ABC):
    """Base class for all pipeline stages."""

    @abstractmethod
    def process(self, context: Dict[str, Any]) -> None:
        """Read inputs from the context and store the stage's outputs in it."""
        pass

    def require(self, context: Dict[str, Any], key: str) -> Any:
        if key not in context:
            raise DataError(f"{type(self).__name__} needs '{key}' from an earlier stage")
        return context[key]


class Pipeline:
    """Runs stages in order over one shared context."""

    def __init__(self, stages: List[PipelineStage]):
        self.stages = stages

    def run(self, context: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        context = {} if context is None else context
        for stage in self.stages:
            logger.debug(f"Running stage {type(stage).__name__}")
            stage.process(context)
        return context
