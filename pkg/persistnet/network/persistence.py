"""
Persistence models of the temporal configuration model.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy import stats

from ..errors import ParameterError


class ModelKind(str, Enum):
    """Which persistence structure drives edge survival."""
    MODEL0 = "m0"
    MODEL1 = "m1"
    MODEL2 = "m2"
    MODEL3 = "m3"


@dataclass(frozen=True)
class BetaParams:
    """Shape parameters of a Beta distribution on [0, 1]."""
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ParameterError(f"Beta shapes must be positive, got ({self.alpha}, {self.beta})")
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ParameterError("Beta shapes must be finite")

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    @property
    def second_moment(self) -> float:
        total = self.alpha + self.beta
        return self.alpha * (self.alpha + 1) / (total * (total + 1))

    @property
    def variance(self) -> float:
        total = self.alpha + self.beta
        return self.alpha * self.beta / (total ** 2 * (total + 1))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.beta(self.alpha, self.beta, size=size)

    def quantiles(self, probs) -> np.ndarray:
        return stats.beta.ppf(probs, self.alpha, self.beta)

    def __str__(self) -> str:
        return f"Beta({self.alpha:.4g}, {self.beta:.4g})"


@dataclass(frozen=True)
class PersistenceModel:
    """Model 0/1/2/3 with their parameters.

    ``window`` is the redraw period T0 for Models 2/3; ``None`` keeps every draw for the
    whole run.
    """
    kind: ModelKind
    p: Optional[float] = None
    w: Optional[BetaParams] = None
    window: Optional[int] = None

    def __post_init__(self):
        kind = ModelKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is ModelKind.MODEL0:
            object.__setattr__(self, "p", 0.0)
        if kind in (ModelKind.MODEL0, ModelKind.MODEL1):
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ParameterError(f"Persistence probability must lie in [0, 1], got {self.p}")
            if self.w is not None or self.window is not None:
                raise ParameterError(f"{kind.value} takes neither a distribution nor a window")
        else:
            if self.w is None:
                raise ParameterError(f"{kind.value} needs a Beta distribution W")
            if self.p is not None:
                raise ParameterError(f"{kind.value} does not take a fixed p")
            if self.window is not None and self.window < 1:
                raise ParameterError(f"Window length must be at least 1, got {self.window}")

    @classmethod
    def model0(cls) -> "PersistenceModel":
        return cls(ModelKind.MODEL0, p=0.0)

    @classmethod
    def model1(cls, p: float) -> "PersistenceModel":
        return cls(ModelKind.MODEL1, p=p)

    @classmethod
    def model2(cls, w: BetaParams, window: Optional[int] = None) -> "PersistenceModel":
        return cls(ModelKind.MODEL2, w=w, window=window)

    @classmethod
    def model3(cls, w: BetaParams, window: Optional[int] = None) -> "PersistenceModel":
        return cls(ModelKind.MODEL3, w=w, window=window)

    @property
    def is_heterogeneous(self) -> bool:
        return self.kind in (ModelKind.MODEL2, ModelKind.MODEL3)

    @property
    def fixed_forever(self) -> bool:
        return self.is_heterogeneous and self.window is None

    def is_boundary(self, snapshot: int) -> bool:
        """Whether fresh probabilities are drawn at ``snapshot``."""
        return self.window is not None and snapshot % self.window == 0

    def first_moment(self) -> float:
        """E(p_ij): the target of Z1 and Z-bar."""
        if not self.is_heterogeneous:
            return float(self.p)
        if self.kind is ModelKind.MODEL2:
            return self.w.mean
        return self.w.mean ** 2

    def second_moment(self) -> float:
        """E(p_ij^2): the target of V1 and V-bar."""
        if not self.is_heterogeneous:
            return float(self.p) ** 2
        if self.kind is ModelKind.MODEL2:
            return self.w.second_moment
        return self.w.second_moment ** 2

    @property
    def label(self) -> str:
        if self.kind is ModelKind.MODEL0:
            return "m0"
        if self.kind is ModelKind.MODEL1:
            return f"m1:{self.p:g}"
        suffix = f"@{self.window}" if self.window is not None else ""
        return f"{self.kind.value}:{self.w.alpha:g},{self.w.beta:g}{suffix}"

    def __str__(self) -> str:
        return self.label
