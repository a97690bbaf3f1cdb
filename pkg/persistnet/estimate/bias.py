"""
Replication-level accuracy of the estimators.
"""

from typing import NamedTuple, Sequence, Tuple

import numpy as np

from ..errors import EstimationError


class BiasStats(NamedTuple):
    abs_rel_bias: float
    sd_abs_rel_bias: float


def signed_relative_errors(estimates: Sequence[Tuple[float, float]]) -> np.ndarray:
    """(estimate - truth) / |truth| for every (estimate, truth) pair."""
    if len(estimates) == 0:
        raise EstimationError("No estimates to summarise")
    pairs = np.asarray(estimates, dtype=float).reshape(-1, 2)
    if np.any(pairs[:, 1] == 0):
        raise EstimationError("Relative bias needs non-zero truths")
    return (pairs[:, 0] - pairs[:, 1]) / np.abs(pairs[:, 1])


def relative_errors(estimates: Sequence[Tuple[float, float]]) -> np.ndarray:
    """|estimate - truth| / |truth| for every (estimate, truth) pair."""
    return np.abs(signed_relative_errors(estimates))


def bias_stats(estimates: Sequence[Tuple[float, float]]) -> BiasStats:
    """AbsRelBias and SdAbsRelBias (sample standard deviation, n-1 denominator)."""
    errors = relative_errors(estimates)
    sd = float(np.std(errors, ddof=1)) if errors.size > 1 else 0.0
    return BiasStats(float(errors.mean()), sd)


def joint_bias_stats(
    first: Sequence[Tuple[float, float]], second: Sequence[Tuple[float, float]]
) -> BiasStats:
    """Bias over first- and second-moment estimates pooled into a single sample."""
    return bias_stats(list(first) + list(second))


def net_rel_bias(estimates: Sequence[Tuple[float, float]]) -> float:
    """|mean signed relative error|; over- and underestimates cancel."""
    return float(abs(signed_relative_errors(estimates).mean()))


def joint_net_rel_bias(
    first: Sequence[Tuple[float, float]], second: Sequence[Tuple[float, float]]
) -> float:
    return net_rel_bias(list(first) + list(second))
