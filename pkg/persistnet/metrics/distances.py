"""
Distances between degree distributions.

Supports are aligned by zero-padding the shorter distribution to the larger maximum degree.
"""

from typing import Callable, Dict, Sequence, Tuple, Union

import numpy as np

from ..errors import ParameterError
from ..network.configuration import degree_distribution
from ..network.graph import DegreeDistribution, Graph

Metric = Callable[[DegreeDistribution, DegreeDistribution], float]


def total_variation(p: DegreeDistribution, q: DegreeDistribution) -> float:
    """Half the L1 distance."""
    a, b = p.aligned(q)
    return float(min(1.0, 0.5 * np.abs(a - b).sum()))


def hellinger(p: DegreeDistribution, q: DegreeDistribution) -> float:
    """(1/sqrt 2) * ||sqrt(p) - sqrt(q)||_2."""
    a, b = p.aligned(q)
    return float(min(1.0, np.sqrt(np.sum((np.sqrt(a) - np.sqrt(b)) ** 2)) / np.sqrt(2.0)))


def hellinger_affinity(p: DegreeDistribution, q: DegreeDistribution) -> float:
    """Hellinger distance through the Bhattacharyya coefficient: sqrt(1 - sum sqrt(p q))."""
    a, b = p.aligned(q)
    return float(np.sqrt(max(0.0, 1.0 - np.sum(np.sqrt(a * b)))))


METRICS: Dict[str, Metric] = {
    "tv": total_variation,
    "hellinger": hellinger,
}


def get_metric(name: str) -> Metric:
    try:
        return METRICS[name.lower()]
    except KeyError:
        expected = sorted(METRICS)
        raise ParameterError(f"Unknown metric '{name}', expected one of {expected}") from None


def _as_distribution(item: Union[Graph, DegreeDistribution]) -> DegreeDistribution:
    return degree_distribution(item) if isinstance(item, Graph) else item


def mean_distance(
    pairs: Sequence[Tuple[Union[Graph, DegreeDistribution], Union[Graph, DegreeDistribution]]],
    metric: Union[str, Metric] = "tv",
) -> float:
    """Mean distance over (predicted, empirical) pairs of graphs or degree distributions."""
    if not pairs:
        raise ParameterError("mean_distance needs at least one pair")
    fn = get_metric(metric) if isinstance(metric, str) else metric
    return float(np.mean([fn(_as_distribution(a), _as_distribution(b)) for a, b in pairs]))
