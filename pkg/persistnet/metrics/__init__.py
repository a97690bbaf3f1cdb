from .distances import (
    METRICS,
    get_metric,
    hellinger,
    hellinger_affinity,
    mean_distance,
    total_variation,
)

__all__ = [
    "METRICS",
    "get_metric",
    "hellinger",
    "hellinger_affinity",
    "mean_distance",
    "total_variation",
]
