"""
Beta moment matching.
"""

import math
from typing import Tuple

from ..errors import InfeasibleMomentsError
from ..network.persistence import BetaParams


def beta_moments(params: BetaParams) -> Tuple[float, float]:
    """Closed-form first and second moments of a Beta distribution."""
    return params.mean, params.second_moment


def beta_from_moments(m1: float, m2: float) -> BetaParams:
    """Return the Beta distribution with mean ``m1`` and second moment ``m2``.

    Raises:
        InfeasibleMomentsError: naming the inequality the pair violates.
    """
    if not 0.0 < m1 < 1.0:
        raise InfeasibleMomentsError(m1, m2, "m1 must lie strictly between 0 and 1")
    variance = m2 - m1 * m1
    if not variance > 0.0:
        raise InfeasibleMomentsError(m1, m2, "m2 must exceed m1^2 (variance must be positive)")
    if not m2 < m1:
        raise InfeasibleMomentsError(m1, m2, "m2 must be below m1 (variance below m1(1-m1))")
    concentration = m1 * (1.0 - m1) / variance - 1.0
    return BetaParams(alpha=m1 * concentration, beta=(1.0 - m1) * concentration)


def fit_model3_node_dist(z_est: float, v_est: float) -> BetaParams:
    """Node-level W for Model 3, where E(p_ij) = E(W)^2 and E(p_ij^2) = E(W^2)^2."""
    if z_est < 0 or v_est < 0:
        raise InfeasibleMomentsError(z_est, v_est, "edge-level moments must be non-negative")
    return beta_from_moments(math.sqrt(z_est), math.sqrt(v_est))
