"""
Transmissibility and early-stage reproductive numbers on a temporal configuration model
with constant persistence probability p.
"""

import numpy as np

from ..errors import ParameterError
from .pgf import Pgf, mean_excess_degree, pgf_derivatives


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise ParameterError(f"{name} must lie in [0, 1], got {value}")


def transmission_probability(beta: float, gamma: float, p: float) -> float:
    """tau = beta / (1 - p(1-beta)(1-gamma)): transmission before the tie breaks or recovery."""
    for name, value in (("beta", beta), ("gamma", gamma), ("p", p)):
        _check_unit(name, value)
    denominator = 1.0 - p * (1.0 - beta) * (1.0 - gamma)
    if denominator <= 0.0:
        raise ParameterError(
            "tau is undefined for beta=0, gamma=0, p=1: the tie never breaks, transmits or recovers"
        )
    return beta / denominator


def monte_carlo_transmission_probability(
    beta: float, gamma: float, p: float, samples: int, rng: np.random.Generator
) -> float:
    """Estimate tau from the overlap-time construction.

    X ~ Geo(1-p) steps until the tie breaks, Z ~ Geo(gamma) until recovery and Y ~ Geo(beta)
    until transmission; the tie transmits when Y <= min(X, Z).
    """
    transmission_probability(beta, gamma, p)
    if samples < 1:
        raise ParameterError(f"samples must be positive, got {samples}")
    never = np.iinfo(np.int64).max

    def waiting(success: float) -> np.ndarray:
        if success == 0.0:
            return np.full(samples, never, dtype=np.int64)
        return rng.geometric(success, size=samples)

    breaks = waiting(1.0 - p)
    recovers = waiting(gamma)
    transmits = waiting(beta)
    overlap = np.minimum(breaks, recovers)
    return float(np.mean((transmits <= overlap) & (transmits != never)))


def h1_tilde_derivative(pgf: Pgf, gamma: float, p: float) -> float:
    """H1~'(1) = (1-gamma)(1-p)/gamma + (1-p+gamma p) g''(1) / (gamma g'(1))."""
    _check_unit("p", p)
    if not 0.0 < gamma <= 1.0:
        raise ParameterError(f"gamma must lie in (0, 1], got {gamma}")
    return (1 - gamma) * (1 - p) / gamma + (1 - p + gamma * p) * mean_excess_degree(pgf) / gamma


def analytic_r0(pgf: Pgf, beta: float, gamma: float, p: float) -> float:
    """R0 = tau g'(1)."""
    mean_degree, _ = pgf_derivatives(pgf)
    return transmission_probability(beta, gamma, p) * mean_degree


def analytic_r_star(pgf: Pgf, beta: float, gamma: float, p: float) -> float:
    """Early-stage reproductive number R* = tau H1~'(1)."""
    if gamma == 0:
        raise ParameterError("R* diverges for gamma=0 (infinite infectious period)")
    return transmission_probability(beta, gamma, p) * h1_tilde_derivative(pgf, gamma, p)
