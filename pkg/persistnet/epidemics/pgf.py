"""
Probability generating functions of degree and contact counts.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import stats

from ..errors import ParameterError
from ..network.graph import DegreeDistribution

POISSON_TAIL = 1e-12
SERIES_TAIL = 1e-10


@dataclass(frozen=True)
class Pgf:
    """g(x) = sum_k p_k x^k over a finite support."""
    pk: DegreeDistribution

    @property
    def degrees(self) -> np.ndarray:
        return np.arange(self.pk.masses.size)

    def evaluate(self, x: float) -> float:
        return float(np.polynomial.polynomial.polyval(x, self.pk.masses))

    def derivative(self, x: float, order: int = 1) -> float:
        coefficients = np.polynomial.polynomial.polyder(self.pk.masses, order)
        if not coefficients.size:
            return 0.0
        return float(np.polynomial.polynomial.polyval(x, coefficients))

    def mean_degree(self) -> float:
        """g'(1)."""
        return float(np.dot(self.degrees, self.pk.masses))

    def second_factorial_moment(self) -> float:
        """g''(1)."""
        k = self.degrees
        return float(np.dot(k * (k - 1), self.pk.masses))

    def size_biased(self) -> np.ndarray:
        """q_k = k p_k / g'(1): the degree of a node reached along a random edge."""
        mean = self.mean_degree()
        if mean == 0:
            raise ParameterError("All degree mass is at 0; no size-biased distribution")
        return self.degrees * self.pk.masses / mean

    def excess(self) -> np.ndarray:
        """Excess-degree masses: entry k is (k+1) p_{k+1} / g'(1), the chance of k further edges."""
        return self.size_biased()[1:]

    def g1(self, x: float) -> float:
        """g_1(x) = g'(x) / g'(1)."""
        mean = self.mean_degree()
        if mean == 0:
            raise ParameterError("g1 is undefined when g'(1) = 0")
        return self.derivative(x) / mean


def poisson_pgf(lam: float, tail: float = POISSON_TAIL) -> Pgf:
    """Poisson(lam) degrees with the support cut where the tail mass drops below ``tail``."""
    if not lam > 0:
        raise ParameterError(f"Poisson mean must be positive, got {lam}")
    k_max = int(stats.poisson.isf(tail, lam)) + 1
    masses = stats.poisson.pmf(np.arange(k_max + 1), lam)
    return Pgf(DegreeDistribution(masses / masses.sum()))


def regular_pgf(degree: int) -> Pgf:
    """All mass on one degree M."""
    if degree < 0:
        raise ParameterError(f"Degree must be non-negative, got {degree}")
    masses = np.zeros(degree + 1)
    masses[degree] = 1.0
    return Pgf(DegreeDistribution(masses))


def pgf_derivatives(pgf: Pgf) -> Tuple[float, float]:
    """(g'(1), g''(1))."""
    return pgf.mean_degree(), pgf.second_factorial_moment()


def mean_excess_degree(pgf: Pgf) -> float:
    """g_1'(1) = g''(1) / g'(1)."""
    first, second = pgf_derivatives(pgf)
    if first == 0:
        raise ParameterError("g1'(1) is undefined when g'(1) = 0")
    return second / first


def contact_pgf(x: float, degree: int, p: float, duration: int) -> float:
    """PGF of the contacts a degree-k node makes over ``duration`` steps: {x[x(1-p)+p]^l}^k."""
    return (x * (x * (1 - p) + p) ** duration) ** degree


def _check_convergence(x: float, pgf: Pgf, gamma: float, p: float) -> None:
    base = x * (1 - p) + p
    k = pgf.degrees[pgf.pk.masses > 0]
    if base < 0 or (1 - gamma) * base >= 1:
        raise ParameterError(f"H1~ series diverges at x={x}")
    powers = base ** np.maximum(k - 1, 0).astype(float)
    if np.any((1 - gamma) * powers[k >= 2] >= 1):
        raise ParameterError(f"H1~ series diverges at x={x} for the largest degrees")


def _h1_tilde_closed(x: float, pgf: Pgf, gamma: float, p: float) -> float:
    base = x * (1 - p) + p
    q = pgf.size_biased()
    k = pgf.degrees
    own = gamma / (1 - (1 - gamma) * base)
    exponents = np.maximum(k - 1, 0).astype(float)
    ratio = np.zeros_like(q)
    mask = q > 0
    ratio[mask] = x ** exponents[mask] / (1 - (1 - gamma) * base ** exponents[mask])
    return float(own + gamma * np.dot(q, ratio))


def _h1_tilde_series(x: float, pgf: Pgf, gamma: float, p: float, max_terms: int) -> float:
    base = x * (1 - p) + p
    q = pgf.size_biased()
    exponents = np.maximum(pgf.degrees - 1, 0).astype(float)
    total = 0.0
    for duration in range(max_terms + 1):
        weight = gamma * (1 - gamma) ** duration
        concurrent = base ** duration
        total += weight * (concurrent + float(np.dot(q, (x * concurrent) ** exponents)))
        if (1 - gamma) ** (duration + 1) * 2 < SERIES_TAIL:
            break
    return total


def h1_tilde(
    x: float, pgf: Pgf, gamma: float, p: float, method: str = "closed", max_terms: int = 500
) -> float:
    """PGF of the contacts an early infectee makes, excluding the contact that infected it.

    ``method="series"`` sums over infectious periods l <= ``max_terms`` directly.
    """
    if not 0 < gamma <= 1:
        raise ParameterError(f"gamma must lie in (0, 1], got {gamma}")
    if not 0 <= p <= 1:
        raise ParameterError(f"p must lie in [0, 1], got {p}")
    _check_convergence(x, pgf, gamma, p)
    if method == "closed":
        return _h1_tilde_closed(x, pgf, gamma, p)
    if method == "series":
        return _h1_tilde_series(x, pgf, gamma, p, max_terms)
    raise ParameterError(f"Unknown evaluation method: {method}")


def h1(x: float, pgf: Pgf, gamma: float, p: float, tau: float, method: str = "closed") -> float:
    """PGF of the transmissions of an early infectee: H1~(1 - tau + tau x)."""
    return h1_tilde(1 - tau + tau * x, pgf, gamma, p, method=method)
