from .pgf import (
    Pgf,
    contact_pgf,
    h1,
    h1_tilde,
    mean_excess_degree,
    pgf_derivatives,
    poisson_pgf,
    regular_pgf,
)
from .reproduction import (
    analytic_r0,
    analytic_r_star,
    h1_tilde_derivative,
    monte_carlo_transmission_probability,
    transmission_probability,
)
from .sir import EpidemicParams, EpidemicTrace, SIRSimulator, simulate_sir

__all__ = [
    "Pgf",
    "contact_pgf",
    "h1",
    "h1_tilde",
    "mean_excess_degree",
    "pgf_derivatives",
    "poisson_pgf",
    "regular_pgf",
    "analytic_r0",
    "analytic_r_star",
    "h1_tilde_derivative",
    "monte_carlo_transmission_probability",
    "transmission_probability",
    "EpidemicParams",
    "EpidemicTrace",
    "SIRSimulator",
    "simulate_sir",
]
