import numpy as np
import pytest

from persistnet.epidemics import (
    analytic_r0,
    analytic_r_star,
    contact_pgf,
    h1,
    h1_tilde,
    h1_tilde_derivative,
    mean_excess_degree,
    monte_carlo_transmission_probability,
    pgf_derivatives,
    poisson_pgf,
    regular_pgf,
    transmission_probability,
)
from persistnet.epidemics.pgf import Pgf
from persistnet.errors import ParameterError
from persistnet.network.graph import DegreeDistribution


@pytest.fixture(scope="module")
def poisson6():
    return poisson_pgf(6.0)


def test_tau_examples():
    assert transmission_probability(0.3, 0.5, 0.0) == pytest.approx(0.3)
    assert transmission_probability(1.0, 0.5, 0.9) == pytest.approx(1.0)
    assert transmission_probability(0.05, 0.2, 0.8) == pytest.approx(0.05 / 0.392)


def test_tau_degenerate_parameters():
    with pytest.raises(ParameterError):
        transmission_probability(0.0, 0.0, 1.0)
    with pytest.raises(ParameterError):
        transmission_probability(1.2, 0.2, 0.5)


def test_tau_monotone_in_beta_and_p():
    grid = np.linspace(0.05, 0.95, 10)
    for gamma in (0.1, 0.5):
        table = np.array([[transmission_probability(b, gamma, p) for p in grid] for b in grid])
        assert np.all(np.diff(table, axis=0) >= 0)
        assert np.all(np.diff(table, axis=1) >= 0)


@pytest.mark.parametrize("beta, gamma, p", [(0.05, 0.2, 0.8), (0.3, 0.5, 0.0), (0.1, 0.2, 1.0)])
def test_tau_matches_waiting_time_simulation(beta, gamma, p):
    rng = np.random.default_rng(99)
    estimate = monte_carlo_transmission_probability(beta, gamma, p, 200_000, rng)
    assert estimate == pytest.approx(transmission_probability(beta, gamma, p), abs=0.005)


@pytest.mark.slow
def test_tau_simulation_grid():
    rng = np.random.default_rng(7)
    for beta in (0.05, 0.2, 0.6):
        for gamma in (0.1, 0.3, 0.9):
            for p in (0.0, 0.5, 0.9):
                estimate = monte_carlo_transmission_probability(beta, gamma, p, 1_000_000, rng)
                assert estimate == pytest.approx(transmission_probability(beta, gamma, p), abs=0.002)


def test_pgf_derivatives(poisson6):
    first, second = pgf_derivatives(poisson6)
    assert first == pytest.approx(6.0, abs=1e-9)
    assert second == pytest.approx(36.0, abs=1e-8)
    assert mean_excess_degree(regular_pgf(5)) == pytest.approx(4.0)
    assert pgf_derivatives(regular_pgf(1)) == (pytest.approx(1.0), pytest.approx(0.0))


def test_excess_degree_needs_edges():
    with pytest.raises(ParameterError):
        mean_excess_degree(regular_pgf(0))


def test_pgf_evaluation(poisson6):
    assert poisson6.evaluate(1.0) == pytest.approx(1.0)
    assert poisson6.evaluate(0.5) == pytest.approx(np.exp(-3.0), rel=1e-9)
    assert poisson6.g1(1.0) == pytest.approx(1.0)
    assert poisson6.size_biased().sum() == pytest.approx(1.0)


def test_contact_pgf_limits():
    assert contact_pgf(1.0, 3, 0.4, 5) == pytest.approx(1.0)
    # static tie: every step reuses the same k contacts
    assert contact_pgf(0.5, 3, 1.0, 4) == pytest.approx(0.5 ** 3)


def test_r0(poisson6):
    tau = 0.05 / 0.24
    assert analytic_r0(poisson6, 0.05, 0.2, 1.0) == pytest.approx(6 * tau)
    assert analytic_r0(poisson6, 0.0, 0.2, 0.5) == 0.0
    assert analytic_r0(regular_pgf(4), 0.1, 0.3, 0.0) == pytest.approx(0.4)


def test_h1_tilde_derivative_examples(poisson6):
    assert h1_tilde_derivative(poisson6, 0.2, 0.8) == pytest.approx(11.6, rel=1e-8)
    assert h1_tilde_derivative(poisson6, 0.2, 1.0) == pytest.approx(6.0, rel=1e-8)
    assert h1_tilde_derivative(poisson6, 1.0, 0.3) == pytest.approx(6.0, rel=1e-8)


def test_r_star_special_cases(poisson6):
    beta, gamma = 0.05, 0.2
    static_tau = transmission_probability(beta, gamma, 1.0)
    assert analytic_r_star(poisson6, beta, gamma, 1.0) == pytest.approx(static_tau * 6.0, abs=1e-12)

    complete = regular_pgf(99)
    assert analytic_r_star(complete, beta, gamma, 1.0) == pytest.approx(static_tau * 98, abs=1e-12)

    regular = regular_pgf(7)
    assert analytic_r_star(regular, beta, gamma, 1.0) == pytest.approx(static_tau * 6, abs=1e-12)

    iid = beta * ((1 - gamma) / gamma + mean_excess_degree(poisson6) / gamma)
    assert analytic_r_star(poisson6, beta, gamma, 0.0) == pytest.approx(iid, abs=1e-12)


def test_r_star_factorises(poisson6):
    for p in (0.0, 0.3, 0.8, 1.0):
        expected = transmission_probability(0.1, 0.2, p) * h1_tilde_derivative(poisson6, 0.2, p)
        assert analytic_r_star(poisson6, 0.1, 0.2, p) == expected


def test_r_star_rejects_zero_gamma(poisson6):
    with pytest.raises(ParameterError):
        analytic_r_star(poisson6, 0.1, 0.0, 0.5)


def test_h1_tilde_is_a_pgf_at_one(poisson6):
    # the seed's own period and its neighbours' each contribute a normalised mass
    assert h1_tilde(1.0, poisson6, 0.2, 0.5) == pytest.approx(2.0)
    assert h1_tilde(1.0, poisson6, 0.2, 0.5, method="series") == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("x", [0.1, 0.5, 0.9])
def test_series_matches_closed_form(poisson6, x):
    closed = h1_tilde(x, poisson6, 0.2, 0.5)
    series = h1_tilde(x, poisson6, 0.2, 0.5, method="series")
    assert series == pytest.approx(closed, abs=1e-8)


def test_numeric_derivative_of_series(poisson6):
    h = 1e-5
    upper = h1_tilde(1 + h, poisson6, 0.2, 0.8, method="series")
    lower = h1_tilde(1 - h, poisson6, 0.2, 0.8, method="series")
    assert (upper - lower) / (2 * h) == pytest.approx(11.6, rel=1e-4)


def test_h1_derivative_is_r_star(poisson6):
    beta, gamma, p = 0.05, 0.2, 0.8
    tau = transmission_probability(beta, gamma, p)
    h = 1e-5
    slope = (h1(1 + h, poisson6, gamma, p, tau) - h1(1 - h, poisson6, gamma, p, tau)) / (2 * h)
    assert slope == pytest.approx(analytic_r_star(poisson6, beta, gamma, p), rel=1e-4)


def test_divergent_series_is_rejected():
    pgf = Pgf(DegreeDistribution(np.array([0.0, 0.0, 0.0, 1.0])))
    with pytest.raises(ParameterError, match="diverges"):
        h1_tilde(2.0, pgf, 0.2, 0.0)


def test_unknown_method(poisson6):
    with pytest.raises(ParameterError):
        h1_tilde(0.5, poisson6, 0.2, 0.5, method="spline")
