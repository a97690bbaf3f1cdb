import logging

import numpy as np
import pytest
from scipy import stats

from persistnet.errors import EstimationError, ParameterError
from persistnet.estimate import (
    estimate_report,
    fit_beta,
    latent_survival_ratios,
    one_step_ratios,
    v1,
    vbar,
    window_count,
    z1,
    zbar,
)
from persistnet.network.graph import Graph
from persistnet.network.persistence import BetaParams, ModelKind, PersistenceModel
from persistnet.network.temporal import evolve

from .conftest import make_cm_graph


def _graph(*edges):
    return Graph(4, frozenset(edges))


def test_all_edges_survive():
    g = _graph((0, 1), (2, 3))
    assert z1([g, g]) == 1.0
    assert v1([g, g, g]) == 1.0
    assert zbar([g, g, g]) == 1.0


def test_no_edges_survive():
    assert z1([_graph((0, 1)), _graph((2, 3))]) == 0.0


def test_hand_worked_ratios():
    g0 = _graph((0, 1), (1, 2), (2, 3), (0, 3))
    g1 = _graph((0, 1), (1, 2), (0, 2))
    g2 = _graph((0, 1), (0, 2), (1, 3))
    snapshots = [g0, g1, g2]
    assert z1(snapshots) == 0.5
    assert v1(snapshots) == 0.25
    assert one_step_ratios(snapshots) == [0.5, 2 / 3]
    assert zbar(snapshots) == pytest.approx((0.5 + 2 / 3) / 2)
    assert vbar(snapshots, 2) == 0.25


def test_empty_initial_graph_is_an_error():
    empty = Graph.empty(4)
    with pytest.raises(EstimationError, match="no edges"):
        z1([empty, _graph((0, 1))])


def test_too_few_snapshots():
    g = _graph((0, 1))
    with pytest.raises(EstimationError):
        v1([g, g])
    with pytest.raises(EstimationError):
        zbar([g, g], window=2)
    with pytest.raises(EstimationError):
        estimate_report([g])


def test_window_validation():
    g = _graph((0, 1))
    with pytest.raises(ParameterError):
        zbar([g, g], window=0)
    with pytest.raises(ParameterError):
        vbar([g, g, g], window=1)


def test_window_count_floors():
    assert window_count(30, 2) == 15
    assert window_count(31, 2) == 15
    assert window_count(1, 2) == 0


def test_empty_window_start_is_skipped(caplog):
    g = _graph((0, 1))
    snapshots = [g, Graph.empty(4), g]
    with caplog.at_level(logging.WARNING, logger="persistnet"):
        assert zbar(snapshots) == 0.0
    assert "window skipped" in caplog.text
    with pytest.raises(EstimationError):
        zbar([Graph.empty(4), g])


def test_observed_ratios_match_engine_bookkeeping(poisson_graph, rng):
    tn = evolve(poisson_graph, PersistenceModel.model1(0.8), 20, rng)
    assert one_step_ratios(tn) == pytest.approx(latent_survival_ratios(tn))
    assert z1(tn) == pytest.approx(tn.step_stats[0].survival_ratio)
    assert zbar(tn) == pytest.approx(np.mean(latent_survival_ratios(tn)))


def test_model1_estimators_centre_on_p():
    graph = make_cm_graph(1000, 6.0, 1)
    estimates = [
        zbar(evolve(graph, PersistenceModel.model1(0.8), 10, np.random.default_rng(seed)))
        for seed in range(20)
    ]
    # each estimate pools about 30000 Bernoulli(0.8) outcomes
    assert abs(np.mean(estimates) - 0.8) < 0.005


@pytest.mark.parametrize("p", [0.2, 0.5, 0.8])
def test_windowed_estimators_are_unbiased_under_model1(p):
    graph = make_cm_graph(1000, 6.0, 5)
    model = PersistenceModel.model1(p)
    runs = [evolve(graph, model, 10, np.random.default_rng(seed)) for seed in range(20)]
    assert abs(np.mean([zbar(tn) for tn in runs]) - p) < 0.005
    assert abs(np.mean([vbar(tn, 2) for tn in runs]) - p ** 2) < 0.005


def test_averaging_over_steps_shrinks_variance_by_t():
    graph = make_cm_graph(300, 6.0, 6)
    model = PersistenceModel.model1(0.5)
    steps = 10
    first, mean = [], []
    for seed in range(400):
        tn = evolve(graph, model, steps, np.random.default_rng(seed), max_retries=5)
        first.append(z1(tn))
        mean.append(zbar(tn))
    ratio = np.var(mean, ddof=1) / np.var(first, ddof=1)
    assert 0.65 / steps < ratio < 1.4 / steps


def test_windowed_second_moment_for_model2():
    graph = make_cm_graph(1000, 6.0, 2)
    model = PersistenceModel.model2(BetaParams(1, 4), window=2)
    estimates = [vbar(evolve(graph, model, 30, np.random.default_rng(seed)), 2) for seed in range(10)]
    assert np.mean(estimates) == pytest.approx(1 / 15, rel=0.05)


def test_fixed_forever_survivors_persist_longer():
    graph = make_cm_graph(500, 6.0, 3)
    model = PersistenceModel.model2(BetaParams(1, 4))
    first, late = [], []
    for seed in range(10):
        tn = evolve(graph, model, 30, np.random.default_rng(seed))
        first.append(z1(tn))
        late.append(one_step_ratios(tn)[-1])
    assert np.mean(late) > np.mean(first)


def test_fit_beta_dispatches_on_kind():
    w = BetaParams(2, 2)
    assert fit_beta(ModelKind.MODEL2, w.mean, w.second_moment).alpha == pytest.approx(2)
    fitted = fit_beta("m3", w.mean ** 2, w.second_moment ** 2)
    assert (fitted.alpha, fitted.beta) == (pytest.approx(2), pytest.approx(2))
    with pytest.raises(ParameterError):
        fit_beta("m1", 0.5, 0.3)


def test_report_for_model1_has_no_beta(poisson_graph, rng):
    report = estimate_report(evolve(poisson_graph, PersistenceModel.model1(0.6), 4, rng))
    assert report.alpha is None and report.beta is None
    assert report.w_sd is None and report.w_median is None
    assert report.t == 4 and report.t0 is None and report.m_windows == 4
    assert report.to_record().startswith("model=m1 n=1000 t=4 t0= z1=")
    assert report.csv_header() == "model,n,t,t0,z1,zbar,v1,vbar,alpha,beta,w_sd,w_q1,w_median,w_q3"


def test_report_for_windowed_model2(poisson_graph, rng):
    tn = evolve(poisson_graph, PersistenceModel.model2(BetaParams(2, 2), window=2), 20, rng)
    report = estimate_report(tn, "m2", window=2)
    assert report.t0 == 2 and report.m_windows == 10
    assert report.alpha > 0 and report.beta > 0
    assert len(report.to_csv_row().split(",")) == 14


def test_report_summarises_fitted_distribution(poisson_graph, rng):
    tn = evolve(poisson_graph, PersistenceModel.model2(BetaParams(2, 2), window=2), 20, rng)
    report = estimate_report(tn, "m2", window=2)
    fitted = BetaParams(report.alpha, report.beta)
    assert report.w_sd == pytest.approx(stats.beta.std(fitted.alpha, fitted.beta))
    assert report.w_median == pytest.approx(stats.beta.median(fitted.alpha, fitted.beta))
    assert report.w_q1 < report.w_median < report.w_q3
    assert "w_sd=" in report.to_record()


def test_window_one_fit_falls_back_with_warning(poisson_graph, rng, caplog):
    tn = evolve(poisson_graph, PersistenceModel.model2(BetaParams(2, 2)), 6, rng)
    with caplog.at_level(logging.WARNING, logger="persistnet"):
        windowed = estimate_report(tn, "m2", window=1)
    assert "fitting m2 from (z1, v1)" in caplog.text
    plain = estimate_report(tn, "m2")
    assert windowed.vbar is None
    assert windowed.alpha == pytest.approx(plain.alpha)
    assert windowed.beta == pytest.approx(plain.beta)


def test_beta_summary_matches_closed_form():
    w = BetaParams(2, 2)
    assert w.variance == pytest.approx(1 / 20)
    assert w.variance == pytest.approx(w.second_moment - w.mean ** 2)
    q1, median, q3 = w.quantiles([0.25, 0.5, 0.75])
    assert median == pytest.approx(0.5)
    assert q1 == pytest.approx(1 - q3)
