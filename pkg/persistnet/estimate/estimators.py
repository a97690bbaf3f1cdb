"""
Persistence estimators computed from an observed snapshot sequence.

Every estimator reads edge sets only; latent persistence probabilities are never consulted.
"""

from typing import List, Optional, Sequence, Union

import numpy as np

from ..config.logging_config import get_logger
from ..errors import EstimationError, ParameterError
from ..models.reports import EstimateReport
from ..network.graph import Graph
from ..network.persistence import BetaParams, ModelKind
from ..network.temporal import TemporalNetwork
from .moments import beta_from_moments, fit_model3_node_dist

logger = get_logger("estimate.estimators")

Observed = Union[TemporalNetwork, Sequence[Graph]]


def _snapshots(observed: Observed) -> Sequence[Graph]:
    if isinstance(observed, TemporalNetwork):
        return observed.snapshots
    return list(observed)


def _survival(snapshots: Sequence[Graph], start: int, span: int) -> Optional[float]:
    """Share of the edges of snapshot ``start`` present in each of the next ``span`` snapshots."""
    base = snapshots[start].edges
    if not base:
        return None
    alive = set(base)
    for offset in range(1, span + 1):
        alive &= snapshots[start + offset].edges
    return len(alive) / len(base)


def _initial_survival(snapshots: Sequence[Graph], span: int, name: str) -> float:
    steps = len(snapshots) - 1
    if steps < span:
        raise EstimationError(f"{name} needs T >= {span}, got T={steps}")
    ratio = _survival(snapshots, 0, span)
    if ratio is None:
        raise EstimationError(f"{name} is undefined: the initial graph has no edges")
    return ratio


def window_count(steps: int, window: int) -> int:
    """m = floor(T / T0)."""
    return steps // window


def _windowed(snapshots: Sequence[Graph], window: int, span: int, name: str) -> float:
    steps = len(snapshots) - 1
    if window > steps:
        raise EstimationError(f"{name}: window {window} is larger than T={steps}")
    m = window_count(steps, window)
    ratios = []
    for k in range(m):
        ratio = _survival(snapshots, k * window, span)
        if ratio is None:
            logger.warning(f"{name}: snapshot {k * window} has no edges; window skipped")
            continue
        ratios.append(ratio)
    if not ratios:
        raise EstimationError(f"{name}: every window starts on an empty snapshot")
    return float(np.mean(ratios))


def z1(observed: Observed) -> float:
    """X_1 / X_0: share of G_0 edges present in G_1."""
    return _initial_survival(_snapshots(observed), 1, "z1")


def v1(observed: Observed) -> float:
    """Share of G_0 edges present in both G_1 and G_2."""
    return _initial_survival(_snapshots(observed), 2, "v1")


def zbar(observed: Observed, window: int = 1) -> float:
    """Mean one-step survival ratio over the window starts 0, T0, ..., (m-1)T0.

    With ``window=1`` this is the mean of X_t / X_{t-1}^+ over t = 1..T. The sum is divided
    by the number of windows m.
    """
    if window < 1:
        raise ParameterError(f"Window must be at least 1, got {window}")
    return _windowed(_snapshots(observed), window, 1, "zbar")


def vbar(observed: Observed, window: int = 2) -> float:
    """Mean two-step survival ratio over the window starts; both transitions share one draw."""
    if window < 2:
        raise ParameterError(f"vbar needs a window of at least 2, got {window}")
    return _windowed(_snapshots(observed), window, 2, "vbar")


def one_step_ratios(observed: Observed) -> List[float]:
    """X_t / X_{t-1}^+ for t = 1..T (NaN where G_{t-1} is empty)."""
    snapshots = _snapshots(observed)
    ratios = []
    for start in range(len(snapshots) - 1):
        ratio = _survival(snapshots, start, 1)
        ratios.append(float("nan") if ratio is None else ratio)
    return ratios


def latent_survival_ratios(tn: TemporalNetwork) -> List[float]:
    """The same ratios taken from the engine's own bookkeeping."""
    return [stats.survival_ratio for stats in tn.step_stats]


def fit_beta(kind: ModelKind, first: float, second: float) -> BetaParams:
    """Beta distribution matching the edge-level moments under Model 2 or Model 3."""
    kind = ModelKind(kind)
    if kind is ModelKind.MODEL2:
        return beta_from_moments(first, second)
    if kind is ModelKind.MODEL3:
        return fit_model3_node_dist(first, second)
    raise ParameterError(f"{kind.value} has no persistence distribution to fit")


def estimate_report(
    observed: Observed,
    model_kind: Union[ModelKind, str] = ModelKind.MODEL1,
    window: Optional[int] = None,
) -> EstimateReport:
    """All four estimators plus the fitted Beta parameters of Models 2 and 3.

    Without a window, Model 1 uses T0=1 for Z-bar and T0=2 for V-bar; Models 2 and 3 fit from
    (Z1, V1). With a window both windowed estimators use it and Models 2 and 3 fit from
    (Z-bar, V-bar), falling back to (Z1, V1) with a warning when the window yields no V-bar.
    """
    kind = ModelKind(model_kind)
    snapshots = _snapshots(observed)
    steps = len(snapshots) - 1
    if steps < 1:
        raise EstimationError("Estimation needs at least two snapshots")

    z_window = window or 1
    v_window = window if window is not None else 2
    first = z1(snapshots)
    mean_ratio = zbar(snapshots, z_window)
    second = v1(snapshots) if steps >= 2 else None
    mean_second = None
    if v_window >= 2 and window_count(steps, v_window) >= 1:
        mean_second = vbar(snapshots, v_window)

    alpha = beta = None
    summary = {}
    if kind in (ModelKind.MODEL2, ModelKind.MODEL3):
        if window is not None and mean_second is not None:
            params = fit_beta(kind, mean_ratio, mean_second)
        elif second is not None:
            if window is not None:
                logger.warning(
                    f"Window {window} gives no windowed second moment; fitting {kind.value} "
                    "from (z1, v1) instead"
                )
            params = fit_beta(kind, first, second)
        else:
            raise EstimationError(f"Fitting {kind.value} needs T >= 2, got T={steps}")
        alpha, beta = params.alpha, params.beta
        q1, median, q3 = params.quantiles([0.25, 0.5, 0.75])
        summary = {
            "w_sd": float(np.sqrt(params.variance)),
            "w_q1": float(q1),
            "w_median": float(median),
            "w_q3": float(q3),
        }

    report = EstimateReport(
        model=kind.value,
        n=snapshots[0].node_count,
        t=steps,
        t0=window,
        z1=first,
        zbar=mean_ratio,
        v1=second,
        vbar=mean_second,
        alpha=alpha,
        beta=beta,
        m_windows=window_count(steps, z_window),
        **summary,
    )
    logger.info(f"Estimated {report.to_record()}")
    return report
