"""
Replication harness and reproduction of the simulation and fitting tables.

Every replication r draws from ``child_rng(seed, r)``; tables are written as CSV preceded by
``#`` lines naming the table, the parameter grid and the acceptance bounds.
"""

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from .config.logging_config import get_logger
from .dataio.pings import (
    COPENHAGEN_CITATION,
    DEFAULT_RSSI_THRESHOLD,
    filter_pings,
    synthesize_pings,
)
from .dataio.sequences import DAY, WEEK
from .errors import DataError, ParameterError
from .estimate.bias import bias_stats, joint_bias_stats, joint_net_rel_bias, net_rel_bias
from .estimate.estimators import v1, vbar, z1, zbar
from .factory.component_factory import ModelFactory
from .models.reports import ExperimentConfig
from .network.configuration import configuration_model
from .network.persistence import BetaParams, PersistenceModel
from .network.temporal import (
    DEFAULT_REMATCH_RETRIES,
    TemporalNetwork,
    evolve,
    persistence_drift_report,
)
from .pipeline import Pipeline
from .seeding import child_rng
from .stages import BuildPeriodNetworks, FitModels, LoadPings, PredictAndCompare, UnionPeriods

logger = get_logger("experiments")

TABLES = ("table1", "table2", "table3", "table4", "figure1")
SCALES = ("full", "quick")
DEGREE_LAW = "poisson:6"
STEPS = (30, 100)

TABLE_MODELS = {
    "table1": "m1:0.8",
    "table2": "m2:1,4@2",
    "table3": "m3:1,4@2",
    "figure1": "m2:4,1",
}

# upper bounds on bias columns at (n, t) for the full scale; quick runs widen them
BOUNDS: Dict[str, Dict[Tuple[int, int], Dict[str, float]]] = {
    "table1": {(1000, 100): {"zbar_abs_rel_bias": 0.001, "z1_net_rel_bias": 0.003}},
    "table2": {
        (1000, 100): {"windowed_net_rel_bias": 0.004},
        (1000, 30): {"windowed_net_rel_bias": 0.006},
    },
    "table3": {(1000, 100): {"windowed_net_rel_bias": 0.006}},
}
QUICK_TOLERANCE_FACTOR = 2.0


@dataclass(frozen=True)
class Scale:
    name: str
    replications: int
    sizes: Tuple[int, ...]
    steps: Tuple[int, ...] = STEPS

    @property
    def tolerance_factor(self) -> float:
        return 1.0 if self.name == "full" else QUICK_TOLERANCE_FACTOR


def get_scale(name: str, replications: Optional[int] = None) -> Scale:
    if name == "full":
        scale = Scale("full", 100, (10, 100, 1000))
    elif name == "quick":
        scale = Scale("quick", 25, (100, 1000))
    else:
        raise ParameterError(f"Unknown scale '{name}', expected one of {SCALES}")
    if replications is not None:
        if replications < 1:
            raise ParameterError("replications must be at least 1")
        scale = Scale(scale.name, replications, scale.sizes, scale.steps)
    return scale


def run_replications(
    task: Callable[[Any], Any],
    payloads: Sequence[Any],
    workers: int = 1,
    desc: str = "replications",
    progress: bool = False,
) -> List[Any]:
    """Apply ``task`` to every payload, in a process pool when ``workers > 1``.

    Results come back in payload order whatever the worker count.
    """
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(task, payloads)
            return list(tqdm(results, total=len(payloads), desc=desc, disable=not progress))
    return [task(payload) for payload in tqdm(payloads, desc=desc, disable=not progress)]


@dataclass(frozen=True)
class EstimationTask:
    """One replication: CM graph, evolution, and the four estimators."""
    model: str
    degree: str
    n: int
    t: int
    seed: int
    replication: int
    max_retries: int
    forbid_reformation: bool


def _tasks(
    model: str, degree: str, n: int, t: int, seed: int, replications: int, options: Dict[str, Any]
) -> List[EstimationTask]:
    max_retries = options.get("max_retries", DEFAULT_REMATCH_RETRIES)
    forbid = options.get("forbid_reformation", True)
    return [
        EstimationTask(model, degree, n, t, seed, r, max_retries, forbid)
        for r in range(replications)
    ]


def _simulate(task: EstimationTask) -> TemporalNetwork:
    rng = child_rng(task.seed, task.replication)
    model = ModelFactory.parse_model(task.model)
    degrees = ModelFactory.parse_degree_law(task.degree).sample(task.n, rng)
    initial = configuration_model(degrees, rng).graph
    return evolve(initial, model, task.t, rng, task.max_retries, task.forbid_reformation)


def estimate_replication(task: EstimationTask) -> Dict[str, float]:
    tn = _simulate(task)
    model = tn.model
    window = model.window or 1
    result = {"z1": z1(tn), "zbar": zbar(tn, window)}
    if model.is_heterogeneous:
        result["v1"] = v1(tn)
        result["vbar"] = vbar(tn, max(window, 2))
    return result


def experiment_model(config: ExperimentConfig) -> PersistenceModel:
    """The cell's model, with ``t0`` (when set) replacing the model spec's window."""
    model = ModelFactory.parse_model(config.model)
    if config.t0 is None:
        return model
    if not model.is_heterogeneous:
        raise ParameterError(f"{model.kind.value} has no window to set")
    return PersistenceModel(model.kind, w=model.w, window=config.t0)


def run_experiment(
    config: ExperimentConfig,
    options: Dict[str, Any],
    workers: int = 1,
    progress: bool = False,
) -> pd.DataFrame:
    """Per-replication estimates for one (model, N, T) cell."""
    model = experiment_model(config)
    tasks = _tasks(
        model.label, config.degree, config.n, config.t, config.seed, config.replications, options
    )
    desc = f"{model.label} N={config.n} T={config.t}"
    results = run_replications(estimate_replication, tasks, workers, desc, progress)
    frame = pd.DataFrame(results)
    frame.insert(0, "replication", range(config.replications))
    return frame


def bias_summary(model: PersistenceModel, estimates: pd.DataFrame) -> Dict[str, float]:
    """AbsRelBias columns of one table row: per estimator for Model 1, pooled moments otherwise.

    The ``*_net_rel_bias`` columns hold the absolute mean of the signed relative errors.
    """
    first, second = model.first_moment(), model.second_moment()
    records = estimates.to_dict("records")
    z1_pairs = [(r["z1"], first) for r in records]
    zbar_pairs = [(r["zbar"], first) for r in records]
    if not model.is_heterogeneous:
        z1_stats = bias_stats(z1_pairs)
        zbar_stats = bias_stats(zbar_pairs)
        return {
            "z1_abs_rel_bias": z1_stats.abs_rel_bias,
            "z1_sd_abs_rel_bias": z1_stats.sd_abs_rel_bias,
            "zbar_abs_rel_bias": zbar_stats.abs_rel_bias,
            "zbar_sd_abs_rel_bias": zbar_stats.sd_abs_rel_bias,
            "z1_net_rel_bias": net_rel_bias(z1_pairs),
            "zbar_net_rel_bias": net_rel_bias(zbar_pairs),
        }
    initial_pairs = (z1_pairs, [(r["v1"], second) for r in records])
    windowed_pairs = (zbar_pairs, [(r["vbar"], second) for r in records])
    initial = joint_bias_stats(*initial_pairs)
    windowed = joint_bias_stats(*windowed_pairs)
    return {
        "initial_abs_rel_bias": initial.abs_rel_bias,
        "initial_sd_abs_rel_bias": initial.sd_abs_rel_bias,
        "windowed_abs_rel_bias": windowed.abs_rel_bias,
        "windowed_sd_abs_rel_bias": windowed.sd_abs_rel_bias,
        "initial_net_rel_bias": joint_net_rel_bias(*initial_pairs),
        "windowed_net_rel_bias": joint_net_rel_bias(*windowed_pairs),
    }


def experiment_path(config: ExperimentConfig) -> Path:
    label = re.sub(r"[^A-Za-z0-9.]+", "_", experiment_model(config).label)
    return Path(config.output_dir) / f"{label}_n{config.n}_t{config.t}_seed{config.seed}.csv"


def write_experiment(config: ExperimentConfig, estimates: pd.DataFrame) -> Path:
    """Write per-replication estimates under ``config.output_dir``."""
    path = experiment_path(config)
    path.parent.mkdir(parents=True, exist_ok=True)
    estimates.to_csv(path, index=False, lineterminator="\n", float_format="%.10g")
    logger.info(f"Wrote {len(estimates)} replications to {path}")
    return path


def _simulation_table(
    table: str,
    scale: Scale,
    seed: int,
    options: Dict[str, Any],
    workers: int,
    progress: bool,
) -> pd.DataFrame:
    model = ModelFactory.parse_model(TABLE_MODELS[table])
    rows = []
    for n in scale.sizes:
        for t in scale.steps:
            config = ExperimentConfig(
                model=model.label,
                n=n,
                t=t,
                degree=DEGREE_LAW,
                replications=scale.replications,
                seed=seed,
            )
            estimates = run_experiment(config, options, workers, progress)
            rows.append({"n": n, "t": t, **bias_summary(model, estimates)})
    return pd.DataFrame(rows)


def drift_replication(task: EstimationTask) -> pd.DataFrame:
    tn = _simulate(task)
    return pd.DataFrame([asdict(row) for row in persistence_drift_report(tn)])


def figure1(
    scale: Scale,
    seed: int,
    options: Dict[str, Any],
    workers: int = 1,
    progress: bool = False,
    n: int = 1000,
    t: int = 100,
) -> Tuple[pd.DataFrame, int]:
    """Mean survivor quartiles per step, and how many runs saw the median rise from step 1 to T."""
    tasks = _tasks(TABLE_MODELS["figure1"], DEGREE_LAW, n, t, seed, scale.replications, options)
    reports = run_replications(drift_replication, tasks, workers, "figure1", progress)
    rising = sum(
        1
        for report in reports
        if np.isfinite(report["median"].iloc[t])
        and report["median"].iloc[t] > report["median"].iloc[1]
    )
    summary = (
        pd.concat(reports, ignore_index=True)
        .groupby("step", as_index=False)
        .agg(
            survivors=("survivors", "mean"),
            q1=("q1", "mean"),
            median=("median", "mean"),
            q3=("q3", "mean"),
        )
    )
    return summary, rising


def fit_pipeline(
    pings: Union[str, Path, pd.DataFrame],
    runs: int,
    seed: int,
    options: Dict[str, Any],
    period_length: int = DAY,
    group_size: int = WEEK,
    n_periods: Optional[int] = None,
    roster: Optional[Sequence[Any]] = None,
    rssi_threshold: float = DEFAULT_RSSI_THRESHOLD,
    window: Optional[int] = None,
    progress: bool = False,
) -> Dict[str, Any]:
    """Pings to weekly networks, then fitted models and predicted-vs-observed distances."""
    stages = []
    context: Dict[str, Any] = {}
    if isinstance(pings, pd.DataFrame):
        context["pings"] = filter_pings(pings, rssi_threshold)
    else:
        stages.append(LoadPings(str(pings), rssi_threshold))
    stages += [
        BuildPeriodNetworks(period_length, n_periods, roster),
        UnionPeriods(group_size),
        FitModels(window=window),
        PredictAndCompare(runs, seed, evolution_options=options, progress=progress),
    ]
    return Pipeline(stages).run(context)


def _distance_table(context: Dict[str, Any]) -> pd.DataFrame:
    distances: pd.DataFrame = context["distances"]
    table = distances.pivot(index="model", columns="metric", values=["mean", "sd"])
    table.columns = [f"{metric}_{stat}" for stat, metric in table.columns]
    table = table.reset_index()
    table.insert(1, "fitted", [context["models"][m].label for m in table["model"]])
    return table[["model", "fitted", "tv_mean", "tv_sd", "hellinger_mean", "hellinger_sd"]]


def synthetic_fit_sequence(
    seed: int,
    n: int = 1000,
    weeks: int = 4,
    w: BetaParams = BetaParams(2.0, 2.0),
    degree: str = DEGREE_LAW,
) -> pd.DataFrame:
    """Pings rendering a Model 2 sequence, one period per week, for the fitting pipeline."""
    rng = child_rng(seed, 0)
    degrees = ModelFactory.parse_degree_law(degree).sample(n, rng)
    initial = configuration_model(degrees, rng).graph
    tn = evolve(initial, PersistenceModel.model2(w), weeks - 1, rng, max_retries=0)
    return synthesize_pings(tn.snapshots, DAY * WEEK, rng, weak_pings=n, empty_scans=n)


def table4(
    data: Optional[Union[str, Path]],
    scale: Scale,
    seed: int,
    options: Dict[str, Any],
    synthetic: bool = False,
    rssi_threshold: float = DEFAULT_RSSI_THRESHOLD,
    progress: bool = False,
) -> pd.DataFrame:
    if synthetic:
        context = fit_pipeline(
            synthetic_fit_sequence(seed),
            scale.replications,
            seed,
            options,
            period_length=DAY * WEEK,
            group_size=1,
            rssi_threshold=rssi_threshold,
            progress=progress,
        )
        return _distance_table(context)
    if data is None:
        raise DataError(
            f"table4 needs a local copy of the Bluetooth ping data (--data). {COPENHAGEN_CITATION}"
        )
    context = fit_pipeline(
        data,
        scale.replications,
        seed,
        options,
        n_periods=28,
        rssi_threshold=rssi_threshold,
        progress=progress,
    )
    return _distance_table(context)


def _header_lines(table: str, scale: Scale, seed: int, grid: str) -> List[str]:
    lines = [
        f"# table={table} scale={scale.name} replications={scale.replications} seed={seed}",
        f"# grid: {grid}",
    ]
    for (n, t), bounds in BOUNDS.get(table, {}).items():
        if n in scale.sizes and t in scale.steps:
            limits = " ".join(
                f"{key}<={value * scale.tolerance_factor:g}" for key, value in bounds.items()
            )
            lines.append(f"# bounds n={n} t={t}: {limits}")
    if table == "figure1":
        lines.append("# bounds: last-step median exceeds the step-1 median in >= 95% of runs")
    if table == "table4":
        lines.append("# bounds: tv_mean in [0.20, 0.28]; ordering m0 >= m1 >= m2 >= m3 on tv_mean")
    return lines


def reproduce(
    table: str,
    scale: Scale,
    seed: int,
    stream: TextIO,
    options: Optional[Dict[str, Any]] = None,
    workers: int = 1,
    data: Optional[Union[str, Path]] = None,
    synthetic: bool = False,
    progress: bool = False,
) -> pd.DataFrame:
    """Compute one table and write it to ``stream`` as commented CSV."""
    options = options or {}
    if table not in TABLES:
        raise ParameterError(f"Unknown table '{table}', expected one of {TABLES}")

    if table in ("table1", "table2", "table3"):
        frame = _simulation_table(table, scale, seed, options, workers, progress)
        grid = (
            f"model={TABLE_MODELS[table]} degree={DEGREE_LAW} "
            f"n={','.join(map(str, scale.sizes))} t={','.join(map(str, scale.steps))}"
        )
        header = _header_lines(table, scale, seed, grid)
    elif table == "figure1":
        frame, rising = figure1(scale, seed, options, workers, progress)
        grid = f"model={TABLE_MODELS['figure1']} degree={DEGREE_LAW} n=1000 t=100"
        header = _header_lines(table, scale, seed, grid)
        header.append(f"# rising_median_runs={rising}/{scale.replications}")
    else:
        frame = table4(data, scale, seed, options, synthetic=synthetic, progress=progress)
        source = "synthetic m2:2,2 sequence" if synthetic else f"pings={data} days=28 week=7"
        header = _header_lines(table, scale, seed, f"{source} runs={scale.replications}")

    for line in header:
        stream.write(line + "\n")
    frame.to_csv(stream, index=False, lineterminator="\n", float_format="%.6g")
    logger.info(f"Reproduced {table} at {scale.name} scale")
    return frame
