import sys
from typing import Optional, Tuple

import click
import numpy as np

from .config.app_config import AppConfig
from .config.logging_config import LOG_LEVELS, get_logger
from .dataio.pings import DEFAULT_RSSI_THRESHOLD
from .dataio.sequences import DAY, WEEK, save_sequence
from .epidemics.reproduction import (
    analytic_r0,
    analytic_r_star,
    h1_tilde_derivative,
    transmission_probability,
)
from .epidemics.pgf import Pgf
from .epidemics.sir import simulate_sir
from .errors import EXIT_USAGE, PersistnetError
from .estimate.estimators import estimate_report
from .experiments import (
    SCALES,
    TABLES,
    bias_summary,
    experiment_model,
    fit_pipeline,
    get_scale,
    reproduce as reproduce_table,
    run_experiment,
    write_experiment,
)
from .factory.component_factory import ModelFactory
from .metrics.distances import METRICS, get_metric
from .models.reports import EstimateReport
from .network.configuration import configuration_model
from .network.formats import (
    load_degree_distribution,
    load_edge_list,
    load_temporal_edge_list,
    write_edge_list,
    write_temporal_edge_list,
)
from .network.persistence import ModelKind
from .network.temporal import evolve as evolve_network, persistence_drift_report

logger = get_logger("cli")


class PersistnetGroup(click.Group):
    """Click group that maps library errors and usage errors onto the documented exit codes."""

    def make_context(self, info_name, args, parent=None, **extra):
        try:
            return super().make_context(info_name, args, parent=parent, **extra)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            e.exit_code = EXIT_USAGE
            raise
        except PersistnetError as e:
            logger.debug("Command failed", exc_info=True)
            click.echo(f"Error: {e}", err=True)
            ctx.exit(e.exit_code)


def _factory(ctx: click.Context) -> ModelFactory:
    return ModelFactory(ctx.obj.config if ctx.obj is not None else {})


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _model_kind(spec: str) -> ModelKind:
    try:
        return ModelKind(spec.split(":", 1)[0].strip().lower())
    except ValueError:
        raise click.BadParameter(
            f"expected one of m0, m1, m2, m3, got '{spec}'", param_hint="--model"
        )


@click.group(cls=PersistnetGroup)
@click.option(
    "--config", "config_path", type=click.Path(dir_okay=False), help="Path to config file"
)
@click.option("--log-level", type=click.Choice(list(LOG_LEVELS)), help="Set logging level")
@click.option("--log-file", type=click.Path(dir_okay=False), help="Path to log file")
@click.pass_context
def cli(
    ctx: click.Context,
    config_path: Optional[str],
    log_level: Optional[str],
    log_file: Optional[str],
):
    """persistnet - temporal configuration-model networks, persistence estimation and epidemics."""
    overrides = {"log_level": log_level, "log_file": log_file}
    app_config = AppConfig(config_path, logging_overrides=overrides)
    ctx.obj = app_config
    # per-command flag defaults from the config file; explicit flags still win
    ctx.default_map = app_config.command_defaults()


@cli.command()
@click.option("--n", "n", type=int, required=True, help="Number of nodes")
@click.option(
    "--degree",
    default="poisson:6",
    show_default=True,
    help="Degree law: poisson:<mean> or const:<k>",
)
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@click.option(
    "--output", "-o", type=click.File("w"), default="-", help="Edge-list output (default: stdout)"
)
def generate(n: int, degree: str, seed: int, output):
    """Sample a degree sequence and build a configuration-model graph."""
    rng = _rng(seed)
    degrees = ModelFactory.parse_degree_law(degree).sample(n, rng)
    if degrees.repaired:
        click.echo("Warning: odd degree sum repaired by adding one stub", err=True)
    result = configuration_model(degrees, rng)
    write_edge_list(result.graph, output)
    click.echo(f"nodes={n} edges={result.graph.edge_count} discards={result.discards}", err=True)


@cli.command()
@click.option(
    "--input",
    "-i",
    "input_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="Initial edge list",
)
@click.option("--model", required=True, help="Persistence model, e.g. m1:0.8 or m2:1,4@2")
@click.option("--steps", "-t", type=int, required=True, help="Number of transitions T")
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@click.option(
    "--output",
    "-o",
    type=click.File("w"),
    default="-",
    help="Temporal edge-list output (default: stdout)",
)
@click.pass_context
def evolve(ctx: click.Context, input_path: str, model: str, steps: int, seed: int, output):
    """Evolve an edge list into G_0..G_T."""
    tn = evolve_network(
        load_edge_list(input_path),
        ModelFactory.parse_model(model),
        steps,
        _rng(seed),
        **_factory(ctx).evolution_options(),
    )
    write_temporal_edge_list(tn.snapshots, output)
    discards = sum(stats.discards for stats in tn.step_stats)
    edges = f"{tn[0].edge_count}->{tn[-1].edge_count}"
    click.echo(f"steps={tn.steps} edges={edges} discards={discards}", err=True)


@cli.command()
@click.option(
    "--input",
    "-i",
    "input_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="Initial edge list",
)
@click.option("--model", required=True, help="Fixed-forever m2 or m3 model, e.g. m2:4,1")
@click.option(
    "--steps", "-t", type=int, default=100, show_default=True, help="Number of transitions T"
)
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@click.pass_context
def drift(ctx: click.Context, input_path: str, model: str, steps: int, seed: int):
    """Quartiles of the persistence probabilities of surviving G_0 edges, per step."""
    tn = evolve_network(
        load_edge_list(input_path),
        ModelFactory.parse_model(model),
        steps,
        _rng(seed),
        **_factory(ctx).evolution_options(),
    )
    click.echo("step,survivors,q1,median,q3")
    for row in persistence_drift_report(tn):
        click.echo(f"{row.step},{row.survivors},{row.q1:.6g},{row.median:.6g},{row.q3:.6g}")


@cli.command()
@click.option(
    "--input",
    "-i",
    "input_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="Temporal edge list",
)
@click.option(
    "--model", default="m1", show_default=True, help="Model whose parameters to derive (m0..m3)"
)
@click.option("--window", type=int, help="Window length T0 for the windowed estimators")
@click.option(
    "--format", "fmt", type=click.Choice(["record", "csv"]), default="record", show_default=True
)
def estimate(input_path: str, model: str, window: Optional[int], fmt: str):
    """Estimate persistence moments from an observed sequence."""
    snapshots, _, _ = load_temporal_edge_list(input_path)
    report = estimate_report(snapshots, _model_kind(model), window)
    if fmt == "csv":
        click.echo(EstimateReport.csv_header())
        click.echo(report.to_csv_row())
    else:
        click.echo(report.to_record())


@cli.command()
@click.option(
    "--input",
    "-i",
    "input_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="Initial edge list",
)
@click.option("--model", required=True, help="Persistence model, e.g. m1:0.8")
@click.option("--beta", type=float, required=True, help="Per-step transmission probability")
@click.option("--gamma", type=float, required=True, help="Per-step recovery probability")
@click.option(
    "--seeds", type=int, default=1, show_default=True, help="Number of initially infected nodes"
)
@click.option(
    "--max-steps", type=int, default=1000, show_default=True, help="Stop after this many steps"
)
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@click.option("--counts-out", type=click.Path(dir_okay=False), help="CSV of step,S,I,R")
@click.option(
    "--nodes-out",
    type=click.Path(dir_okay=False),
    help="CSV of node,infected_at,recovered_at,infector",
)
@click.pass_context
def sir(
    ctx: click.Context,
    input_path: str,
    model: str,
    beta: float,
    gamma: float,
    seeds: int,
    max_steps: int,
    seed: int,
    counts_out: Optional[str],
    nodes_out: Optional[str],
):
    """Simulate a discrete-time SIR epidemic on an evolving network."""
    factory = _factory(ctx)
    trace = simulate_sir(
        load_edge_list(input_path),
        ModelFactory.parse_model(model),
        ModelFactory.create_epidemic_params(beta, gamma, seeds),
        max_steps,
        _rng(seed),
        early_fraction=factory.early_fraction(),
        **factory.evolution_options(),
    )
    if counts_out:
        trace.write_counts(counts_out)
    if nodes_out:
        trace.write_nodes(nodes_out)
    click.echo(
        f"steps={trace.steps} final_size={trace.final_size} "
        f"r0={trace.measured_r0():.6g} r_star={trace.measured_r_star():.6g}"
    )


@cli.command()
@click.option("--degree", help="Degree law: poisson:<mean> or const:<k>")
@click.option("--degree-file", type=click.Path(dir_okay=False), help="degree,mass CSV or edge list")
@click.option("--beta", type=float, required=True, help="Per-step transmission probability")
@click.option("--gamma", type=float, required=True, help="Per-step recovery probability")
@click.option("--p", "p", type=float, required=True, help="Constant edge persistence probability")
def rstar(degree: Optional[str], degree_file: Optional[str], beta: float, gamma: float, p: float):
    """Analytic transmissibility and reproductive numbers."""
    if (degree is None) == (degree_file is None):
        raise click.UsageError("Give exactly one of --degree and --degree-file")
    if degree:
        pgf = ModelFactory.parse_degree_law(degree).pgf()
    else:
        pgf = Pgf(load_degree_distribution(degree_file))
    tau = transmission_probability(beta, gamma, p)
    click.echo(
        f"tau={tau:.10g} r0={analytic_r0(pgf, beta, gamma, p):.10g} "
        f"h1_tilde_derivative={h1_tilde_derivative(pgf, gamma, p):.10g} "
        f"r_star={analytic_r_star(pgf, beta, gamma, p):.10g}"
    )


@cli.command()
@click.option(
    "--a",
    "a_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="degree,mass CSV or edge list",
)
@click.option(
    "--b",
    "b_path",
    type=click.Path(dir_okay=False),
    required=True,
    help="degree,mass CSV or edge list",
)
@click.option("--metric", type=click.Choice(sorted(METRICS)), default="tv", show_default=True)
def distance(a_path: str, b_path: str, metric: str):
    """Distance between two degree distributions."""
    value = get_metric(metric)(load_degree_distribution(a_path), load_degree_distribution(b_path))
    click.echo(f"{value:.10g}")


@cli.command()
@click.option(
    "--pings", "pings_path", type=click.Path(dir_okay=False), required=True, help="Ping CSV"
)
@click.option("--rssi-threshold", type=float, default=DEFAULT_RSSI_THRESHOLD, show_default=True)
@click.option(
    "--period-length", type=int, default=DAY, show_default=True, help="Seconds per period"
)
@click.option(
    "--group-size",
    type=int,
    default=WEEK,
    show_default=True,
    help="Periods merged into one network",
)
@click.option("--n-periods", type=int, help="Number of periods to keep (default: all)")
@click.option("--window", type=int, help="Window T0 carried into fitted m2/m3 models")
@click.option(
    "--runs", type=int, default=100, show_default=True, help="Forward predictions per model"
)
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed")
@click.option(
    "--sequence-out", type=click.Path(dir_okay=False), help="Write the merged sequence here"
)
@click.pass_context
def fit(
    ctx: click.Context,
    pings_path: str,
    rssi_threshold: float,
    period_length: int,
    group_size: int,
    n_periods: Optional[int],
    window: Optional[int],
    runs: int,
    seed: int,
    sequence_out: Optional[str],
):
    """Fit all four persistence models to ping data and score their predictions."""
    if runs < 1:
        raise click.BadParameter("must be at least 1", param_hint="--runs")
    context = fit_pipeline(
        pings_path,
        runs,
        seed,
        _factory(ctx).evolution_options(),
        period_length=period_length,
        group_size=group_size,
        n_periods=n_periods,
        rssi_threshold=rssi_threshold,
        window=window,
    )
    if sequence_out:
        save_sequence(context["sequence"], sequence_out)
    for label, model in context["models"].items():
        click.echo(f"# {label} fitted={model.label}")
    context["distances"].to_csv(sys.stdout, index=False, lineterminator="\n", float_format="%.6g")


@cli.command()
@click.option("--model", required=True, help="Persistence model, e.g. m1:0.8 or m2:1,4@2")
@click.option("--n", "n", type=int, required=True, help="Number of nodes")
@click.option("--steps", "-t", type=int, required=True, help="Number of transitions T")
@click.option("--t0", type=int, help="Window T0 replacing the model spec's @T0")
@click.option(
    "--degree",
    default="poisson:6",
    show_default=True,
    help="Degree law: poisson:<mean> or const:<k>",
)
@click.option("--replications", "-r", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed")
@click.option("--output-dir", type=click.Path(file_okay=False), default=".", show_default=True)
@click.option("--workers", type=int, help="Worker processes (default: experiments.workers)")
@click.option("--progress", is_flag=True, help="Show a progress bar")
@click.pass_context
def replicate(
    ctx: click.Context,
    model: str,
    n: int,
    steps: int,
    t0: Optional[int],
    degree: str,
    replications: int,
    seed: int,
    output_dir: str,
    workers: Optional[int],
    progress: bool,
):
    """Run one experiment cell and write its per-replication estimates."""
    factory = _factory(ctx)
    config = ModelFactory.create_experiment_config(
        model=model,
        n=n,
        t=steps,
        t0=t0,
        degree=degree,
        replications=replications,
        seed=seed,
        output_dir=output_dir,
    )
    options = factory.evolution_options()
    estimates = run_experiment(config, options, workers or factory.workers(), progress)
    path = write_experiment(config, estimates)
    click.echo(f"wrote {path}", err=True)
    summary = bias_summary(experiment_model(config), estimates)
    click.echo(" ".join(f"{key}={value:.6g}" for key, value in summary.items()))


@cli.command()
@click.argument("table", type=click.Choice(TABLES))
@click.option("--scale", type=click.Choice(SCALES), default="quick", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="Master seed")
@click.option("--replications", type=int, help="Override the scale's replication count")
@click.option("--workers", type=int, help="Worker processes (default: experiments.workers)")
@click.option("--data", type=click.Path(dir_okay=False), help="Ping CSV for table4")
@click.option(
    "--synthetic", is_flag=True, help="table4 on a synthetic m2 sequence instead of --data"
)
@click.option(
    "--output", "-o", type=click.File("w"), default="-", help="CSV output (default: stdout)"
)
@click.option("--progress", is_flag=True, help="Show progress bars")
@click.pass_context
def reproduce(
    ctx: click.Context,
    table: str,
    scale: str,
    seed: int,
    replications: Optional[int],
    workers: Optional[int],
    data: Optional[str],
    synthetic: bool,
    output,
    progress: bool,
):
    """Reproduce a simulation table, the fitting table or the drift summary as CSV."""
    factory = _factory(ctx)
    reproduce_table(
        table,
        get_scale(scale, replications),
        seed,
        output,
        options=factory.evolution_options(),
        workers=workers or factory.workers(),
        data=data,
        synthetic=synthetic,
        progress=progress,
    )


@cli.command()
def help():
    """Show help information."""
    ctx = click.get_current_context()
    click.echo(ctx.parent.get_help() if ctx.parent else ctx.get_help())
    commands = cli.list_commands(ctx)
    for cmd in commands:
        if cmd != "help":
            click.echo(f"\n{cmd} command:")
            cmd_obj = cli.get_command(ctx, cmd)
            click.echo(cmd_obj.get_help(click.Context(cmd_obj, info_name=cmd, parent=ctx.parent)))


def main(args: Optional[Tuple[str, ...]] = None) -> None:
    cli.main(args=args, prog_name="persistnet")


if __name__ == "__main__":
    main()
