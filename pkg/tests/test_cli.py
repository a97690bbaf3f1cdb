import re

import pytest
from click.testing import CliRunner

from persistnet.cli import cli
from persistnet.dataio import DAY
from persistnet.epidemics import transmission_probability
from persistnet.network.formats import save_edge_list, save_temporal_edge_list
from persistnet.network.graph import Graph

from .conftest import make_cm_graph


@pytest.fixture
def runner(monkeypatch, tmp_path):
    for name in ("PERSISTNET_CONFIG", "PERSISTNET_LOG_LEVEL", "PERSISTNET_LOG_FILE"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    return CliRunner()


def _fields(text):
    return dict(re.findall(r"(\w+)=(\S*)", text))


def test_generate_two_nodes(runner):
    result = runner.invoke(cli, ["generate", "--n", "2", "--degree", "const:1", "-o", "g.txt"])
    assert result.exit_code == 0
    with open("g.txt") as f:
        assert f.read() == "# nodes=2\n0\t1\n"


def test_generate_repairs_odd_degree_sum(runner):
    result = runner.invoke(cli, ["generate", "--n", "3", "--degree", "const:1", "-o", "g.txt"])
    assert result.exit_code == 0
    assert "odd degree sum repaired" in result.output


def test_generate_poisson_edge_count(runner):
    result = runner.invoke(cli, ["generate", "--n", "1000", "--seed", "3", "-o", "g.txt"])
    assert result.exit_code == 0
    edges = int(_fields(result.output)["edges"])
    assert 2700 <= edges <= 3300


def test_generate_defaults_from_config(runner):
    with open("config.yaml", "w") as f:
        f.write("commands:\n  generate:\n    n: 4\n    degree: const:1\n")
    result = runner.invoke(cli, ["generate", "-o", "g.txt"])
    assert result.exit_code == 0
    assert _fields(result.output)["edges"] == "2"


def test_evolve_then_estimate(runner):
    save_edge_list(make_cm_graph(300, 6.0, 1), "g.txt")
    result = runner.invoke(cli, ["evolve", "-i", "g.txt", "--model", "m1:1", "--steps", "3", "-o", "seq.tsv"])
    assert result.exit_code == 0
    result = runner.invoke(cli, ["estimate", "-i", "seq.tsv"])
    assert result.exit_code == 0
    fields = _fields(result.output)
    assert fields["model"] == "m1"
    assert float(fields["z1"]) == 1.0 and float(fields["zbar"]) == 1.0


def test_estimate_csv_format(runner):
    g = Graph(4, frozenset({(0, 1), (2, 3)}))
    h = Graph(4, frozenset({(0, 1), (1, 2)}))
    save_temporal_edge_list([g, h, h], "seq.tsv")
    result = runner.invoke(cli, ["estimate", "-i", "seq.tsv", "--format", "csv"])
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "model,n,t,t0,z1,zbar,v1,vbar,alpha,beta,w_sd,w_q1,w_median,w_q3"
    assert lines[1].startswith("m1,4,2,,0.5,0.75,0.5,0.5,,")


def test_infeasible_fit_exits_with_3(runner):
    g = Graph(4, frozenset({(0, 1), (2, 3)}))
    save_temporal_edge_list([g, g, g], "seq.tsv")
    result = runner.invoke(cli, ["estimate", "-i", "seq.tsv", "--model", "m2"])
    assert result.exit_code == 3
    assert "Infeasible moments" in result.output


def test_missing_input_exits_with_2(runner):
    result = runner.invoke(cli, ["estimate", "-i", "absent.tsv"])
    assert result.exit_code == 2
    assert "not found" in result.output


def test_bad_model_spec_exits_with_1(runner):
    save_edge_list(Graph(2, frozenset({(0, 1)})), "g.txt")
    result = runner.invoke(cli, ["evolve", "-i", "g.txt", "--model", "m7", "--steps", "1"])
    assert result.exit_code == 1


def test_missing_option_exits_with_1(runner):
    result = runner.invoke(cli, ["generate"])
    assert result.exit_code == 1


def test_rstar_static_poisson(runner):
    result = runner.invoke(cli, ["rstar", "--degree", "poisson:6", "--beta", "0.05", "--gamma", "0.2", "--p", "1"])
    assert result.exit_code == 0
    fields = _fields(result.output)
    tau = transmission_probability(0.05, 0.2, 1.0)
    assert float(fields["tau"]) == pytest.approx(tau)
    assert float(fields["r_star"]) == pytest.approx(6 * tau, rel=1e-8)


def test_rstar_needs_exactly_one_degree_source(runner):
    result = runner.invoke(cli, ["rstar", "--beta", "0.1", "--gamma", "0.2", "--p", "0.5"])
    assert result.exit_code == 1


def test_distance_between_identical_graphs(runner):
    save_edge_list(make_cm_graph(100, 4.0, 2), "g.txt")
    result = runner.invoke(cli, ["distance", "--a", "g.txt", "--b", "g.txt", "--metric", "hellinger"])
    assert result.exit_code == 0
    assert float(result.output.strip()) == 0.0


def test_sir_writes_counts(runner):
    save_edge_list(make_cm_graph(200, 6.0, 3), "g.txt")
    args = ["sir", "-i", "g.txt", "--model", "m1:0.5", "--beta", "0.2", "--gamma", "0.3"]
    args += ["--seeds", "3", "--counts-out", "counts.csv"]
    result = runner.invoke(cli, args)
    assert result.exit_code == 0
    fields = _fields(result.output)
    with open("counts.csv") as f:
        lines = f.read().splitlines()
    assert lines[0] == "step,S,I,R"
    assert len(lines) == int(fields["steps"]) + 2


def test_drift_rejects_model1(runner):
    save_edge_list(Graph(2, frozenset({(0, 1)})), "g.txt")
    result = runner.invoke(cli, ["drift", "-i", "g.txt", "--model", "m1:0.5", "--steps", "2"])
    assert result.exit_code == 1


def test_fit_on_ping_file(runner):
    weeks = [
        [(1, 2), (3, 4), (5, 6), (7, 8), (9, 10), (11, 12)],
        [(1, 2), (3, 4), (5, 6), (1, 3), (2, 4)],
        [(1, 2), (3, 4), (5, 7)],
    ]
    lines = ["timestamp,user_a,user_b,rssi"]
    for week, edges in enumerate(weeks):
        lines += [f"{week * 7 * DAY + i},{a},{b},-50" for i, (a, b) in enumerate(edges)]
    lines.append(f"{20 * DAY},1,2,-50")  # closes the third week
    with open("pings.csv", "w") as f:
        f.write("\n".join(lines) + "\n")
    result = runner.invoke(cli, ["fit", "--pings", "pings.csv", "--runs", "2", "--sequence-out", "weeks.tsv"])
    assert result.exit_code == 0, result.output
    assert "# m1 fitted=m1:0.5" in result.output
    assert "model,fitted,metric,mean,sd,runs" in result.output
    with open("weeks.tsv") as f:
        assert f.readline() == "# nodes=12 steps=2\n"


def test_reproduce_table4_without_data(runner):
    result = runner.invoke(cli, ["reproduce", "table4"])
    assert result.exit_code == 2
    assert "--data" in result.output


def test_missing_explicit_config(runner):
    result = runner.invoke(cli, ["--config", "absent.yaml", "help"])
    assert result.exit_code == 2


def test_help_lists_commands(runner):
    result = runner.invoke(cli, ["help"])
    assert result.exit_code == 0
    commands = ("generate", "evolve", "estimate", "sir", "rstar", "distance", "fit", "replicate")
    for command in commands + ("reproduce",):
        assert f"{command} command:" in result.output


def test_replicate_writes_estimates(runner):
    result = runner.invoke(
        cli,
        ["replicate", "--model", "m2:1,4@2", "--n", "60", "-t", "4", "-r", "2", "--seed", "3"]
        + ["--output-dir", "out"],
    )
    assert result.exit_code == 0, result.output
    assert "wrote out/m2_1_4_2_n60_t4_seed3.csv" in result.output
    assert "initial_abs_rel_bias=" in result.output and "windowed_sd_abs_rel_bias=" in result.output
    with open("out/m2_1_4_2_n60_t4_seed3.csv") as f:
        assert f.readline() == "replication,z1,zbar,v1,vbar\n"


def test_replicate_rejects_window_on_model1(runner):
    result = runner.invoke(cli, ["replicate", "--model", "m1:0.8", "--n", "20", "-t", "2", "--t0", "2"])
    assert result.exit_code == 1
