"""Run configuration parsing and the four commands end to end."""

import json
import math

import pandas as pd
import pytest

from StefanExact import solve_problem
from StefanExact.__main__ import main
from StefanExact.modules.exceptions import BracketError, ConfigError
from StefanExact.run_config import DEFAULT_TIMES, parse_config


def run_command(command, config, output, *extra):
    return main([command, "--config", str(config), "--output", str(output),
                 *extra])


# parse_config

def test_minimal_document_gets_defaults(unit_document):
    run = parse_config(json.dumps(unit_document), "solve")
    assert run.command == "solve"
    assert run.sampling.t == DEFAULT_TIMES
    assert run.sampling.x is None
    assert run.output.format == "csv"
    assert run.output.path is None
    assert run.integer_alpha
    assert run.echo()["route"] == "integer"


def test_non_integer_alpha_takes_kummer_route(unit_document):
    unit_document["problem"]["alpha"] = 1.5
    run = parse_config(json.dumps(unit_document), "verify")
    assert not run.integer_alpha
    assert run.echo()["route"] == "kummer"


def test_invalid_parameter_is_named(unit_document):
    unit_document["problem"]["gamma"] = 0
    with pytest.raises(ConfigError, match="gamma must be > 0"):
        parse_config(json.dumps(unit_document), "solve")


def test_malformed_json_reports_its_line():
    text = '{\n  "problem": {\n    "alpha": ,\n  }\n}'
    with pytest.raises(ConfigError) as info:
        parse_config(text, "solve")
    assert info.value.line == 3
    assert "line 3" in str(info.value)


@pytest.mark.parametrize("change, command, message", [
    (lambda d: d.update(extra=1), "solve", "unknown key 'extra'"),
    (lambda d: d["problem"]["liquid"].update(c=1), "solve", "unknown key"),
    (lambda d: None, "sweep", "sweep is required"),
    (lambda d: d["problem"].pop("h0"), "solve", "problem.h0 is required"),
    (lambda d: d.update(sampling={"t": [1, .5]}), "solve",
     "strictly increasing"),
    (lambda d: d.update(sampling={"t": [0, 1]}), "solve", "must be > 0"),
    (lambda d: d.update(command="limit"), "solve", "does not match"),
    (lambda d: d.update(sweep={"parameter": "omega", "values": [1]}), "sweep",
     "sweep.parameter"),
    (lambda d: d.update(output={"format": "xml"}), "solve", "csv or json"),
    (lambda d: d["problem"].update(alpha=True), "solve", "must be a number"),
    (lambda d: d.update(oracle={"nx": 250.5}), "verify",
     "oracle.nx must be an integer"),
    (lambda d: d.update(oracle={"max_steps": 1e3+.5}), "verify",
     "oracle.max_steps must be an integer"),
])
def test_invalid_documents(unit_document, change, command, message):
    change(unit_document)
    with pytest.raises(ConfigError, match=message):
        parse_config(json.dumps(unit_document), command)


def test_command_is_required(unit_document):
    with pytest.raises(ConfigError, match="command is required"):
        parse_config(json.dumps(unit_document))


def test_oracle_integers_are_kept(unit_document):
    unit_document["oracle"] = {"nx": 800., "max_steps": 1000, "cfl": .3}
    run = parse_config(json.dumps(unit_document), "verify")
    assert run.oracle == {"nx": 800, "max_steps": 1000, "cfl": .3}
    assert isinstance(run.oracle["nx"], int)


def test_limit_may_leave_h0_out(unit_document):
    del unit_document["problem"]["h0"]
    unit_document["limit"] = {"multipliers": [10, 100]}
    run = parse_config(json.dumps(unit_document), "limit")
    assert math.isinf(run.problem.h0)
    assert run.ladder_multipliers == (10., 100.)
    assert run.echo()["problem"]["h0"] is None


# solve

def test_solve_writes_profiles_and_summary(unit_document, write_config,
                                           tmp_path):
    unit_document["sampling"] = {"x": [0, .5, 1, 2], "t": [.1, 1]}
    output = tmp_path/"profiles.csv"
    assert run_command("solve", write_config(unit_document), output) == 0

    table = pd.read_csv(output)
    assert list(table.columns) == ["t", "x", "phase", "psi", "front"]
    assert len(table) == 8
    assert list(table["t"]) == [.1]*4 + [1.]*4
    liquid = table[table["phase"] == "liquid"]
    assert (liquid["x"] <= liquid["front"]).all()
    assert (liquid["psi"] >= 0.).all()
    assert (table[table["phase"] == "solid"]["psi"] <= 1e-12).all()

    summary = json.loads((tmp_path/"profiles_summary.json").read_text())
    assert summary["branch"] == "two-phase"
    assert summary["nu"] > 0.
    assert set(summary["coefficients"]) == {"e_l", "f_l", "e_s", "f_s"}
    assert summary["config"]["route"] == "integer"


def test_solve_default_grid(unit_document, write_config, tmp_path):
    output = tmp_path/"profiles.csv"
    assert run_command("solve", write_config(unit_document), output) == 0
    table = pd.read_csv(output)
    assert len(table) == 101*len(DEFAULT_TIMES)
    assert table["x"].iloc[0] == 0.


def test_solve_below_threshold(unit_document, write_config, tmp_path):
    unit_document["problem"]["h0"] = .1
    output = tmp_path/"profiles.csv"
    assert run_command("solve", write_config(unit_document), output) == 0
    table = pd.read_csv(output)
    assert set(table["phase"]) == {"solid"}
    assert (table["front"] == 0.).all()
    summary = json.loads((tmp_path/"profiles_summary.json").read_text())
    assert summary["branch"] == "conduction-only"
    assert summary["nu"] is None
    assert set(summary["coefficients"]) == {"e_s", "f_s"}


def test_solve_json(unit_document, write_config, tmp_path):
    unit_document["sampling"] = {"x": [0, 1], "t": [1]}
    output = tmp_path/"solution.json"
    code = run_command("solve", write_config(unit_document), output,
                       "--format", "json")
    assert code == 0
    document = json.loads(output.read_text())
    assert {"nu", "coefficients", "profiles", "branch"} <= set(document)
    assert len(document["profiles"]) == 2


def test_solve_is_deterministic(unit_document, write_config, tmp_path):
    config = write_config(unit_document)
    first, second = tmp_path/"first.csv", tmp_path/"second.csv"
    assert run_command("solve", config, first) == 0
    assert run_command("solve", config, second) == 0
    assert first.read_bytes() == second.read_bytes()
    assert (tmp_path/"first_summary.json").read_bytes() == \
        (tmp_path/"second_summary.json").read_bytes()


def test_output_path_from_document(unit_document, write_config, tmp_path):
    output = tmp_path/"from_document.json"
    unit_document["output"] = {"path": str(output), "format": "json"}
    assert main(["solve", "--config", str(write_config(unit_document))]) == 0
    assert "profiles" in json.loads(output.read_text())


# verify

def test_verify_passes(unit_document, write_config, tmp_path):
    output = tmp_path/"report.json"
    code = run_command("verify", write_config(unit_document), output,
                       "--format", "json")
    assert code == 0
    report = json.loads(output.read_text())
    assert report["passed"]
    checks = {row["check"]: row["status"] for row in report["checks"]}
    assert checks["oracle_nu"] == "pass"
    assert checks["stefan_balance"] == "pass"
    assert checks["convective_boundary"] == "pass"


def test_verify_catches_a_shifted_nu(unit_document, write_config, tmp_path):
    output = tmp_path/"report.csv"
    code = run_command("verify", write_config(unit_document), output,
                       "--nu-shift", "1e-3")
    assert code == 1
    report = pd.read_csv(output)
    status = dict(zip(report["check"], report["status"]))
    assert status["stefan_balance"] == "fail"


def test_verify_below_threshold_skips_the_oracle(unit_document, write_config,
                                                 tmp_path):
    unit_document["problem"]["h0"] = .1
    output = tmp_path/"report.csv"
    assert run_command("verify", write_config(unit_document), output) == 0
    report = pd.read_csv(output)
    status = dict(zip(report["check"], report["status"]))
    assert status["oracle_nu"] == "skipped"
    assert status["oracle_balance"] == "skipped"
    assert "stefan_balance" not in status


def test_verify_skips_an_oracle_over_budget(unit_document, write_config,
                                            tmp_path):
    unit_document["oracle"] = {"max_steps": 1000}
    output = tmp_path/"report.csv"
    assert run_command("verify", write_config(unit_document), output) == 0
    report = pd.read_csv(output)
    status = dict(zip(report["check"], report["status"]))
    assert status["oracle_nu"] == "skipped"
    assert status["oracle_balance"] == "skipped"
    assert status["stefan_balance"] == "pass"


# sweep

def test_sweep_keeps_the_order_of_values(unit_document, write_config,
                                         tmp_path, monkeypatch):
    monkeypatch.setenv("STEFAN_EXACT_THREADS", "2")
    unit_document["sweep"] = {"parameter": "h0", "values": [.1, 2, 10, 50]}
    output = tmp_path/"sweep.csv"
    assert run_command("sweep", write_config(unit_document), output) == 0
    table = pd.read_csv(output)
    assert list(table["value"]) == [.1, 2., 10., 50.]
    assert list(table["branch"]) == ["conduction-only"] + ["two-phase"]*3
    assert math.isnan(table["nu"].iloc[0])
    nus = table["nu"].iloc[1:].to_numpy()
    assert (nus[1:] > nus[:-1]).all()


def test_sweep_json_writes_null_for_missing_nu(unit_document, write_config,
                                               tmp_path):
    unit_document["sweep"] = {"parameter": "k_s", "values": [1, 100]}
    output = tmp_path/"sweep.json"
    code = run_command("sweep", write_config(unit_document), output,
                       "--format", "json")
    assert code == 0
    rows = json.loads(output.read_text())["rows"]
    assert rows[0]["branch"] == "two-phase"
    assert rows[1]["branch"] == "conduction-only"
    assert rows[1]["nu"] is None


# limit

def test_limit_default_ladder(unit_document, write_config, tmp_path):
    del unit_document["problem"]["h0"]
    output = tmp_path/"limit.json"
    code = run_command("limit", write_config(unit_document), output,
                       "--format", "json")
    assert code == 0
    document = json.loads(output.read_text())
    gaps = [row["gap"] for row in document["rows"]]
    assert len(gaps) == 6
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert document["threshold"] == pytest.approx(1./math.sqrt(math.pi))
    assert len(document["temperature"]) == 6


def test_limit_single_value(unit_document, write_config, tmp_path):
    unit_document["limit"] = {"h0_ladder": [10]}
    output = tmp_path/"limit.csv"
    assert run_command("limit", write_config(unit_document), output) == 0
    assert len(pd.read_csv(output)) == 1


def test_limit_below_threshold(unit_document, write_config, tmp_path):
    unit_document["limit"] = {"h0_ladder": [.1, 10]}
    output = tmp_path/"limit.csv"
    assert run_command("limit", write_config(unit_document), output) == 2
    assert not output.exists()


# exit codes

def test_invalid_configuration_exits_with_2(unit_document, write_config,
                                            tmp_path):
    unit_document["problem"]["gamma"] = -1
    output = tmp_path/"profiles.csv"
    assert run_command("solve", write_config(unit_document), output) == 2
    assert run_command("solve", tmp_path/"missing.json", output) == 2


def test_unwritable_output_exits_with_2(unit_document, write_config,
                                         tmp_path):
    blocker = tmp_path/"blocker"
    blocker.write_text("not a directory", encoding="utf-8")
    output = blocker/"profiles.csv"
    assert run_command("solve", write_config(unit_document), output) == 2
    assert not output.exists()


def test_numerical_failure_exits_with_3(unit_document, write_config, tmp_path,
                                        monkeypatch):
    def failing(problem):
        raise BracketError("no sign change")

    monkeypatch.setattr(solve_problem, "solve", failing)
    output = tmp_path/"profiles.csv"
    assert run_command("solve", write_config(unit_document), output) == 3


def test_subcommand_is_required():
    with pytest.raises(SystemExit):
        main([])
