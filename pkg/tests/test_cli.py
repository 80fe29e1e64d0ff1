import csv
import json
import math

import numpy as np
import pytest

from nehari_orbits.cli import (
    CONFIG_SCHEMA,
    ConfigError,
    EXIT_CONDITIONS,
    EXIT_NOT_CERTIFIED,
    EXIT_OK,
    EXIT_USAGE,
    RunConfig,
    build_model,
    load_config,
    main,
    parse_override,
)
from nehari_orbits.symfun import Symmetry, basis_matrix, make_space

FAST = ["--set", "audit_rays=20", "--set", "solver.restarts=2"]


def result(d):
    return json.loads((d / "result.json").read_text())


@pytest.fixture(scope="module")
def direct_run(tmp_path_factory):
    out = tmp_path_factory.mktemp("direct")
    code = main(["solve-direct", "--period", "1.0", "--out", str(out), *FAST])
    return code, out


def test_solve_direct_outputs(direct_run):
    code, out = direct_run
    assert code == EXIT_OK
    assert {p.name for p in out.iterdir()} == {"result.json", "trajectory.csv", "orbit.svg"}
    doc = result(out)
    assert doc["status"] == "certified" and doc["exit_code"] == 0
    assert doc["certificate"]["certified"]
    assert doc["candidate"]["action_value"] == pytest.approx(252.0969601723, rel=1e-10)
    assert doc["config"]["mode"] == "solve_direct"
    assert doc["seed"] == 0 and doc["library"]["name"] == "nehari_orbits"


def test_trajectory_matches_coefficients(direct_run):
    _, out = direct_run
    doc = result(out)
    with (out / "trajectory.csv").open() as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "x_1", "v_1"]
    data = np.array(rows[1:], dtype=float)
    sp = make_space(1.0, 1, Symmetry.E1, 8)
    c = np.array(doc["candidate"]["coefficients"])
    np.testing.assert_allclose(data[:, 1], (basis_matrix(sp, data[:, 0]) @ c)[:, 0], atol=1e-12)
    np.testing.assert_allclose(data[:, 2], (basis_matrix(sp, data[:, 0], 1) @ c)[:, 0], atol=1e-10)


def test_config_echo_round_trip(direct_run, tmp_path):
    _, out = direct_run
    doc = result(out)
    cfg = RunConfig.from_dict(doc["config"])
    assert cfg.to_dict() == doc["config"]
    # rerunning the echoed config reproduces the numbers
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(doc["config"]))
    assert main(["solve-direct", "--config", str(cfg_path), "--out", str(tmp_path)]) == EXIT_OK
    again = result(tmp_path)
    assert again["candidate"] == doc["candidate"]
    assert again["certificate"] == doc["certificate"]


def test_solve_dual(tmp_path):
    code = main(["solve-dual", "--period", str(2 * math.pi), "--modes", "8", "--out", str(tmp_path),
                 "--set", "truncation_check=false", *FAST])
    doc = result(tmp_path)
    # truncation is part of the certificate, so skipping it cannot certify
    assert code == EXIT_NOT_CERTIFIED
    assert doc["candidate"]["action_value"] == pytest.approx(math.pi / 2, rel=1e-9)
    lo, hi = doc["candidate"]["radius_range"]
    assert lo == pytest.approx(1.0, abs=1e-8) and hi == pytest.approx(1.0, abs=1e-8)
    assert doc["certificate"]["checks"]["truncation"] is False


@pytest.mark.parametrize("cmd,extra", [
    ("check-conditions", ["--set", "model.name=quadratic"]),
    ("check-conditions", ["--set", "model.name=quadratic", "--set", "formulation=dual"]),
    ("solve-direct", ["--period", "1", "--set", "model.name=quadratic"]),
])
def test_condition_failures_exit_3(tmp_path, cmd, extra):
    assert main([cmd, "--out", str(tmp_path), *extra]) == EXIT_CONDITIONS
    doc = result(tmp_path)
    assert doc["status"] == "condition_failure"
    assert doc["conditions"]["conditions"]["V1" if "dual" not in extra[-1] else "H1"]["verdict"] == "fail"


def test_check_conditions_pass(tmp_path):
    assert main(["check-conditions", "--out", str(tmp_path)]) == EXIT_OK
    assert result(tmp_path)["status"] == "conditions_pass"


def test_certify_refutes_subharmonic(tmp_path):
    coeffs = [[0.0], [1.0], [0.0], [0.0]]
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"mode": "certify", "model": {"name": "power", "params": {"beta": 4}},
                               "period_T": 1.0, "num_modes": 4, "coefficients": coeffs,
                               "audit_rays": 10}))
    assert main(["certify", "--config", str(cfg), "--out", str(tmp_path)]) == EXIT_NOT_CERTIFIED
    mp = result(tmp_path)["certificate"]["minimal_period"]
    assert mp["status"] == "REFUTED" and mp["active_frequency_gcd"] == 3


def test_certify_previous_result(direct_run, tmp_path):
    _, out = direct_run
    code = main(["certify", "--period", "1.0", "--out", str(tmp_path), "--set", f"input={out / 'result.json'}",
                 *FAST])
    assert code == EXIT_OK
    doc = result(tmp_path)
    assert doc["candidate"]["coefficients"] == result(out)["candidate"]["coefficients"]


@pytest.mark.parametrize("argv", [
    ["solve-direct"],                                            # missing period
    ["solve-direct", "--period", "1", "--set", "bogus=1"],       # unknown key
    ["solve-direct", "--period", "-1"],
    ["solve-direct", "--period", "1", "--set", "solver.shrink=2"],
    ["sweep", "--set", "sweep_periods=[]"],
    ["sweep", "--set", "sweep_periods=[2, 1]"],
    ["certify", "--period", "1"],                                # nothing to certify
    ["fenchel", "--set", "model.plugin=not a plugin"],
    ["no-such-command"],
    ["solve-direct", "--config", "/nonexistent.json"],
])
def test_usage_errors_exit_1(tmp_path, argv, capsys):
    assert main([*argv, "--out", str(tmp_path)] if argv[0] != "no-such-command" else argv) == EXIT_USAGE


def test_fenchel_table(tmp_path):
    assert main(["fenchel", "--out", str(tmp_path), "--set", "fenchel_points=20"]) == EXIT_OK
    fen = result(tmp_path)["fenchel"]
    assert len(fen["rows"]) == 20
    assert fen["max_rel_err"] < 1e-8 and fen["young_max_rel"] < 1e-8
    assert 1 / fen["alpha"] + 1 / 4 == pytest.approx(1.0)


def test_sweep(tmp_path):
    code = main(["sweep", "--out", str(tmp_path), "--set", "sweep_periods=[0.5, 1.0, 2.0]",
                 "--set", "truncation_check=false", *FAST])
    doc = result(tmp_path)
    rows = doc["sweep"]["rows"]
    assert [r["period_T"] for r in rows] == [0.5, 1.0, 2.0]
    # c_T = (4K)^4 / (12 T^3) decreases in T
    vals = [r["action_value"] for r in rows]
    assert vals[0] > vals[1] > vals[2]
    assert vals[0] / vals[1] == pytest.approx(8.0, rel=1e-8)
    assert code == EXIT_NOT_CERTIFIED          # no truncation check
    assert (tmp_path / "orbit.svg").exists() and not (tmp_path / "trajectory.csv").exists()


def test_deterministic_documents(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = ["solve-direct", "--period", "2.0", "--set", "truncation_check=false", *FAST]
    main([*args, "--out", str(a)])
    main([*args, "--out", str(b)])
    da, db = result(a), result(b)
    for d in (da, db):
        d.pop("timings")
        d.pop("outputs")
        d["config"]["output"].pop("dir")
    assert da == db
    assert (a / "trajectory.csv").read_text() == (b / "trajectory.csv").read_text()


def test_plugin_model(tmp_path, monkeypatch):
    (tmp_path / "my_models.py").write_text(
        "import numpy as np\n"
        "from nehari_orbits.models import PotentialModel\n"
        "def sextic(params, dim):\n"
        "    return PotentialModel('sextic', params, lambda x: np.sum(x**6, axis=-1) / 6,\n"
        "                          lambda x: x**5, dim)\n")
    monkeypatch.syspath_prepend(str(tmp_path))
    out = tmp_path / "out"
    code = main(["check-conditions", "--out", str(out), "--set", "model={\"plugin\": \"my_models:sextic\"}"])
    assert code == EXIT_OK
    m = build_model(load_config(None, [("model", {"plugin": "my_models:sextic"})], "check_conditions").model, 1)
    assert m.V(np.array([2.0])) == pytest.approx(64 / 6)


def test_parse_override():
    assert parse_override("solver.restarts=3") == ("solver.restarts", 3)
    assert parse_override("model.name=quadratic") == ("model.name", "quadratic")
    assert parse_override("sweep_periods=[1, 2]") == ("sweep_periods", [1, 2])
    assert parse_override("force=true") == ("force", True)
    assert parse_override("x=a=b") == ("x", "a=b")
    with pytest.raises(ConfigError):
        parse_override("novalue")


def test_load_config_defaults():
    cfg = load_config(None, [("period_T", 1.0)], "solve_dual")
    assert cfg.is_dual and cfg.num_modes == 16 and cfg.dimension == 2
    assert cfg.model.kind == "hamiltonian"
    cfg = load_config(None, [("period_T", 1.0)], "solve_direct")
    assert not cfg.is_dual and cfg.num_modes == 8 and cfg.dimension == 1
    with pytest.raises(ConfigError):
        load_config(None, [("period_T", 1.0), ("formulation", "dual")], "solve_direct")
    assert CONFIG_SCHEMA["additionalProperties"] is False


def test_partial_model_override_keeps_default_name():
    cfg = load_config(None, [("model.params", {"beta": 3})], "check_conditions")
    assert cfg.model.name == "power" and cfg.model.params == {"beta": 3}
