import json

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from lassodof.main import main


def write_csv(path, values):
    np.savetxt(path, np.atleast_2d(values), delimiter=",", fmt="%.17g")
    return str(path)


@pytest.fixture
def identity_files(tmp_path):
    return {
        "x": write_csv(tmp_path / "X.csv", np.eye(3)),
        "y": write_csv(tmp_path / "y.csv", [3.0, 0.5, -2.0]),
    }


def run(*argv):
    return main([str(a) for a in argv])


def read_json(path):
    return json.loads(path.read_text())


def test_solve_identity_fixture(identity_files, tmp_path):
    out = tmp_path / "solution.json"
    assert run("solve", "--x", identity_files["x"], "--y", identity_files["y"], "--lambda", 1, "--out", out) == 0
    doc = read_json(out)
    assert doc["schema"] == "lassodof/1"
    assert "generated_at" in doc
    assert_allclose(doc["solution"]["beta"], [2.0, 0.0, -1.0], atol=1e-10)
    assert doc["sets"]["E"]["indices"] == [0, 2]


def test_solve_above_lambda_max(identity_files, tmp_path):
    out = tmp_path / "solution.json"
    assert run("solve", "--x", identity_files["x"], "--y", identity_files["y"], "--lambda", 5, "--out", out) == 0
    doc = read_json(out)
    assert doc["solution"]["beta"] == [0.0, 0.0, 0.0]
    assert doc["sets"]["A"]["indices"] == []


def test_solve_fused_fixture(tmp_path):
    x = write_csv(tmp_path / "X.csv", np.eye(3))
    y = write_csv(tmp_path / "y.csv", [0.0, 0.0, 10.0])
    out = tmp_path / "fused.json"
    assert run("solve", "--x", x, "--y", y, "--d", "chain", "--lambda", 1, "--out", out) == 0
    doc = read_json(out)
    assert_allclose(doc["solution"]["fit"], [0.5, 0.5, 9.0], atol=1e-7)
    assert doc["sets"]["B"]["indices"] == [1]


def test_df_identity_fixture(identity_files, tmp_path):
    out = tmp_path / "df.json"
    assert run("df", "--x", identity_files["x"], "--y", identity_files["y"], "--lambda", 1, "--out", out) == 0
    doc = read_json(out)
    assert doc["df"] == 2
    assert doc["agree"]
    assert doc["estimates"]["equicorrelation"]["df_value"] == 2
    assert doc["estimates"]["active"]["df_value"] == 2


def test_df_constant_response_fused(tmp_path):
    x = write_csv(tmp_path / "X.csv", np.eye(6))
    y = write_csv(tmp_path / "y.csv", np.full(6, 1.5))
    out = tmp_path / "df.json"
    assert run("df", "--x", x, "--y", y, "--d", "chain", "--lambda", 0.5, "--out", out) == 0
    assert read_json(out)["df"] == 1


def test_df_linear_trend(tmp_path):
    x = write_csv(tmp_path / "X.csv", np.eye(8))
    y = write_csv(tmp_path / "y.csv", 1.0 + 0.5 * np.arange(8))
    out = tmp_path / "df.json"
    assert run("df", "--x", x, "--y", y, "--d", "trend:1", "--lambda", 1, "--out", out) == 0
    assert read_json(out)["df"] == 2


def test_df_elastic_net_and_intercept(tmp_path):
    rng = np.random.default_rng(0)
    x = write_csv(tmp_path / "X.csv", rng.standard_normal((12, 5)))
    y = write_csv(tmp_path / "y.csv", rng.standard_normal(12) + 2.0)
    enet = tmp_path / "enet.json"
    assert run("df", "--x", x, "--y", y, "--lambda", 0.5, "--lambda2", 1.0, "--out", enet) == 0
    assert read_json(enet)["estimates"]["active"]["estimator"] == "elastic_net"
    icpt = tmp_path / "intercept.json"
    assert run("df", "--x", x, "--y", y, "--lambda", 0.5, "--intercept", "--out", icpt) == 0
    assert read_json(icpt)["df"] >= 1


def test_missing_input_exits_2(tmp_path):
    assert run("solve", "--x", tmp_path / "nope.csv", "--y", tmp_path / "nope.csv", "--lambda", 1) == 2


def test_negative_lambda_exits_2(identity_files):
    assert run("solve", "--x", identity_files["x"], "--y", identity_files["y"], "--lambda", -1) == 2


def test_mismatched_dimensions_exit_2(tmp_path):
    x = write_csv(tmp_path / "X.csv", np.eye(3))
    y = write_csv(tmp_path / "y.csv", [1.0, 2.0])
    assert run("solve", "--x", x, "--y", y, "--lambda", 1) == 2


def test_unknown_penalty_exits_2(identity_files):
    assert run("df", "--x", identity_files["x"], "--y", identity_files["y"], "--d", "ridge", "--lambda", 1) == 2


def test_set_tolerance_below_solver_tolerance_exits_2(identity_files):
    code = run("df", "--x", identity_files["x"], "--y", identity_files["y"], "--lambda", 1, "--tol-set", 1e-14)
    assert code == 2


def test_solve_at_lambda_zero_reports_no_margin(identity_files, tmp_path):
    out = tmp_path / "solution.json"
    assert run("solve", "--x", identity_files["x"], "--y", identity_files["y"], "--lambda", 0, "--out", out) == 0
    assert read_json(out)["membership_margin"] is None


def test_iteration_budget_exits_3(tmp_path):
    rng = np.random.default_rng(1)
    x = write_csv(tmp_path / "X.csv", rng.standard_normal((10, 8)))
    y = write_csv(tmp_path / "y.csv", rng.standard_normal(10))
    assert run("solve", "--x", x, "--y", y, "--lambda", 0.01, "--max-iterations", 1) == 3


def test_validate_linear_smoother(tmp_path):
    rng = np.random.default_rng(2)
    X = rng.standard_normal((10, 3))
    x = write_csv(tmp_path / "X.csv", X)
    mu = write_csv(tmp_path / "mu.csv", X @ np.ones(3))
    out = tmp_path / "validate.json"
    code = run("validate", "--x", x, "--mu", mu, "--lambda", 0, "--replications", 200, "--seed", 3, "--out", out)
    assert code == 0
    doc = read_json(out)
    assert doc["summary"]["estimator_mean"] == 3
    assert doc["summary"]["passed"]
    records = pd.read_csv(tmp_path / "validate_replications.csv")
    assert len(records) == 200


def test_sure_path_writes_curve(identity_files, tmp_path):
    out = tmp_path / "path.json"
    code = run(
        "sure-path", "--x", identity_files["x"], "--y", identity_files["y"],
        "--lambda-grid", "0.25,0.5,1,2,4", "--sigma", 1, "--out", out,
    )
    assert code == 0
    doc = read_json(out)
    assert len(doc["path"]["risks"]) == 5
    curve = pd.read_csv(tmp_path / "path.csv")
    assert list(curve.columns) == ["lambda", "risk", "df", "failed"]


def test_gen_data_orthogonal(tmp_path):
    assert run("gen-data", "--family", "orthogonal", "--n", 4, "--p", 4, "--seed", 1, "--out", tmp_path) == 0
    X = np.loadtxt(tmp_path / "X.csv", delimiter=",")
    assert_allclose(X.T @ X, np.eye(4), atol=1e-12)
    assert (tmp_path / "mu.csv").exists()


def test_gen_data_duplicated_columns(tmp_path):
    assert run("gen-data", "--family", "duplicated-columns", "--n", 8, "--p", 6, "--duplicates", 2, "--out", tmp_path) == 0
    X = np.loadtxt(tmp_path / "X.csv", delimiter=",")
    manifest = read_json(tmp_path / "design.json")
    assert manifest["duplicated_pairs"] == [[0, 1], [2, 3]]
    for a, b in manifest["duplicated_pairs"]:
        assert np.array_equal(X[:, a], X[:, b])


def test_gen_data_is_deterministic(tmp_path):
    first, second = tmp_path / "a", tmp_path / "b"
    for out in (first, second):
        assert run("gen-data", "--n", 6, "--p", 9, "--seed", 42, "--out", out) == 0
    for name in ("X.csv", "y.csv", "mu.csv", "design.json"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_gen_data_invalid_dimensions(tmp_path):
    assert run("gen-data", "--n", 0, "--p", 3, "--out", tmp_path) == 2
    assert run("gen-data", "--family", "orthogonal", "--n", 2, "--p", 3, "--out", tmp_path) == 2
