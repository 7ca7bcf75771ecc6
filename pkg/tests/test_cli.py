import csv
import io
import json

import pytest

from gencheb.cli import execute, main


@pytest.fixture
def cfgs(tmp_path):
    out = {}
    for name, data in {
        "sym": {"alphas": [-0.6], "betas": [0.6]},
        "g0": {"alphas": [], "betas": []},
        "irr": {"alphas": [-0.3], "betas": [0.1]},
        "bad": {"alphas": [0.5], "betas": [0.1]},
    }.items():
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(data))
        out[name] = str(p)
    return out


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_coeffs(cfgs, capsys):
    assert main(["coeffs", "--config", cfgs["sym"], "-n", "8"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 8
    for r in rows:
        n = int(r["n"])
        assert float(r["b_n"]) == pytest.approx((-1) ** n * -0.6, abs=1e-12)
        if n >= 2:
            assert float(r["a_n"]) == pytest.approx(0.16, abs=1e-12)


def test_eval_and_roundtrip(cfgs, tmp_path):
    out = tmp_path / "e.csv"
    assert main(["eval", "--config", cfgs["g0"], "-n", "3", "--x", "0.5", "0.3", "--out", str(out)]) == 0
    rows = _rows(out.read_text())
    assert float(rows[0]["P_n"]) == -0.25
    _, text = execute(["eval", "--config", cfgs["sym"], "-n", "5", "--x", "0.123456789"])
    from gencheb.chebyshev import evaluate_pair
    from gencheb.recurrence import stieltjes_table
    from gencheb.intervals import BranchConfig

    t = stieltjes_table(BranchConfig((-0.6,), (0.6,)), 24)
    # 17 significant digits reproduce the double exactly
    assert float(_rows(text)[0]["P_n"]) == float(evaluate_pair(t, 5, 0.123456789)[0])


def test_json_commands(cfgs, capsys):
    assert main(["map", "detect", "--config", cfgs["sym"]]) == 0
    assert json.loads(capsys.readouterr().out)["outputs"]["K"] == 2
    assert main(["map", "build", "--config", cfgs["sym"]]) == 0
    out = json.loads(capsys.readouterr().out)["outputs"]
    assert out["M_coeffs"] == pytest.approx([-2.125, 0.0, 3.125], abs=1e-10)
    assert {"K", "DeltaK", "M_coeffs", "Bhat", "constraints"} <= set(out)
    assert main(["aux", "--config", cfgs["sym"], "-n", "3"]) == 0
    assert len(json.loads(capsys.readouterr().out)["outputs"]) == 3


def test_map_build_without_period(cfgs, capsys):
    assert main(["map", "detect", "--config", cfgs["irr"]]) == 0
    assert json.loads(capsys.readouterr().out)["outputs"]["K"] is None
    assert main(["map", "build", "--config", cfgs["irr"]]) == 2


def test_family_outputs(capsys):
    assert main(["map", "family", "--K", "3", "--count", "3"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 6 and set(rows[0]) == {"alpha", "beta", "K"}
    assert main(["map", "family", "--K", "3", "--variant", "symmetric", "--param", "alpha=-0.7"]) == 0
    assert json.loads(capsys.readouterr().out)["outputs"]["a"] == pytest.approx([0.42, 0.25, 0.21])
    assert main(["map", "family", "--K", "3", "--variant", "symmetric", "--param", "alpha=-0.2"]) == 1


def test_zeros_and_disc(cfgs, capsys):
    assert main(["zeros", "--config", cfgs["sym"], "-n", "4"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert [int(r["band_index"]) for r in rows] == [0, 0, 1, 1]
    assert main(["disc", "--config", cfgs["sym"], "-n", "2"]) == 0
    assert float(_rows(capsys.readouterr().out)[0]["D"]) == pytest.approx(2.72)


def test_envelope_and_plot_data(cfgs, capsys):
    assert main(["envelope", "--config", cfgs["sym"], "-n", "3", "--j", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["ok"]
    assert main(["plot-data", "--config", cfgs["sym"], "-n", "4", "--grid", "10"]) == 0
    rows = _rows(capsys.readouterr().out)
    assert len(rows) == 20
    for r in rows:
        assert abs(float(r["P_hat"])) <= float(r["rho"]) + 1e-8
        assert float(r["minus_rho"]) == -float(r["rho"])


def test_verify(cfgs, capsys):
    assert main(["verify", "--config", cfgs["sym"], "--suite", "all"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] and len(report["checks"]) > 10
    assert main(["verify", "--config", cfgs["sym"], "--tol", "1e-300"]) == 1


@pytest.mark.parametrize(
    "argv",
    [[], ["bogus"], ["coeffs"], ["coeffs", "--config", "/nonexistent.json"], ["eval", "--config", "X", "-n", "x"]],
)
def test_usage_errors(argv, capsys):
    assert main(argv) == 2


def test_computation_error(cfgs, capsys):
    assert main(["coeffs", "--config", cfgs["bad"]]) == 1
    assert "OrderingViolation" in capsys.readouterr().err


def test_eval_requires_points(cfgs):
    assert main(["eval", "--config", cfgs["sym"], "-n", "3"]) == 2
