import csv
import json
import math
from importlib import resources

import jsonschema
import numpy as np
import pytest

from thermotimes.cli import (
    RunConfig,
    cmd_analyze,
    cmd_sweep,
    cmd_table1,
    main,
    modulated_gammas,
)
from thermotimes.errors import ConfigError


def write_config(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_modulated_gammas_law():
    G = modulated_gammas(3)
    np.testing.assert_allclose(
        G, 1.0 + np.sin(np.array([0.0, 1.0, 2.0]) * np.pi / np.sqrt(2.0)) / 2.0
    )


def test_run_config_validation():
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"family": "nope", "N": 1})
    with pytest.raises(ConfigError):
        RunConfig.from_dict({"family": "free_spins_uniform", "N": 1})  # no Gamma
    with pytest.raises(ConfigError):
        RunConfig.from_dict(
            {"family": "free_spins_modulated", "N": 0}
        )
    with pytest.raises(ConfigError):
        RunConfig.from_dict(
            {"family": "free_spins_modulated", "N": 1, "beta": -1.0}
        )
    with pytest.raises(ConfigError):
        RunConfig.from_dict(
            {"family": "free_spins_modulated", "N": 1, "methods": ["magic"]}
        )


def test_analyze_uniform_single_row(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "family": "free_spins_uniform", "Gamma": 1.0, "N": 1, "beta": 1.0,
        "methods": ["lba_analytic"],
    })
    out = cmd_analyze(cfg, str(tmp_path / "r.csv"))
    rows = read_csv(out)
    assert len(rows) == 1
    assert float(rows[0]["tau_P"]) == pytest.approx(0.04760, abs=1e-5)
    assert float(rows[0]["tau_Q"]) == pytest.approx(0.09520, abs=1e-5)
    assert rows[0]["wall_s"] == ""  # timings off by default


def test_analyze_modulated_all_methods(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "family": "free_spins_modulated", "N_list": [1, 2, 3], "beta": 1.0,
        "methods": ["lba_analytic", "lba_numeric", "qome"],
    })
    out = cmd_analyze(cfg, str(tmp_path / "r.csv"))
    rows = read_csv(out)
    assert len(rows) == 9
    expected = {
        (1, "lba_analytic"): (0.04760, 0.09520),
        (2, "lba_analytic"): (0.04760, 0.07493),
        (3, "lba_analytic"): (0.21406, 0.13016),
        (1, "lba_numeric"): (0.04760, 0.09520),
        (2, "lba_numeric"): (0.04760, 0.07493),
        (3, "lba_numeric"): (0.21406, 0.13016),
        (1, "qome"): (0.04760, 0.09520),
        (2, "qome"): (0.04760, 0.09520),
        (3, "qome"): (0.21406, 0.42813),
    }
    for row in rows:
        key = (int(row["N"]), row["method"])
        tp, tq = expected[key]
        assert float(row["tau_P"]) == pytest.approx(tp, abs=2e-5)
        assert float(row["tau_Q"]) == pytest.approx(tq, abs=2e-5)
        if row["method"] == "qome":
            assert row["qome_zero_multiplicity"] == "1"
        else:
            assert row["qome_zero_multiplicity"] == ""


def test_analyze_runs_are_byte_identical(tmp_path):
    # N = 11 exercises the sparse Lanczos path, which uses a fixed start vector
    cfg = write_config(tmp_path, "c.json", {
        "family": "free_spins_modulated", "N_list": [1, 3, 11], "beta": 1.0,
        "methods": ["lba_analytic", "lba_numeric"],
    })
    out1 = cmd_analyze(cfg, str(tmp_path / "a.csv"))
    out2 = cmd_analyze(cfg, str(tmp_path / "b.csv"))
    assert open(out1, "rb").read() == open(out2, "rb").read()


def test_analyze_json_validates_against_schema(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "family": "free_spins_uniform", "Gamma": 1.0, "N_list": [1, 2],
        "beta": 1.0, "methods": ["lba_analytic", "qome"], "output": "json",
    })
    out = cmd_analyze(cfg, str(tmp_path / "r.json"))
    doc = json.load(open(out))
    schema = json.loads(
        resources.files("thermotimes.schemas")
        .joinpath("analyze_report.schema.json")
        .read_text()
    )
    jsonschema.validate(doc, schema)
    assert len(doc["records"]) == 4
    qome_rows = [r for r in doc["records"] if r["method"] == "qome"]
    assert qome_rows[0]["qome_zero_multiplicity"] == 1
    # JSON carries full precision
    lba = [r for r in doc["records"] if r["method"] == "lba_analytic"][0]
    assert abs(lba["tau_P"] - math.tanh(1.0) / 16.0) < 1e-15


def test_analyze_custom_hamiltonian(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "family": "custom_hamiltonian",
        "hamiltonian": {"dim": 2, "re": [[0.0, -1.0], [-1.0, 0.0]]},
        "N": 1, "beta": 1.0,
        "methods": ["lba_analytic", "qome"],
    })
    rows = read_csv(cmd_analyze(cfg, str(tmp_path / "r.csv")))
    # H = -sigma^x written in the computational basis: the free spin again
    for row in rows:
        assert float(row["tau_P"]) == pytest.approx(0.04760, abs=1e-5)
        assert float(row["tau_Q"]) == pytest.approx(0.09520, abs=1e-5)


def test_table1_columns_and_values(tmp_path):
    out = cmd_table1(str(tmp_path / "t.csv"), max_qome_n=2)
    with open(out, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = {int(r[0]): dict(zip(header, r)) for r in reader}
    assert header == [
        "N", "lba_tauP", "lba_tauQ", "lba_num_tauP", "lba_num_tauQ",
        "lba_cpu_s", "qome_tauP", "qome_tauQ", "qome_cpu_s", "warnings",
    ]
    assert set(rows) == set(range(1, 14)) | {100, 1000, 10000, 100000}
    assert float(rows[6]["lba_tauP"]) == pytest.approx(0.22800, abs=1e-5)
    assert float(rows[6]["lba_tauQ"]) == pytest.approx(0.06989, abs=1e-5)
    assert float(rows[6]["lba_num_tauP"]) == pytest.approx(0.22800, abs=1e-5)
    assert rows[6]["qome_tauP"] == ""  # beyond max_qome_n
    assert float(rows[2]["qome_tauP"]) == pytest.approx(0.04760, abs=1e-5)
    assert float(rows[2]["qome_tauQ"]) == pytest.approx(0.09520, abs=1e-5)
    assert float(rows[100]["lba_tauP"]) == pytest.approx(0.23104, abs=1e-5)
    assert float(rows[100]["lba_tauQ"]) == pytest.approx(0.004433, abs=1e-6)
    assert rows[100]["lba_num_tauP"] == "" and rows[100]["qome_tauP"] == ""
    assert float(rows[100000]["lba_tauQ"]) == pytest.approx(4.458e-6, abs=1e-9)
    # 5 significant figures in every populated numeric cell
    assert rows[1]["lba_tauP"] == "0.047600"[:len(rows[1]["lba_tauP"])]


def test_table1_widened_tolerance_flags_warnings(tmp_path):
    strict = cmd_table1(str(tmp_path / "strict.csv"), max_qome_n=2)
    wide = cmd_table1(str(tmp_path / "wide.csv"), max_qome_n=2, energy_tol=1.0)
    rows_strict = {r["N"]: r for r in read_csv(strict)}
    rows_wide = {r["N"]: r for r in read_csv(wide)}
    assert rows_strict["2"]["warnings"] == ""
    assert "qome_multiple_steady_states" in rows_wide["2"]["warnings"]
    assert rows_wide["2"]["qome_tauP"] != rows_strict["2"]["qome_tauP"]


def test_sweep_beta_grid(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "family": "free_spins_uniform", "Gamma": 1.0, "N": 1,
        "beta_grid": [2.0, 0.5, 1.0], "methods": ["lba_analytic"],
    })
    rows = read_csv(cmd_sweep(cfg, str(tmp_path / "s.csv")))
    assert [float(r["beta"]) for r in rows] == [0.5, 1.0, 2.0]  # sorted by key
    for row in rows:
        beta = float(row["beta"])
        assert float(row["tau_P"]) == pytest.approx(math.tanh(beta) / 16.0, rel=1e-4)


def test_sweep_gamma_grid_ratio(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "family": "free_spins_uniform", "Gamma": 1.0, "N": 1, "beta": 1.0,
        "Gamma_grid": [0.5, 1.0], "methods": ["lba_analytic"],
    })
    rows = read_csv(cmd_sweep(cfg, str(tmp_path / "s.csv")))
    ratio = float(rows[0]["tau_P"]) / float(rows[1]["tau_P"])
    assert ratio == pytest.approx((math.tanh(0.5) / 1.0) / (math.tanh(1.0) / 8.0),
                                  rel=1e-4)


def test_sweep_empty_grid_is_config_error(tmp_path):
    cfg = write_config(tmp_path, "c.json", {
        "family": "free_spins_uniform", "Gamma": 1.0, "N": 1,
        "beta_grid": [], "methods": ["lba_analytic"],
    })
    with pytest.raises(ConfigError):
        cmd_sweep(cfg, str(tmp_path / "s.csv"))


def test_main_exit_codes(tmp_path):
    bad = write_config(tmp_path, "bad.json", {"family": "nope"})
    assert main(["analyze", "--config", bad]) == 2
    assert main(["sweep", "--config", str(tmp_path / "missing.json")]) == 2
    capped = write_config(tmp_path, "capped.json", {
        "family": "free_spins_uniform", "Gamma": 1.0, "N": 7, "beta": 1.0,
        "methods": ["qome"],
    })
    assert main(["analyze", "--config", capped,
                 "--out", str(tmp_path / "x.csv")]) == 3
    good = write_config(tmp_path, "good.json", {
        "family": "free_spins_uniform", "Gamma": 1.0, "N": 1, "beta": 1.0,
        "methods": ["lba_analytic"],
    })
    assert main(["analyze", "--config", good,
                 "--out", str(tmp_path / "ok.csv")]) == 0


def test_main_table1_runs(tmp_path):
    out = str(tmp_path / "t.csv")
    assert main(["table1", "--max-qome-n", "1", "--out", out]) == 0
    rows = read_csv(out)
    assert len(rows) == 17
