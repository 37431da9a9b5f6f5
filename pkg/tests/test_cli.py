"""End-to-end tests of the command-line interface."""

import csv
import json

import pytest

from nanonmr.cli import main
from nanonmr.config import SCHEMA_VERSION

CONFIG = {
    "schema": SCHEMA_VERSION,
    "system": {"Bz": 0.05, "couplings": {"delta": [0.0], "A": [[[0.15, 0.0, 0.3]]]}},
    "drive": {"mode": "continuous"},
    "trotter": {"t_f": 30.0, "s": 64},
    "sweep": {"start": 3.0, "stop": 3.4, "step": 0.02},
    "seed": 3,
}


def write_config(tmp_path, doc, name="run.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc, indent=2))
    return str(p)


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def test_sweep_outputs_are_deterministic(tmp_path):
    cfg = write_config(tmp_path, CONFIG)
    assert main(["sweep", "--config", cfg, "--output", str(tmp_path / "a")]) == 0
    assert main(["sweep", "--config", cfg, "--output", str(tmp_path / "b")]) == 0
    for name in ("spectrum.csv", "fits.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    fits = json.loads((tmp_path / "a" / "fits.json").read_text())
    assert fits["schema"] == "nanonmr/peak-fits/v1"
    assert fits["seed"] == 3
    assert fits["fits"][0]["omega0"] == pytest.approx(3.2124, abs=0.02)
    assert fits["xi"] > 0


def test_analyze_against_ideal(tmp_path):
    cfg = write_config(tmp_path, CONFIG)
    main(["sweep", "--config", cfg, "--output", str(tmp_path)])
    spec = str(tmp_path / "spectrum.csv")
    out = tmp_path / "fit"
    assert main(["analyze", "--config", cfg, "--input", spec, "--ideal", spec, "--output", str(out)]) == 0
    doc = json.loads((out / "fits.json").read_text())
    assert doc["delta_peak"] == 0.0


def test_invalid_config_exit_code(tmp_path, capsys):
    bad = dict(CONFIG, trotter={"t_f": 30.0, "s": -3})
    cfg = write_config(tmp_path, bad, "bad.json")
    assert main(["sweep", "--config", cfg, "--output", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "bad.json:" in err and "trotter/s" in err


def test_missing_config_file_exit_code(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "nope.json")]) == 2


def test_seed_out_of_range(tmp_path):
    cfg = write_config(tmp_path, CONFIG)
    assert main(["sweep", "--config", cfg, "--seed", str(2**64)]) == 2


def test_simulate_writes_expectations(tmp_path):
    doc = dict(CONFIG, drive={"mode": "continuous", "Omega": 3.2})
    doc.pop("sweep")
    cfg = write_config(tmp_path, doc)
    assert main(["simulate", "--config", cfg, "--output", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "expectations.csv")
    assert len(rows) == 6
    assert {r["observable"] for r in rows} == {"X", "Y", "Z"}


def test_sweep_without_grid_is_config_error(tmp_path):
    doc = dict(CONFIG)
    doc.pop("sweep")
    assert main(["sweep", "--config", write_config(tmp_path, doc)]) == 2


def test_transpile_counts(tmp_path):
    doc = {"schema": SCHEMA_VERSION, "counting": {"n": 6, "interacting": True}, "routing": {"topology": "star"}}
    assert main(["transpile", "--config", write_config(tmp_path, doc), "--output", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "counts.csv")
    assert [r["source"] for r in rows] == ["measured", "closed_form"]
    assert rows[0]["N_TQG"] == rows[1]["N_TQG"] == "57"
    circuit = json.loads((tmp_path / "circuit.json").read_text())
    assert circuit["n_qubits"] == 6


def test_transpile_star_noninteracting_needs_no_swaps(tmp_path):
    doc = {"schema": SCHEMA_VERSION, "counting": {"n": 6, "interacting": False},
           "routing": {"topology": "star", "rotational": True}}
    main(["transpile", "--config", write_config(tmp_path, doc), "--output", str(tmp_path)])
    rows = read_csv(tmp_path / "counts.csv")
    assert rows[0]["N_SWAP"] == "0"
    assert rows[0]["N_TQG"] == rows[1]["N_TQG"] == "5"


def test_counts_table(tmp_path):
    doc = {"schema": SCHEMA_VERSION, "counts": {"n_min": 21, "n_max": 21, "topologies": ["star"], "interacting": [True]}}
    assert main(["counts", "--config", write_config(tmp_path, doc), "--output", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "counts.csv")
    assert len(rows) == 1
    assert float(rows[0]["swap_savings"]) == pytest.approx(0.9)


def test_counts_empty_range_writes_header_only(tmp_path):
    doc = {"schema": SCHEMA_VERSION, "counts": {"n_min": 5, "n_max": 4}}
    assert main(["counts", "--config", write_config(tmp_path, doc), "--output", str(tmp_path)]) == 0
    assert (tmp_path / "counts.csv").read_text().count("\n") == 1


def test_counts_rejects_small_n(tmp_path):
    doc = {"schema": SCHEMA_VERSION, "counts": {"n_min": 2, "n_max": 4}}
    assert main(["counts", "--config", write_config(tmp_path, doc), "--output", str(tmp_path)]) == 2


def test_counts_default_config(tmp_path):
    assert main(["counts", "--output", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "counts.csv")
    assert len(rows) == 19 * 4
