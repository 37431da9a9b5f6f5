"""Tests for run-configuration validation and object construction."""

import json

import numpy as np
import pytest

from nanonmr.config import (
    SCHEMA_VERSION,
    ConfigError,
    build_sweep,
    build_system,
    line_of,
    load_config,
    sweep_grid,
    value_positions,
)

BASE = {
    "schema": SCHEMA_VERSION,
    "system": {"Bz": 0.05, "couplings": {"delta": [0.0], "A": [[[0.15, 0.0, 0.3]]]}},
    "drive": {"mode": "continuous"},
    "trotter": {"t_f": 30.0, "s": 16},
    "sweep": {"start": 3.0, "stop": 3.4, "step": 0.1},
    "seed": 7,
}


def dumps(doc):
    return json.dumps(doc, indent=2)


def test_valid_config_builds_sweep():
    text = dumps(BASE)
    cfg = load_config(text)
    sc = build_sweep(cfg, text)
    assert sc.plan.s == 16
    assert sc.seed == 7
    np.testing.assert_allclose(sc.grid, [3.0, 3.1, 3.2, 3.3, 3.4])
    assert build_sweep(cfg, text, seed=99).seed == 99


def test_sweep_grid_variants():
    assert len(sweep_grid({"start": 0.0, "stop": 1.0, "step": 0.25})) == 5
    assert len(sweep_grid({"start": 1.0, "stop": 0.0, "step": 0.25})) == 0
    np.testing.assert_array_equal(sweep_grid({"values": [1, 2.5]}), [1.0, 2.5])


def test_error_reports_line_of_value():
    text = dumps({**BASE, "trotter": {"t_f": 30.0, "s": -3}})
    with pytest.raises(ConfigError) as e:
        load_config(text, "run.json")
    line = next(i for i, ln in enumerate(text.splitlines(), 1) if '"s": -3' in ln)
    assert e.value.line == line
    assert str(e.value).startswith(f"run.json:{line}: trotter/s")


@pytest.mark.parametrize("change,match", [
    ({"schema": "other/v2"}, "schema"),
    ({"drive": {"mode": "sideways"}}, "drive/mode"),
    ({"bogus": 1}, "bogus"),
    ({"system": {"Bz": 0.1}}, "exactly one of 'couplings' or 'geometry'"),
    ({"sweep": {"start": 1.0}}, "either 'values'"),
    ({"seed": -1}, "seed"),
    ({"noise": {"eps_TQG": 2.0}}, "noise/eps_TQG"),
])
def test_schema_violations(change, match):
    with pytest.raises(ConfigError, match=match):
        load_config(dumps({**BASE, **change}))


def test_invalid_json_line():
    with pytest.raises(ConfigError, match="line 3: invalid JSON"):
        load_config('{\n  "schema": 1,\n  oops\n}')


def test_semantic_error_points_at_block():
    doc = {**BASE, "system": {"couplings": {"A": [[[0.1, 0.0]]]}}}
    text = dumps(doc)
    cfg = load_config(text)
    with pytest.raises(ConfigError, match="system") as e:
        build_system(cfg, text, "x.json")
    assert e.value.line == line_of(text, ("system",))


def test_value_positions_nested():
    text = '{\n "a": {\n  "b": [1,\n   2]\n }\n}'
    pos = value_positions(text)
    assert text[pos[("a", "b", 1)]] == "2"
    assert line_of(text, ("a", "b", 1)) == 4
    assert line_of(text, ("a", "missing")) == 2


def test_counting_block_builds_generic_system():
    cfg = load_config(dumps({"schema": SCHEMA_VERSION, "counting": {"n": 5, "interacting": True}}))
    sys = build_system(cfg)
    assert sys.n_qubits == 5 and sys.interacting


def test_noise_and_ou_blocks():
    doc = {**BASE, "noise": {"T1": 60.0, "T2": None, "eps_TQG": 2e-3, "dephasing_mode": "one_over_f"},
           "ou": {"tau": 500.0, "c": 4e-7, "dt": 1.0}, "routing": {"topology": "star", "native": "cz_fixed"}}
    text = dumps(doc)
    sc = build_sweep(load_config(text), text)
    assert sc.noise.T2 == float("inf")
    assert sc.noise.sqg_error == pytest.approx(2e-4)
    assert sc.ou.stationary_variance == pytest.approx(1e-4)
    assert sc.topology == "star"


def test_geometry_system_block():
    doc = {**BASE, "system": {"Bz": 0.1, "geometry": {"nv_positions": [[0, 0, 0]], "nucleus_positions": [[0, 0, 1.0]]}}}
    sys = build_system(load_config(dumps(doc)))
    assert sys.A[0, 0, 2] < 0
