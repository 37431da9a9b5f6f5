"""Run configuration: JSON schema, validation with line numbers, object construction."""

from __future__ import annotations

import json
from json.decoder import scanstring
from pathlib import Path

import jsonschema
import numpy as np

from .analysis.sweep import SweepConfig
from .engine import NoiseModel, OUParams
from .route import KINDS, NATIVE_KINDS
from .spinsys import SpinSystem
from .synth import Drive, TrotterPlan

SCHEMA_VERSION = "nanonmr/run-config/v1"

_NUM = {"type": "number"}
_VEC = {"type": "array", "items": _NUM}
_MAT = {"type": "array", "items": _VEC}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "system": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "Bz": _NUM,
                "gamma_c": _NUM,
                "zeeman": _MAT,
                "couplings": {
                    "type": "object",
                    "required": ["A"],
                    "additionalProperties": False,
                    "properties": {"delta": _VEC, "A": {"type": "array"}, "g": _MAT, "h": _MAT},
                },
                "geometry": {
                    "type": "object",
                    "required": ["nv_positions", "nucleus_positions"],
                    "additionalProperties": False,
                    "properties": {
                        "nv_positions": _MAT, "nucleus_positions": _MAT,
                        "prefactor": {"type": ["number", "null"]}, "delta": _VEC,
                    },
                },
            },
            "oneOf": [
                {"required": ["couplings"], "not": {"required": ["geometry"]}},
                {"required": ["geometry"], "not": {"required": ["couplings"]}},
            ],
        },
        "counting": {
            "type": "object",
            "required": ["n", "interacting"],
            "additionalProperties": False,
            "properties": {"n": {"type": "integer", "minimum": 2}, "interacting": {"type": "boolean"}},
        },
        "drive": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "mode": {"enum": ["none", "continuous", "pulsed"]},
                "Omega": _NUM, "phi": _NUM,
                "harmonic": {"type": "integer", "minimum": 1},
                "pattern": {"type": "string", "pattern": "^[XYxy]+$"},
                "N_blocks": {"type": "integer", "minimum": 1},
                "steps_per_interval": {"type": ["integer", "null"], "minimum": 1},
                "target": {"type": "integer", "minimum": 0},
                "frequency": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "amplitude_error": _NUM,
            },
        },
        "trotter": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_f": {"type": "number", "exclusiveMinimum": 0},
                "s": {"type": "integer", "minimum": 1},
                "cycles": {"type": "integer", "minimum": 0},
                "order": {"enum": [1, 2]},
            },
        },
        "noise": {
            "type": ["object", "null"],
            "additionalProperties": False,
            "properties": {
                "T1": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "T2": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "eps_TQG": {"type": "number", "minimum": 0, "maximum": 1},
                "eps_SQG": {"type": ["number", "null"], "minimum": 0, "maximum": 1},
                "tau_SQG": {"type": "number", "minimum": 0},
                "tau_TQG": {"type": "number", "minimum": 0},
                "tau_reset": {"type": ["number", "null"], "minimum": 0},
                "dephasing_mode": {"enum": ["markovian", "one_over_f"]},
                "beta": {"type": ["number", "null"]},
                "omega_ir": {"type": "number", "exclusiveMinimum": 0},
                "omega_uv": {"type": "number", "exclusiveMinimum": 0},
                "amplitude": {"type": ["number", "null"]},
            },
        },
        "ou": {
            "type": ["object", "null"],
            "additionalProperties": False,
            "properties": {
                "tau": {"type": "number", "exclusiveMinimum": 0},
                "c": {"type": "number", "minimum": 0},
                "dt": {"type": "number", "minimum": 0},
            },
        },
        "routing": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "topology": {"enum": [None, *KINDS]},
                "native": {"enum": [None, *NATIVE_KINDS]},
                "rotational": {"type": "boolean"},
                "resonator": {"type": "boolean"},
            },
        },
        "init": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "method": {"enum": ["random_x", "random_phase", "pure"]},
                "sampling": {"enum": ["auto", "exact", "exhaustive", "random"]},
                "samples": {"type": ["integer", "null"], "minimum": 1},
                "nv_state": {"enum": [None, "+", "-", "0", "1"]},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "start": _NUM, "stop": _NUM, "step": {"type": "number", "exclusiveMinimum": 0},
                "values": {"type": "array", "items": _NUM, "minItems": 2},
            },
            "oneOf": [{"required": ["values"]}, {"required": ["start", "stop", "step"]}],
        },
        "analysis": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "centers": {"oneOf": [{"enum": ["larmor", "peaks"]}, _VEC]},
                "min_points": {"type": "integer", "minimum": 5},
            },
        },
        "counts": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_min": {"type": "integer"},
                "n_max": {"type": "integer"},
                "topologies": {"type": "array", "items": {"enum": list(KINDS)}},
                "interacting": {"type": "array", "items": {"type": "boolean"}},
                "measured": {"type": "boolean"},
                "native": {"enum": [None, *NATIVE_KINDS]},
            },
        },
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
    },
}


class ConfigError(ValueError):
    """Invalid configuration; ``line`` is the 1-based line of the offending value."""

    def __init__(self, message: str, line: int | None = None, path: str | None = None):
        self.line = line
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif line is not None:
            message = f"line {line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


def value_positions(text: str) -> dict[tuple, int]:
    """Character offset of every value in a JSON document, keyed by its path."""
    dec = json.JSONDecoder()
    out: dict[tuple, int] = {}

    def skip(i):
        while i < len(text) and text[i] in " \t\r\n":
            i += 1
        return i

    def value(i, path):
        i = skip(i)
        out[path] = i
        ch = text[i]
        if ch == "{":
            i = skip(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key_pos = i
                key, i = scanstring(text, i + 1)
                # Missing-member errors point at the key line.
                out[path + (key, "__key__")] = key_pos
                i = skip(i)
                i = value(i + 1, path + (key,))
                i = skip(i)
                if text[i] == "}":
                    return i + 1
                i = skip(i + 1)
        if ch == "[":
            i = skip(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = skip(value(i, path + (k,)))
                k += 1
                if text[i] == "]":
                    return i + 1
                i = skip(i + 1)
        _, end = dec.raw_decode(text, i)
        return end

    value(0, ())
    return out


def _line(text: str, pos: int) -> int:
    return text.count("\n", 0, pos) + 1


def line_of(text: str, path) -> int:
    pos = value_positions(text)
    path = tuple(path)
    while path not in pos and path:
        path = path[:-1]
    return _line(text, pos.get(path, 0))


def load_config(text: str, source: str | None = None) -> dict:
    """Parse and validate a configuration document.

    Raises:
        ConfigError: On malformed JSON or schema violations, with the line of
            the offending value.
    """
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e.msg}", e.lineno, source) from e
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(cfg), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        e = errors[0]
        path = tuple(e.absolute_path)
        loc = "/".join(map(str, path)) or "<root>"
        msg = e.message
        if e.validator == "oneOf" and path == ("system",):
            msg = "needs exactly one of 'couplings' or 'geometry'"
        elif e.validator == "oneOf" and path == ("sweep",):
            msg = "needs either 'values' or all of 'start', 'stop', 'step'"
        raise ConfigError(f"{loc}: {msg}", line_of(text, path), source)
    return cfg


def load_config_file(path: str | Path) -> tuple[dict, str]:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror}", None, str(p)) from e
    return load_config(text, str(p)), text


def _block_error(text: str | None, block: str, err: Exception, source: str | None) -> ConfigError:
    line = line_of(text, (block,)) if text else None
    return ConfigError(f"{block}: {err}", line, source)


def build_system(cfg: dict, text: str | None = None, source: str | None = None) -> SpinSystem:
    """Spin system of the ``system`` block, or the generic one of ``counting``."""
    from .analysis.counting import counting_system

    try:
        if "system" in cfg:
            return SpinSystem.from_dict(cfg["system"])
        if "counting" in cfg:
            return counting_system(cfg["counting"]["n"], cfg["counting"]["interacting"])
    except (ValueError, KeyError, TypeError) as e:
        raise _block_error(text, "system" if "system" in cfg else "counting", e, source) from e
    raise ConfigError("config needs a 'system' or 'counting' block", 1, source)


def sweep_grid(block: dict) -> np.ndarray:
    if "values" in block:
        return np.asarray(block["values"], dtype=float)
    start, stop, step = block["start"], block["stop"], block["step"]
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(max(n, 0))


def build_sweep(cfg: dict, text: str | None = None, source: str | None = None,
                seed: int | None = None) -> SweepConfig:
    """SweepConfig from a validated configuration."""
    sys = build_system(cfg, text, source)
    block = "drive"
    try:
        drive = Drive.from_dict(cfg.get("drive", {}))
        block = "trotter"
        plan = TrotterPlan.from_dict(cfg.get("trotter", {}))
        block = "noise"
        noise = NoiseModel.from_dict(cfg["noise"]) if cfg.get("noise") else None
        block = "ou"
        ou = OUParams(**cfg["ou"]) if cfg.get("ou") else None
        block = "sweep"
        grid = sweep_grid(cfg["sweep"]) if "sweep" in cfg else np.array([])
        routing = cfg.get("routing", {})
        init = cfg.get("init", {})
        block = "routing"
        return SweepConfig(
            sys, drive, plan, grid=tuple(grid), noise=noise, ou=ou,
            init=init.get("method", "random_x"), init_sampling=init.get("sampling", "auto"),
            samples=init.get("samples"), topology=routing.get("topology"), native=routing.get("native"),
            rotational=routing.get("rotational", False), resonator=routing.get("resonator", False),
            nv_state=init.get("nv_state"), seed=cfg.get("seed", 0) if seed is None else seed,
        )
    except KeyError as e:
        raise _block_error(text, block, f"missing {e}", source) from e
    except (ValueError, TypeError) as e:
        if "sweep grid" in str(e):
            block = "sweep"
        raise _block_error(text, block, e, source) from e
