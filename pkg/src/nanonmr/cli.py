"""Command-line front end.

Subcommands:
    sweep      Frequency sweep; writes spectrum.csv and fits.json.
    simulate   One protocol run at the configured drive; writes expectations.csv.
    transpile  One routed Trotter step; writes circuit.json and counts.csv.
    counts     Closed-form (and optionally measured) gate counts; writes counts.csv.
    analyze    Peak fits of an existing spectrum CSV; writes fits.json.

Exit codes: 0 success, 2 invalid configuration or input, 1 runtime failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    CSV_HEADER,
    OBSERVABLES,
    FitError,
    PeakFit,
    Spectrum,
    closed_form_row,
    counts_csv,
    delta_peak_metric,
    gaussian_fit,
    ideal_peak_centers,
    measured_row,
    peak_windows,
    resonances,
    simulate,
    sweep,
    transpile_step,
    xi_metric,
)
from .analysis.sweep import PUMP_SIGN, initial_expectations
from .circuit import count_gates
from .config import SCHEMA_VERSION, ConfigError, build_sweep, build_system, load_config_file
from .synth.protocol import DEFAULT_NV_STATE

log = logging.getLogger("nanonmr")

FITS_SCHEMA = "nanonmr/peak-fits/v1"


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    p = out / name
    with open(p, "w", newline="") as f:
        f.write(text)
    log.info("wrote %s", p)
    return p


def _centers(spec: Spectrum, cfg: dict, system) -> np.ndarray:
    choice = cfg.get("analysis", {}).get("centers", "larmor")
    if isinstance(choice, list):
        if len(choice) != spec.n_qubits - spec.n_nv:
            raise ConfigError(f"analysis/centers: need one center per nucleus, got {len(choice)}")
        return np.asarray(choice, dtype=float)
    if choice == "peaks":
        return ideal_peak_centers(spec)
    if system is None:
        raise ConfigError("analysis/centers: 'larmor' needs a system block")
    return resonances(system)


def _fit_all(spec: Spectrum, centers, min_points: int) -> list:
    """Per-nucleus fits; a failed fit becomes its error message."""
    windows = peak_windows(spec.omega, centers)
    out = []
    for k, win in enumerate(windows):
        if len(win) < min_points:
            out.append(f"window holds {len(win)} grid points, need {min_points}")
            continue
        try:
            out.append(gaussian_fit(spec.omega[win], spec.gain(spec.n_nv + k)[win]))
        except FitError as e:
            out.append(str(e))
    return out


def fits_document(spec: Spectrum, centers, min_points: int = 5, ideal: Spectrum | None = None) -> dict:
    """Peak fits of every nucleus, with xi (and delta_peak given an ideal spectrum)."""
    doc = {"schema": FITS_SCHEMA, "centers": [float(c) for c in centers], "fits": []}
    fits = _fit_all(spec, centers, min_points)
    for k, f in enumerate(fits):
        entry = {"nucleus": k, "qubit": spec.n_nv + k}
        entry.update({"error": f} if isinstance(f, str) else f.to_dict())
        doc["fits"].append(entry)
    good = all(isinstance(f, PeakFit) for f in fits) and fits
    doc["xi"] = xi_metric(fits) if good else None
    if ideal is not None:
        ref = _fit_all(ideal, centers, min_points)
        ok = good and all(isinstance(f, PeakFit) for f in ref)
        doc["delta_peak"] = delta_peak_metric(fits, ref) if ok else None
    return doc


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_sweep(args, cfg, text) -> int:
    sc = build_sweep(cfg, text, args.config, seed=args.seed)
    if len(sc.grid) < 2:
        raise ConfigError("sweep: a sweep block with at least 2 points is required", None, args.config)
    spec = sweep(sc, threads=args.threads)
    out = Path(args.output)
    _write(out, "spectrum.csv", spec.to_csv())
    doc = fits_document(spec, _centers(spec, cfg, sc.system), cfg.get("analysis", {}).get("min_points", 5))
    doc["seed"] = sc.seed
    _write(out, "fits.json", _dump(doc))
    return 0


def cmd_simulate(args, cfg, text) -> int:
    sc = build_sweep(cfg, text, args.config, seed=args.seed)
    vals = simulate(sc)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER[1:])
    for q in range(vals.shape[0]):
        for a, name in enumerate(OBSERVABLES):
            w.writerow([q, name, repr(float(vals[q, a]))])
    _write(Path(args.output), "expectations.csv", buf.getvalue())
    return 0


def cmd_transpile(args, cfg, text) -> int:
    system = build_system(cfg, text, args.config)
    routing = cfg.get("routing", {})
    topology = routing.get("topology")
    native = routing.get("native")
    rotational = routing.get("rotational", False)
    plan = cfg.get("trotter", {})
    dt = plan.get("t_f", 30.0) / plan.get("s", 32)
    try:
        routed, nat = transpile_step(system, topology, native, rotational, dt)
    except ValueError as e:
        raise ConfigError(f"routing: {e}", None, args.config) from e
    out = Path(args.output)
    _write(out, "circuit.json", nat.to_json() + "\n")
    n = system.n_qubits
    interacting = system.interacting
    before, after = count_gates(routed), count_gates(nat)
    kind = topology or "all_to_all"
    rows = [{
        "topology": kind, "n": n, "interacting": interacting,
        "N_TQG": after.N_TQG, "N_SQG": after.N_SQG, "N_SWAP": before.N_SWAP, "depth": after.tqg_depth,
        "source": "measured" if native is None else f"measured:{native}",
        "swap_savings": None,
    }]
    if n >= 3:
        rows.append(closed_form_row(kind, n, interacting))
        rows[0]["swap_savings"] = rows[1]["swap_savings"]
    _write(out, "counts.csv", counts_csv(rows))
    return 0


def cmd_counts(args, cfg, text) -> int:
    block = cfg.get("counts", {})
    n_min = block.get("n_min", 3)
    n_max = block.get("n_max", 21)
    if n_min < 3 and n_min <= n_max:
        raise ConfigError("counts/n_min: closed forms need n >= 3", None, args.config)
    topologies = block.get("topologies", ["star", "square_grid"])
    interacting = block.get("interacting", [True, False])
    rows = []
    for n in range(n_min, n_max + 1):
        for inter in interacting:
            for topo in topologies:
                rows.append(closed_form_row(topo, n, inter))
                if block.get("measured", False):
                    rows.append(measured_row(topo, n, inter, block.get("native")))
    _write(Path(args.output), "counts.csv", counts_csv(rows))
    return 0


def cmd_analyze(args, cfg, text) -> int:
    if args.input is None:
        raise ConfigError("analyze needs --input SPECTRUM_CSV")
    system = build_system(cfg, text, args.config) if ("system" in cfg or "counting" in cfg) else None
    state = cfg.get("init", {}).get("nv_state")
    if state is None:
        state = DEFAULT_NV_STATE[cfg.get("drive", {}).get("mode", "continuous")]
    kwargs = {"pump_sign": PUMP_SIGN[state], "n_nv": system.M if system is not None else 1}

    def load(path):
        try:
            spec = Spectrum.from_csv(Path(path).read_text(), **kwargs)
        except (OSError, ValueError, IndexError) as e:
            raise ConfigError(f"cannot read spectrum: {e}", None, str(path)) from e
        if system is not None:
            sc = build_sweep({**cfg, "sweep": {"values": spec.omega.tolist()}}, text, args.config)
            spec.initial = initial_expectations(sc)
        return spec

    spec = load(args.input)
    ideal = load(args.ideal) if args.ideal else None
    centers_from = ideal if ideal is not None else spec
    doc = fits_document(spec, _centers(centers_from, cfg, system), cfg.get("analysis", {}).get("min_points", 5), ideal)
    _write(Path(args.output), "fits.json", _dump(doc))
    return 0


COMMANDS = {
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "transpile": cmd_transpile,
    "counts": cmd_counts,
    "analyze": cmd_analyze,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nanonmr", description="NV-center hyperpolarization circuits and sweeps.")
    p.add_argument("--version", action="version", version=f"nanonmr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sp = sub.add_parser(name, help=fn.__doc__)
        sp.add_argument("--config", metavar="PATH", required=name not in ("counts", "analyze"),
                        help=f"JSON run configuration (schema {SCHEMA_VERSION})")
        sp.add_argument("--seed", type=int, default=None, metavar="U64", help="master seed, overrides the config")
        sp.add_argument("--output", default=".", metavar="DIR", help="output directory")
        sp.add_argument("--threads", type=int, default=1, metavar="N", help="worker processes for sweeps")
        sp.add_argument("-v", "--verbose", action="store_true")
        if name == "analyze":
            sp.add_argument("--input", metavar="CSV", help="spectrum to fit")
            sp.add_argument("--ideal", metavar="CSV", help="noiseless spectrum for window centers and delta_peak")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer")
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.config is not None:
            cfg, text = load_config_file(args.config)
        else:
            cfg, text = {"schema": SCHEMA_VERSION}, None
        return COMMANDS[args.command](args, cfg, text)
    except ConfigError as e:
        print(f"nanonmr: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, FitError) as e:
        print(f"nanonmr: failed: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
