"""Frequency sweeps, Gaussian peak fits and spectrum quality metrics."""

from .counting import (
    COUNT_COLUMNS,
    closed_form_row,
    counting_system,
    counts_csv,
    measured_row,
    transpile_step,
)
from .fit import FitError, PeakFit, delta_peak_metric, gaussian, gaussian_fit, xi_metric
from .spectrum import CSV_HEADER, OBSERVABLES, Spectrum
from .sweep import (
    PUMP_SIGN,
    SweepConfig,
    compile_protocol,
    fit_peaks,
    ideal_peak_centers,
    initial_expectations,
    oracle_sweep,
    peak_center,
    peak_windows,
    point_seed,
    resonances,
    simulate,
    sweep,
    sweep_point,
)

__all__ = [
    "COUNT_COLUMNS", "closed_form_row", "counting_system", "counts_csv", "measured_row", "transpile_step",
    "CSV_HEADER", "FitError", "OBSERVABLES", "PUMP_SIGN", "PeakFit", "Spectrum", "SweepConfig",
    "compile_protocol", "delta_peak_metric", "fit_peaks", "gaussian", "ideal_peak_centers", "gaussian_fit",
    "initial_expectations", "oracle_sweep", "peak_center", "peak_windows", "point_seed",
    "resonances", "simulate", "sweep", "sweep_point", "xi_metric",
]
