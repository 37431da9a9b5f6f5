"""Density-matrix execution engine, noise channels and exact reference propagators."""

from .channels import (
    KrausSet,
    NoiseModel,
    amplitude_damping,
    bit_flip_mixture,
    compose_1q,
    depolarizing_1q,
    depolarizing_2q,
    full_dephasing,
    noise_channel,
    phase_damping,
    reset_channel,
)
from .exact import (
    MAX_EXACT_QUBITS,
    exact_propagator,
    exact_protocol_state,
    exact_pulsed_propagator,
    expm_hermitian,
)
from .ou import OUParams, ou_step, ou_trajectory
from .simulator import INIT_SAMPLING, logical_expectations, run, run_density, task_rng
from .state import (
    DensityMatrix,
    basis_state,
    fidelity,
    prepare_initial,
    random_x_average,
    trace_distance,
)

__all__ = [
    "DensityMatrix", "INIT_SAMPLING", "KrausSet", "MAX_EXACT_QUBITS", "NoiseModel", "OUParams",
    "amplitude_damping", "basis_state", "bit_flip_mixture", "compose_1q", "depolarizing_1q",
    "depolarizing_2q", "exact_propagator", "exact_protocol_state", "exact_pulsed_propagator",
    "expm_hermitian", "fidelity", "full_dephasing", "logical_expectations", "noise_channel",
    "ou_step", "ou_trajectory", "phase_damping", "prepare_initial", "random_x_average",
    "reset_channel", "run", "run_density", "task_rng", "trace_distance",
]
