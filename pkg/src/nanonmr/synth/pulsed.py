"""Pulsed (XY8-type) polarization sequences.

A cycle consists of two sub-sequences of ``P`` pi-pulses with spacing tau:

* symmetric: tau/2, pi, tau, pi, ..., pi, tau/2, whose filter function is
  even in time and yields the effective coupling alpha A_perp sigma_z I_x;
* asymmetric: the same train shifted by tau/2 (tau, pi, tau, pi, ..., tau, pi),
  which is odd in time and yields beta A_perp sigma_z I_y.

The symmetric part is sandwiched between NV rotations mapping sigma_z to
sigma_x, the asymmetric part between rotations mapping sigma_z to sigma_y, so
the cycle implements the flip-flop sigma_x I_x + sigma_y I_y. Each half
interval (tau/2) of free evolution is Trotterized.
"""

from __future__ import annotations

import math
from typing import Sequence

from ..circuit import Circuit, Gate, TAG_PULSE, rx, rxy, ry
from ..spinsys import PauliHamiltonian, SpinSystem, pauli_decompose
from .drive import Drive, TrotterPlan
from .trotter import trotter_step


def fourier_cos_coefficient(n: int) -> float:
    """Cosine coefficient f_n of the symmetric +-1 filter function.

    f_n = -4/(pi n) for odd n and 0 for even n, as used for the effective
    coupling alpha = f_n / 4.
    """
    if n < 1:
        raise ValueError("harmonic must be positive")
    return -4.0 / (math.pi * n) if n % 2 else 0.0


def effective_coupling(n: int) -> float:
    """|alpha| = |f_n| / 4 for harmonic n."""
    return abs(fourier_cos_coefficient(n)) / 4.0


def pulse_gate(q: int, axis: str, amplitude_error: float = 0.0) -> Gate:
    """pi-pulse about X or Y, optionally over-rotated by (1 + error)."""
    axis = axis.upper()
    if amplitude_error == 0.0:
        return Gate(axis.lower(), (q,), (), TAG_PULSE)
    phi = 0.0 if axis == "X" else math.pi / 2
    return rxy(q, phi, math.pi * (1.0 + amplitude_error), tag=TAG_PULSE)


def half_intervals(drive: Drive) -> int:
    """Number of tau/2 free-evolution blocks per cycle (both sub-sequences)."""
    return 4 * drive.n_pulses


def steps_per_half_interval(drive: Drive, plan: TrotterPlan | None) -> int:
    """Trotter steps per tau/2 block."""
    if drive.steps_per_interval is not None:
        return drive.steps_per_interval
    if plan is None:
        return 1
    blocks = half_intervals(drive)
    if plan.s < blocks:
        raise ValueError(
            f"pulsed sequence needs at least one Trotter step per free evolution "
            f"({blocks} blocks), got s={plan.s}"
        )
    return plan.s // blocks


def pulsed_schedule(
    sys: SpinSystem,
    drive: Drive,
    plan: TrotterPlan | None = None,
    pair_order: Sequence[Sequence[int]] | None = None,
    H: PauliHamiltonian | None = None,
    nv: int = 0,
) -> Circuit:
    """One cycle of the symmetric plus asymmetric pulse sequence.

    Args:
        sys: Spin system.
        drive: Pulsed drive; sets tau, the pattern and the repetitions.
        plan: Trotter plan; supplies the order and, if the drive does not fix
            it, the number of Trotter steps per free evolution.
        pair_order: Optional two-qubit term order (see ``trotter_step``).
        H: Precomputed Pauli decomposition.
        nv: NV qubit receiving the pulses.

    Returns:
        Circuit for one cycle without initialization or reset.
    """
    if drive.mode != "pulsed":
        raise ValueError("pulsed_schedule needs a pulsed drive")
    tau = drive.tau(sys)
    steps = steps_per_half_interval(drive, plan)
    if steps < 1:
        raise ValueError("steps_per_interval must be >= 1")
    order = plan.order if plan is not None else 1
    H = pauli_decompose(sys) if H is None else H
    free = trotter_step(sys, None, tau / 2 / steps, order=order, pair_order=pair_order, H=H)
    te = list(free.gates) * steps
    axes = drive.pattern.upper() * drive.N_blocks
    eps = drive.amplitude_error

    gates: list[Gate] = []
    # Symmetric train, conjugated so that sigma_z -> sigma_x.
    gates.append(ry(nv, -math.pi / 2))
    gates += te
    for i, ax in enumerate(axes):
        gates.append(pulse_gate(nv, ax, eps))
        gates += te
        if i < len(axes) - 1:
            gates += te
    gates.append(ry(nv, math.pi / 2))
    # Asymmetric train, conjugated so that sigma_z -> sigma_y.
    gates.append(rx(nv, math.pi / 2))
    for ax in axes:
        gates += te
        gates += te
        gates.append(pulse_gate(nv, ax, eps))
    gates.append(rx(nv, -math.pi / 2))
    return Circuit(sys.n_qubits, tuple(gates))


def pulsed_duration(sys: SpinSystem, drive: Drive) -> float:
    """Simulated time covered by one pulsed cycle (2 P tau)."""
    return 2 * drive.n_pulses * drive.tau(sys)
