"""Full polarization protocol: initialization, evolution cycles, NV resets."""

from __future__ import annotations

import math
from typing import Sequence

from ..circuit import Circuit, Gate, TAG_MEASURE, TAG_PHASE_RND, TAG_X_RND, barrier, reset, rxy
from ..spinsys import SpinSystem, pauli_decompose
from .drive import Drive, TrotterPlan
from .pulsed import pulsed_schedule
from .rotation import rotational_optimize
from .trotter import trotter_step

INIT_METHODS = ("random_x", "random_phase", "pure")
NV_STATES = ("+", "-", "0", "1")
# The NV states that pump the nuclei towards |1>, for each drive mode.
DEFAULT_NV_STATE = {"continuous": "+", "pulsed": "1", "none": "0"}


def nv_init_gates(q: int, state: str) -> list[Gate]:
    """Gates preparing the NV qubit ``q`` (starting in |0>) in ``state``."""
    if state == "+":
        return [rxy(q, math.pi / 2, math.pi / 2)]
    if state == "-":
        return [rxy(q, math.pi / 2, -math.pi / 2)]
    if state == "0":
        return []
    if state == "1":
        return [rxy(q, 0.0, math.pi)]
    raise ValueError(f"unknown NV state {state!r}")


def nucleus_init_gates(q: int, method: str) -> list[Gate]:
    """Stochastic initialization gates for one nucleus qubit."""
    if method == "random_x":
        return [Gate("x", (q,), (), TAG_X_RND)]
    if method == "random_phase":
        return [Gate("h", (q,)), Gate("rz", (q,), (0.0,), TAG_PHASE_RND)]
    if method == "pure":
        return []
    raise ValueError(f"unknown init method {method!r}")


def build_protocol(
    sys: SpinSystem,
    drive: Drive,
    plan: TrotterPlan,
    init: str = "random_x",
    nv_state: str | None = None,
    pair_order: Sequence[Sequence[int]] | None = None,
    rotational: bool = False,
    final_reset: bool = True,
) -> Circuit:
    """Circuit for ``plan.cycles`` polarization cycles.

    Layout: NV preparation and stochastic nuclear initialization, then per
    cycle the evolution (``plan.s`` Trotter steps, or one pulsed sequence),
    a reset of every NV and NV re-preparation, and finally a measurement
    marker.

    Args:
        sys: Spin system.
        drive: Drive settings.
        plan: Trotter plan.
        init: Nuclear initialization, one of ``INIT_METHODS``.
        nv_state: NV preparation ("+", "-" for continuous driving; "0", "1"
            otherwise). Defaults to ``DEFAULT_NV_STATE``.
        pair_order: Two-qubit term order, see ``trotter_step``.
        rotational: Apply the hyperfine alignment frame change and append
            counter-rotations before the measurement marker.
        final_reset: Whether the last cycle also ends with an NV reset. Turn
            off to read the NV polarization left after the last cycle.

    Returns:
        The protocol circuit.
    """
    if init not in INIT_METHODS:
        raise ValueError(f"unknown init method {init!r}")
    state = DEFAULT_NV_STATE[drive.mode] if nv_state is None else nv_state
    if state not in NV_STATES:
        raise ValueError(f"unknown NV state {state!r}")
    if drive.mode == "continuous" and state not in ("+", "-"):
        raise ValueError("continuous driving needs the NV prepared in |+> or |->")
    if drive.mode == "pulsed" and state not in ("0", "1"):
        raise ValueError("pulsed driving needs the NV prepared in |0> or |1>")

    counter: list[Gate] = []
    if rotational:
        sys, counter = rotational_optimize(sys)
    H = pauli_decompose(sys)
    n = sys.n_qubits
    gates: list[Gate] = []
    nv_prep: list[Gate] = []
    for j in range(sys.M):
        nv_prep += nv_init_gates(j, state)
    gates += nv_prep
    for k in range(sys.N):
        gates += nucleus_init_gates(sys.M + k, init)

    if plan.cycles > 0:
        if drive.mode == "pulsed":
            body = pulsed_schedule(sys, drive, plan, pair_order=pair_order, H=H).gates
        else:
            step = trotter_step(
                sys, drive if drive.mode == "continuous" else None, plan.dt,
                order=plan.order, pair_order=pair_order, H=H,
            ).gates
            body = step * plan.s
        for c in range(plan.cycles):
            gates += body
            if c < plan.cycles - 1 or final_reset:
                gates += [reset(j) for j in range(sys.M)]
                gates += nv_prep
    gates += counter
    gates.append(barrier(*range(n), tag=TAG_MEASURE))
    return Circuit(n, tuple(gates))


def cycle_time(sys: SpinSystem, drive: Drive, plan: TrotterPlan) -> float:
    """Simulated evolution time of one cycle in us."""
    if drive.mode == "pulsed":
        return 2 * drive.n_pulses * drive.tau(sys)
    return plan.t_f
