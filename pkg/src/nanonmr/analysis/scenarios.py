"""Named benchmark scenarios.

Coupling constants are illustrative choices: strong enough for well-resolved
peaks within one 30 us cycle and weak enough that no nucleus overshoots a
full transfer.
"""

from __future__ import annotations

import math

import numpy as np

from ..engine import NoiseModel, OUParams
from ..spinsys import GAMMA_C, SpinSystem
from ..synth import Drive, TrotterPlan
from .sweep import SweepConfig

# Detuning of 120 kHz in rad/us.
DETUNING_120KHZ = 2 * math.pi * 0.12


def device_noise(eps_TQG: float = 2e-3, eps_SQG: float | None = 1e-4) -> NoiseModel:
    """Superconducting device: T1 = T2 = 60 us, 60 ns SQGs and 27 ns TQGs."""
    return NoiseModel(T1=60.0, T2=60.0, eps_TQG=eps_TQG, eps_SQG=eps_SQG, tau_SQG=0.060, tau_TQG=0.027)


def drive_fluctuations() -> OUParams:
    return OUParams(tau=500.0, c=4e-7, dt=1.0)


def single_nucleus(delta: float = 0.0) -> SpinSystem:
    """One NV and one nucleus at 0.05 T with A_perp ~ 0.16 rad/us."""
    return SpinSystem(delta=[delta], A=np.array([[[0.15, 0.0, 0.30]]]), Bz=0.05)


def single_nucleus_sweep(mode: str = "continuous", delta: float = 0.0, step: float = 0.02,
                         half_span: float = 0.8) -> SweepConfig:
    """Sweep around |omega_c| of ``single_nucleus``.

    Continuous driving uses 400 Trotter steps so the Trotter shift of the
    resonance stays below one grid step; the pulsed sequence uses one Trotter
    step per half interval.
    """
    sys = single_nucleus(delta)
    w = float(sys.larmor()[0])
    grid = np.arange(w - half_span, w + half_span + step / 2, step)
    plan = TrotterPlan(t_f=30.0, s=400 if mode == "continuous" else 32)
    return SweepConfig(sys, Drive(mode), plan, grid=tuple(grid))


def two_interacting_nuclei(delta: float = 0.0) -> SpinSystem:
    """One NV and two interacting nuclei at 0.03 T."""
    A = np.array([[[0.10, 0.025, 0.40], [-0.05, 0.09, -0.40]]])
    g = np.array([[0.0, 0.05], [0.0, 0.0]])
    return SpinSystem(delta=[delta], A=A, g=g, Bz=0.03)


def two_nuclei_sweep(mode: str = "continuous", noise: NoiseModel | None = None,
                     delta: float = 0.0, ou: OUParams | None = None) -> SweepConfig:
    """Star-routed sweep of ``two_interacting_nuclei`` over both resonances."""
    sys = two_interacting_nuclei(delta)
    L = sys.larmor()
    grid = np.arange(L.min() - 0.35, L.max() + 0.35, 0.025)
    return SweepConfig(
        sys, Drive(mode), TrotterPlan(t_f=30.0, s=32), grid=tuple(grid),
        noise=noise, ou=ou, topology="star",
    )


def codesign_benchmark() -> SpinSystem:
    """One NV and five noninteracting nuclei, gamma_c B = 1.2 rad/us."""
    az = [-0.8, -0.4, 0.0, 0.4, 0.8]
    A = np.array([[[0.15, 0.0, a] for a in az]])
    return SpinSystem(delta=[0.0], A=A, Bz=1.2 / GAMMA_C)


def codesign_sweep(topology: str, eps_TQG: float | None = None) -> SweepConfig:
    """Routed sweep of ``codesign_benchmark``.

    ``eps_TQG=None`` is a noiseless device; otherwise the device noise of
    ``device_noise`` with eps_SQG = eps_TQG / 10.
    """
    noise = None if eps_TQG is None else device_noise(eps_TQG, None)
    return SweepConfig(
        codesign_benchmark(), Drive("continuous"), TrotterPlan(t_f=30.0, s=32),
        grid=tuple(np.arange(0.45, 1.7501, 0.02)), noise=noise, topology=topology,
        native="uzz_param", rotational=True, init_sampling="exact",
    )


SCENARIOS = {
    "single_nucleus": single_nucleus_sweep,
    "two_nuclei": two_nuclei_sweep,
    "codesign": codesign_sweep,
}
