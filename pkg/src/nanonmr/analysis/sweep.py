"""Frequency sweeps of the polarization protocol and per-nucleus peak fits."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ..circuit import Circuit
from ..engine import NoiseModel, OUParams, exact_propagator, exact_protocol_state, logical_expectations, run
from ..route import Topology, decompose_native, interaction_order, resonator_protocol_wrap, route
from ..spinsys import SpinSystem
from ..synth import Drive, TrotterPlan, build_protocol
from ..synth.protocol import DEFAULT_NV_STATE
from .fit import FitError, PeakFit, gaussian_fit
from .spectrum import Spectrum

# Direction the nuclei are pumped in for each NV preparation (sign of <Z>).
PUMP_SIGN = {"+": -1, "-": 1, "1": -1, "0": 1}
NV_BLOCH = {"+": (1.0, 0.0, 0.0), "-": (-1.0, 0.0, 0.0), "0": (0.0, 0.0, 1.0), "1": (0.0, 0.0, -1.0)}


@dataclass(frozen=True)
class SweepConfig:
    """Everything needed to run one frequency sweep.

    Attributes:
        system: Spin system.
        drive: Drive template; the swept value replaces Omega (continuous)
            or the pulse frequency (pulsed).
        plan: Trotter plan.
        grid: Sweep values in rad/us; may be empty for single-setting runs.
        noise: Device noise, ``None`` for a noiseless device.
        ou: Drive-amplitude fluctuations.
        init: Nuclear initialization method.
        init_sampling: Treatment of random initialization gates, see ``run``.
        samples: Runs per point for random sampling or OU trajectories.
        topology: ``None`` runs the logical circuit; otherwise ``star``,
            ``linear_chain``, ``square_grid`` or ``all_to_all``.
        native: Native two-qubit gate set applied after routing.
        rotational: Use the hyperfine alignment frame (noninteracting, M=1).
        resonator: Carry the hub state through a resonator (star only).
        nv_state: NV preparation; defaults per drive mode.
        seed: Master seed; point ``i`` runs with ``point_seed(seed, i)``.
    """

    system: SpinSystem
    drive: Drive
    plan: TrotterPlan = field(default_factory=TrotterPlan)
    grid: tuple = ()
    noise: NoiseModel | None = None
    ou: OUParams | None = None
    init: str = "random_x"
    init_sampling: str = "auto"
    samples: int | None = None
    topology: str | None = None
    native: str | None = None
    rotational: bool = False
    resonator: bool = False
    nv_state: str | None = None
    seed: int = 0

    def __post_init__(self):
        grid = tuple(float(x) for x in self.grid)
        object.__setattr__(self, "grid", grid)
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if self.resonator and self.topology != "star":
            raise ValueError("the resonator protocol needs the star topology")

    @property
    def state(self) -> str:
        return DEFAULT_NV_STATE[self.drive.mode] if self.nv_state is None else self.nv_state

    def replace(self, **changes) -> "SweepConfig":
        return replace(self, **changes)


def point_seed(seed: int, i: int) -> int:
    """Seed of sweep point ``i``: first word of SeedSequence(seed, spawn_key=(i,))."""
    return int(np.random.SeedSequence(int(seed), spawn_key=(int(i),)).generate_state(1, np.uint64)[0])


def compile_protocol(cfg: SweepConfig, drive: Drive | None = None) -> Circuit:
    """Protocol circuit for one drive setting, routed and decomposed as configured.

    The NV qubits are left unreset after the last cycle so their remaining
    polarization can be read out.
    """
    drive = cfg.drive if drive is None else drive
    sys = cfg.system
    topo = None
    pair_order = None
    if cfg.topology is not None:
        topo = Topology(cfg.topology, sys.n_qubits)
        pair_order = interaction_order(topo, sys.interacting, sys.n_qubits)
    c = build_protocol(
        sys, drive, cfg.plan, init=cfg.init, nv_state=cfg.nv_state,
        pair_order=pair_order, rotational=cfg.rotational, final_reset=False,
    )
    if topo is not None:
        c = route(c, topo, sys.interacting)
        if cfg.resonator:
            c = resonator_protocol_wrap(c, topo)
    if cfg.native is not None:
        c = decompose_native(c, cfg.native)
    return c


def initial_expectations(cfg: SweepConfig) -> np.ndarray:
    """Per-qubit Bloch vectors of the prepared initial state."""
    sys = cfg.system
    out = np.zeros((sys.n_qubits, 3))
    out[: sys.M] = NV_BLOCH[cfg.state]
    if cfg.init == "pure":
        out[sys.M:, 2] = 1.0
    return out


def _logical(values: np.ndarray, c: Circuit, n_logical: int) -> np.ndarray:
    return logical_expectations(values, c)[:n_logical]


def sweep_point(cfg: SweepConfig, i: int) -> np.ndarray:
    """Expectations (n_logical, 3) at grid point ``i``."""
    drive = cfg.drive.with_sweep_value(cfg.grid[i])
    c = compile_protocol(cfg, drive)
    vals = run(
        c, cfg.noise, seed=point_seed(cfg.seed, i), ou=cfg.ou,
        samples=cfg.samples, init_sampling=cfg.init_sampling,
    )
    return _logical(vals, c, cfg.system.n_qubits)


def simulate(cfg: SweepConfig) -> np.ndarray:
    """Expectations (n_logical, 3) at the drive setting of ``cfg.drive``."""
    c = compile_protocol(cfg)
    vals = run(c, cfg.noise, seed=cfg.seed, ou=cfg.ou, samples=cfg.samples, init_sampling=cfg.init_sampling)
    return _logical(vals, c, cfg.system.n_qubits)


def _check_grid(cfg: SweepConfig):
    if len(cfg.grid) < 2:
        raise ValueError("sweep grid needs at least 2 points")


def _sweep_point_args(args):
    return sweep_point(*args)


def _spectrum(cfg: SweepConfig, values, **meta) -> Spectrum:
    return Spectrum(
        np.array(cfg.grid), np.array(values), initial_expectations(cfg),
        n_nv=cfg.system.M, pump_sign=PUMP_SIGN[cfg.state], meta=meta,
    )


def sweep(cfg: SweepConfig, threads: int = 1) -> Spectrum:
    """Run the protocol at every grid point.

    Points are independent; with ``threads > 1`` they run in worker
    processes. Results are ordered by grid index and do not depend on the
    number of workers.
    """
    _check_grid(cfg)
    idx = range(len(cfg.grid))
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            values = list(ex.map(_sweep_point_args, [(cfg, i) for i in idx]))
    else:
        values = [sweep_point(cfg, i) for i in idx]
    return _spectrum(cfg, values, source="circuit")


def oracle_sweep(cfg: SweepConfig) -> Spectrum:
    """Noiseless sweep with exact propagation of the full Hamiltonian.

    Routing, noise, Trotterization and OU fluctuations are ignored; the
    nuclei start fully mixed (or in |0...0> for ``pure`` initialization).
    """
    _check_grid(cfg)
    sys = cfg.system
    nuclei = None
    if cfg.init == "pure":
        nuclei = np.zeros((2**sys.N, 2**sys.N))
        nuclei[0, 0] = 1.0
    values = []
    for w in cfg.grid:
        d = cfg.drive.with_sweep_value(w)
        U = exact_propagator(sys, d, None if d.mode == "pulsed" else cfg.plan.t_f)
        rho = exact_protocol_state(sys, d, cfg.plan, cfg.nv_state, nuclei=nuclei, propagator=U)
        values.append(rho.expectations())
    return _spectrum(cfg, values, source="exact")


def resonances(sys: SpinSystem) -> np.ndarray:
    """Expected peak positions |omega_c| per nucleus."""
    return sys.larmor()


def ideal_peak_centers(ideal: Spectrum) -> np.ndarray:
    """Grid position of the largest polarization gain of each nucleus.

    The resonances of a many-nucleus system are pulled away from |omega_c|
    by the other nuclei, so fit windows are anchored on the ideal curves.
    """
    return np.array([peak_center(ideal, q) for q in range(ideal.n_nv, ideal.n_qubits)])


def peak_windows(grid: Sequence[float], centers: Sequence[float]) -> list[np.ndarray]:
    """Indices of the grid points closest to each center (Voronoi cells).

    Raises:
        ValueError: If two centers coincide.
    """
    grid = np.asarray(grid, dtype=float)
    centers = np.asarray(centers, dtype=float)
    order = np.argsort(centers)
    sc = centers[order]
    if np.any(np.diff(sc) == 0):
        raise ValueError("nuclei with equal resonance frequencies cannot be separated")
    edges = (sc[1:] + sc[:-1]) / 2
    cell = np.searchsorted(edges, grid)
    out: list[np.ndarray] = [np.empty(0, dtype=int)] * len(centers)
    for rank, k in enumerate(order):
        out[k] = np.nonzero(cell == rank)[0]
    return out


def fit_peaks(spec: Spectrum, centers: Sequence[float], min_points: int = 5) -> list[PeakFit]:
    """Gaussian fit of each nucleus' polarization gain inside its window.

    Args:
        spec: Sweep result with NVs first.
        centers: Expected resonance of each nucleus, in nucleus order.
        min_points: Minimal window size.

    Raises:
        FitError: If a window has too few points or a fit fails.
    """
    windows = peak_windows(spec.omega, centers)
    fits = []
    for k, win in enumerate(windows):
        if len(win) < min_points:
            raise FitError(f"nucleus {k}: window holds {len(win)} grid points, need {min_points}")
        y = spec.gain(spec.n_nv + k)[win]
        try:
            fits.append(gaussian_fit(spec.omega[win], y))
        except FitError as e:
            raise FitError(f"nucleus {k}: {e}") from e
    return fits


def peak_center(spec: Spectrum, qubit: int) -> float:
    """Grid value of the largest polarization gain of a qubit."""
    return float(spec.omega[int(np.argmax(spec.gain(qubit)))])
