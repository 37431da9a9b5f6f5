"""Exact propagators of the full Hamiltonian, used as reference solutions."""

from __future__ import annotations

import math
from functools import reduce

import numpy as np

from ..circuit import rxy_matrix
from ..spinsys import SpinSystem, hamiltonian_matrix
from ..synth.drive import Drive, TrotterPlan
from ..synth.protocol import DEFAULT_NV_STATE
from .state import DensityMatrix

MAX_EXACT_QUBITS = 6

NV_VECTORS = {
    "0": np.array([1.0, 0.0], dtype=complex),
    "1": np.array([0.0, 1.0], dtype=complex),
    "+": np.array([1.0, 1.0], dtype=complex) / math.sqrt(2),
    "-": np.array([1.0, -1.0], dtype=complex) / math.sqrt(2),
}


def _check_size(sys: SpinSystem, max_qubits: int):
    if sys.n_qubits > max_qubits:
        raise ValueError(f"exact propagation limited to {max_qubits} qubits, system has {sys.n_qubits}")


def expm_hermitian(H: np.ndarray, t: float) -> np.ndarray:
    """exp(-i t H) for Hermitian H via eigendecomposition."""
    w, v = np.linalg.eigh((H + H.conj().T) / 2)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def exact_propagator(sys: SpinSystem, drive: Drive | str | None, t: float | None = None,
                     max_qubits: int = MAX_EXACT_QUBITS) -> np.ndarray:
    """Evolution operator of the full Hamiltonian.

    Args:
        sys: Spin system.
        drive: ``None``/``"none"`` for free evolution, a continuous
            ``Drive`` (Omega, phi) or a pulsed ``Drive``, which delegates to
            ``exact_pulsed_propagator`` for one cycle.
        t: Evolution time in us (ignored for pulsed drives).
        max_qubits: Size guard for the dense exponential.

    Returns:
        The 2^n x 2^n unitary exp(-i t H).
    """
    _check_size(sys, max_qubits)
    if isinstance(drive, Drive) and drive.mode == "pulsed":
        return exact_pulsed_propagator(sys, drive, max_qubits=max_qubits)
    if drive is None or drive == "none" or (isinstance(drive, Drive) and drive.mode == "none"):
        H = hamiltonian_matrix(sys)
    elif isinstance(drive, Drive):
        H = hamiltonian_matrix(sys, rabi=drive.Omega, phase=drive.phi)
    else:
        raise ValueError(f"unsupported drive {drive!r}; pass a Drive for continuous driving")
    if t is None or t < 0:
        raise ValueError("evolution time must be non-negative")
    return expm_hermitian(H, t)


def _on_qubit(U: np.ndarray, q: int, n: int) -> np.ndarray:
    ops = [np.eye(2, dtype=complex)] * n
    ops[q] = U
    return reduce(np.kron, ops)


def exact_pulsed_propagator(sys: SpinSystem, drive: Drive, nv: int = 0,
                            max_qubits: int = MAX_EXACT_QUBITS) -> np.ndarray:
    """One cycle of the pulse sequence with instantaneous, ideal pulses.

    Free evolution between pulses is exact. The structure matches
    ``pulsed_schedule``: Ry(-pi/2), the symmetric train, Ry(pi/2), Rx(pi/2),
    the shifted train, Rx(-pi/2). Pulses carry the drive's amplitude error.
    """
    _check_size(sys, max_qubits)
    if drive.mode != "pulsed":
        raise ValueError("exact_pulsed_propagator needs a pulsed drive")
    n = sys.n_qubits
    half = expm_hermitian(hamiltonian_matrix(sys), drive.tau(sys) / 2)
    theta = math.pi * (1.0 + drive.amplitude_error)
    pulse = {
        "X": _on_qubit(rxy_matrix(0.0, theta), nv, n),
        "Y": _on_qubit(rxy_matrix(math.pi / 2, theta), nv, n),
    }
    axes = drive.pattern.upper() * drive.N_blocks
    seq = [_on_qubit(rxy_matrix(math.pi / 2, -math.pi / 2), nv, n), half]
    for i, ax in enumerate(axes):
        seq.append(pulse[ax])
        seq.append(half if i == len(axes) - 1 else half @ half)
    seq.append(_on_qubit(rxy_matrix(math.pi / 2, math.pi / 2), nv, n))
    seq.append(_on_qubit(rxy_matrix(0.0, math.pi / 2), nv, n))
    for ax in axes:
        seq += [half @ half, pulse[ax]]
    seq.append(_on_qubit(rxy_matrix(0.0, -math.pi / 2), nv, n))
    U = np.eye(2**n, dtype=complex)
    for step in seq:
        U = step @ U
    return U


def _nv_reset(rho: np.ndarray, M: int, N: int, nv_rho: np.ndarray) -> np.ndarray:
    """Trace out the NVs and re-prepare each in ``nv_rho``."""
    dn = 2**N
    t = rho.reshape(2**M, dn, 2**M, dn)
    nuc = np.einsum("aiaj->ij", t)
    return np.kron(reduce(np.kron, [nv_rho] * M), nuc)


def exact_protocol_state(
    sys: SpinSystem,
    drive: Drive,
    plan: TrotterPlan,
    nv_state: str | None = None,
    nuclei: np.ndarray | None = None,
    final_reset: bool = False,
    propagator: np.ndarray | None = None,
) -> DensityMatrix:
    """State after ``plan.cycles`` exact polarization cycles.

    Args:
        sys: Spin system.
        drive: Drive of each cycle (continuous, pulsed or none).
        plan: Supplies ``t_f`` (non-pulsed drives) and ``cycles``.
        nv_state: NV preparation, defaults as in ``build_protocol``.
        nuclei: Initial nuclear density matrix; defaults to fully mixed.
        final_reset: Reset the NVs after the last cycle too.
        propagator: Precomputed cycle unitary.

    Returns:
        Final density matrix, qubit order NVs then nuclei.
    """
    M, N = sys.M, sys.N
    state = DEFAULT_NV_STATE[drive.mode] if nv_state is None else nv_state
    v = NV_VECTORS[state]
    nv_rho = np.outer(v, v.conj())
    nuc = np.eye(2**N, dtype=complex) / 2**N if nuclei is None else np.asarray(nuclei, dtype=complex)
    rho = np.kron(reduce(np.kron, [nv_rho] * M), nuc)
    U = propagator
    if U is None and plan.cycles > 0:
        U = exact_propagator(sys, drive, None if drive.mode == "pulsed" else plan.t_f)
    for c in range(plan.cycles):
        rho = U @ rho @ U.conj().T
        if c < plan.cycles - 1 or final_reset:
            rho = _nv_reset(rho, M, N, nv_rho)
    return DensityMatrix.from_matrix(rho)
