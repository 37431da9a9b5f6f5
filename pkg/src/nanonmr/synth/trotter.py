"""First- and second-order Trotter steps."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from ..circuit import Circuit, Gate, TAG_DRIVE, rxy, rz, uzz
from ..spinsys import PAULI, PauliHamiltonian, PauliTerm, SpinSystem, pauli_decompose
from .drive import Drive
from .zyz import zyz_gates

# Basis changes mapping a Pauli letter onto Z: (gate before, gate after).
# Ry(-pi/2) ... Ry(pi/2) turns exp(-i c Z) into exp(-i c X);
# Rx(pi/2) ... Rx(-pi/2) turns exp(-i c Z) into exp(-i c Y).
BASIS_CHANGE = {
    "X": ((math.pi / 2, -math.pi / 2), (math.pi / 2, math.pi / 2)),
    "Y": ((0.0, math.pi / 2), (0.0, -math.pi / 2)),
}


def pauli_exponential(term: PauliTerm, t: float) -> list[Gate]:
    """Gates for exp(-i t coeff P) with P of weight one or two."""
    sup = term.support
    theta = term.coeff * t
    if len(sup) == 1:
        q = sup[0]
        letter = term.string[q]
        if letter == "Z":
            return [rz(q, 2 * theta)]
        phi = 0.0 if letter == "X" else math.pi / 2
        return [rxy(q, phi, 2 * theta)]
    if len(sup) != 2:
        raise ValueError(f"term {term.string} has weight {len(sup)}")
    a, b = sup
    before, after = [], []
    for q in (a, b):
        letter = term.string[q]
        if letter in BASIS_CHANGE:
            pre, post = BASIS_CHANGE[letter]
            before.append(rxy(q, *pre))
            after.append(rxy(q, *post))
    return before + [uzz(a, b, theta)] + after


def _single_qubit_blocks(H: PauliHamiltonian, dt: float) -> dict[int, list[Gate]]:
    """exp(-i dt H_q) per qubit, compiled with ZYZ."""
    per_qubit: dict[int, np.ndarray] = {}
    for t in H.sqg_terms:
        (q,) = t.support
        per_qubit.setdefault(q, np.zeros((2, 2), dtype=complex))
        per_qubit[q] += t.coeff * PAULI[t.string[q]]
    return {q: zyz_gates(q, expm(-1j * dt * h)) for q, h in sorted(per_qubit.items())}


def _pair(term: PauliTerm) -> tuple[int, int]:
    a, b = term.support
    return (a, b)


def ordered_tqg_terms(H: PauliHamiltonian, pair_order: Sequence[Sequence[int]] | None) -> list[PauliTerm]:
    """Two-qubit terms, optionally grouped by qubit pair in ``pair_order``.

    Within a pair the printed order (XZ, YZ, ZZ or ZZ, XX, YY) is kept. Pairs
    not listed follow in their printed order.
    """
    terms = list(H.tqg_terms)
    if pair_order is None:
        return terms
    by_pair: dict[tuple[int, int], list[PauliTerm]] = {}
    for t in terms:
        by_pair.setdefault(_pair(t), []).append(t)
    out: list[PauliTerm] = []
    for p in pair_order:
        key = tuple(sorted(int(x) for x in p))
        out.extend(by_pair.pop(key, []))
    for t in terms:
        if _pair(t) in by_pair:
            out.extend(by_pair.pop(_pair(t)))
    return out


def step_blocks(
    sys: SpinSystem,
    drive: Drive | None,
    dt: float,
    pair_order: Sequence[Sequence[int]] | None = None,
    H: PauliHamiltonian | None = None,
) -> list[list[Gate]]:
    """Exponential factors of one first-order step; each block is one exponential."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    H = pauli_decompose(sys) if H is None else H
    blocks: list[list[Gate]] = []
    sq = _single_qubit_blocks(H, dt)
    for j in range(sys.M):
        blocks.append(sq.pop(j, []))
        if drive is not None and drive.mode == "continuous" and drive.Omega != 0:
            blocks.append([rxy(j, -drive.phi, drive.Omega * dt, tag=TAG_DRIVE)])
    for q in sorted(sq):
        blocks.append(sq[q])
    for t in ordered_tqg_terms(H, pair_order):
        blocks.append(pauli_exponential(t, dt))
    return [b for b in blocks if b]


def trotter_step(
    sys: SpinSystem,
    drive: Drive | None,
    dt: float,
    order: int = 1,
    pair_order: Sequence[Sequence[int]] | None = None,
    H: PauliHamiltonian | None = None,
) -> Circuit:
    """One Trotter step of duration ``dt``.

    The step starts with the single-qubit layer (NV detuning Rz and drive
    Rxy, ZYZ-compiled nuclear precession), followed by one UZZ-based
    exponential per two-qubit Pauli term. ``order=2`` gives the symmetric
    (Strang) product of half steps.

    Args:
        sys: Spin system.
        drive: Drive; only the continuous mode adds gates here.
        dt: Step duration in us.
        order: Product-formula order, 1 or 2.
        pair_order: Optional qubit-pair order for the two-qubit terms, used to
            match a routing pattern.
        H: Precomputed Pauli decomposition of ``sys``.

    Returns:
        Circuit on ``sys.n_qubits`` qubits.
    """
    if order == 1:
        blocks = step_blocks(sys, drive, dt, pair_order, H)
    elif order == 2:
        half = step_blocks(sys, drive, dt / 2, pair_order, H)
        blocks = half + half[::-1]
    else:
        raise ValueError("order must be 1 or 2")
    return Circuit(sys.n_qubits, tuple(g for b in blocks for g in b))
