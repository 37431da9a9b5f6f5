"""Euler-angle compilation of single-qubit unitaries."""

from __future__ import annotations

import math

import numpy as np

from ..circuit import Gate, rxy_matrix, rz_matrix


def _wrap(a: float) -> float:
    """Map an angle to (-pi, pi]."""
    a = math.remainder(a, 2 * math.pi)
    return math.pi if a == -math.pi else a


def zyz_decompose(U: np.ndarray, atol: float = 1e-10) -> tuple[float, float, float]:
    """Find (beta, gamma, delta) with U ~ Rz(beta) Rxy(pi/2, gamma) Rz(delta).

    Equality holds up to a global phase. When gamma vanishes the whole
    z-rotation is put into beta, so the identity maps to (0, 0, 0).

    Args:
        U: 2x2 unitary.
        atol: Unitarity tolerance.

    Returns:
        The angles (beta, gamma, delta) in radians.

    Raises:
        ValueError: If ``U`` is not unitary.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {U.shape}")
    if not np.allclose(U.conj().T @ U, np.eye(2), atol=atol):
        raise ValueError("matrix is not unitary")
    V = U / np.sqrt(np.linalg.det(U))
    a, b = V[0, 0], V[1, 0]
    gamma = 2.0 * math.atan2(abs(b), abs(a))
    if abs(b) < 1e-14:
        beta, delta = -2.0 * np.angle(a), 0.0
    elif abs(a) < 1e-14:
        beta, delta = 2.0 * np.angle(b), 0.0
    else:
        s = -2.0 * np.angle(a)  # beta + delta
        d = 2.0 * np.angle(b)  # beta - delta
        beta, delta = (s + d) / 2.0, (s - d) / 2.0
    beta, delta = _wrap(beta), _wrap(delta)
    if abs(beta) < 1e-15:
        beta = 0.0
    if abs(delta) < 1e-15:
        delta = 0.0
    return float(beta), float(gamma), float(delta)


def zyz_matrix(beta: float, gamma: float, delta: float) -> np.ndarray:
    return rz_matrix(beta) @ rxy_matrix(math.pi / 2, gamma) @ rz_matrix(delta)


def zyz_gates(q: int, U: np.ndarray, tol: float = 1e-14) -> list[Gate]:
    """Gates in execution order (Rz(delta) first) reproducing ``U``.

    Rotations with an angle below ``tol`` are omitted.
    """
    beta, gamma, delta = zyz_decompose(U)
    out = []
    if abs(delta) > tol:
        out.append(Gate("rz", (q,), (delta,)))
    if abs(gamma) > tol:
        out.append(Gate("rxy", (q,), (math.pi / 2, gamma)))
    if abs(beta) > tol:
        out.append(Gate("rz", (q,), (beta,)))
    return out
