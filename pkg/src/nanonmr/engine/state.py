"""Density matrices, initial states and state fidelity."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..circuit import HADAMARD, rz_matrix

MAX_QUBITS = 10

_PAULI_3 = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.diag([1.0, -1.0]).astype(complex),
)


@dataclass
class DensityMatrix:
    """Mixed state stored as a tensor with ``2 n`` axes of size 2.

    Axes ``0..n-1`` are ket indices and ``n..2n-1`` bra indices, qubit 0 being
    the most significant bit of the matrix index.
    """

    n_qubits: int
    tensor: np.ndarray

    def __post_init__(self):
        n = self.n_qubits
        if not 0 < n <= MAX_QUBITS:
            raise ValueError(f"density matrices support 1..{MAX_QUBITS} qubits, got {n}")
        t = np.asarray(self.tensor, dtype=complex)
        if t.size != 4**n:
            raise ValueError(f"tensor with {t.size} entries does not fit {n} qubits")
        self.tensor = t.reshape((2,) * (2 * n))

    @classmethod
    def from_matrix(cls, rho: np.ndarray) -> "DensityMatrix":
        rho = np.asarray(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density matrix must be square")
        n = int(round(math.log2(rho.shape[0])))
        if 2**n != rho.shape[0]:
            raise ValueError("dimension is not a power of two")
        return cls(n, rho)

    @classmethod
    def from_state(cls, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        return cls.from_matrix(np.outer(psi, psi.conj()))

    @classmethod
    def zero(cls, n: int) -> "DensityMatrix":
        t = np.zeros(4**n, dtype=complex)
        t[0] = 1.0
        return cls(n, t)

    @property
    def matrix(self) -> np.ndarray:
        d = 2**self.n_qubits
        return self.tensor.reshape(d, d)

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.n_qubits, self.tensor.copy())

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def validate(self, atol: float = 1e-10, eig_floor: float = -1e-9) -> None:
        """Raise if the state is not Hermitian, unit-trace and PSD."""
        m = self.matrix
        if np.max(np.abs(m - m.conj().T)) > atol:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > atol:
            raise ValueError(f"density matrix trace {np.trace(m).real:.3g} != 1")
        if np.min(np.linalg.eigvalsh((m + m.conj().T) / 2)) < eig_floor:
            raise ValueError("density matrix has negative eigenvalues")

    def reduced(self, q: int) -> np.ndarray:
        """2x2 reduced state of qubit ``q``."""
        n = self.n_qubits
        t = np.moveaxis(self.tensor, [q, n + q], [0, 1])
        rest = 2 ** (n - 1)
        return np.trace(t.reshape(2, 2, rest, rest), axis1=2, axis2=3)

    def expectations(self) -> np.ndarray:
        """Array of shape (n, 3) with <X>, <Y>, <Z> of every qubit."""
        out = np.empty((self.n_qubits, 3))
        for q in range(self.n_qubits):
            r = self.reduced(q)
            for a, P in enumerate(_PAULI_3):
                out[q, a] = float(np.real(np.trace(r @ P)))
        return out

    def apply_superoperator(self, S: np.ndarray, qubits) -> None:
        """In-place rho -> S(rho) for a superoperator tensor on ``qubits``."""
        n, k = self.n_qubits, len(qubits)
        axes = list(qubits) + [n + q for q in qubits]
        out = np.tensordot(S, self.tensor, axes=(list(range(2 * k, 4 * k)), axes))
        self.tensor = np.moveaxis(out, list(range(2 * k)), axes)

    def apply_unitary(self, U: np.ndarray, qubits) -> None:
        """In-place rho -> U rho U^dagger."""
        n, k = self.n_qubits, len(qubits)
        u = U.reshape((2,) * (2 * k))
        t = np.tensordot(u, self.tensor, axes=(list(range(k, 2 * k)), list(qubits)))
        t = np.moveaxis(t, list(range(k)), list(qubits))
        bra = [n + q for q in qubits]
        t = np.tensordot(u.conj(), t, axes=(list(range(k, 2 * k)), bra))
        self.tensor = np.moveaxis(t, list(range(k)), bra)


def basis_state(n: int, bits) -> DensityMatrix:
    """Projector onto the computational basis state ``bits`` (sequence of 0/1)."""
    bits = list(bits)
    if len(bits) != n or set(bits) - {0, 1}:
        raise ValueError("basis state needs n bits of value 0 or 1")
    idx = int("".join(str(b) for b in bits), 2) if n else 0
    t = np.zeros(4**n, dtype=complex)
    t[idx * 2**n + idx] = 1.0
    return DensityMatrix(n, t)


def _product_state(vectors) -> DensityMatrix:
    psi = np.array([1.0], dtype=complex)
    for v in vectors:
        psi = np.kron(psi, v)
    return DensityMatrix.from_state(psi)


def prepare_initial(n: int, method: str, rng: np.random.Generator | None = None,
                    nuclei=None, bits=None) -> DensityMatrix:
    """Sample an initial state.

    Args:
        n: Number of qubits.
        method: ``random_x`` flips each nucleus with probability 1/2;
            ``random_phase`` applies a Hadamard then a uniformly random phase
            to each nucleus; ``pure`` returns the basis state ``bits``
            (default all zeros).
        rng: Random generator for the stochastic methods.
        nuclei: Indices of the nucleus qubits (default: all qubits).

    Returns:
        A pure-state density matrix.
    """
    nuclei = range(n) if nuclei is None else nuclei
    nuclei = set(nuclei)
    if method == "pure":
        return basis_state(n, [0] * n if bits is None else bits)
    if rng is None:
        raise ValueError(f"{method} initialization needs a random generator")
    zero = np.array([1.0, 0.0], dtype=complex)
    vecs = []
    for q in range(n):
        if q not in nuclei:
            vecs.append(zero)
        elif method == "random_x":
            vecs.append(np.array([0.0, 1.0], dtype=complex) if rng.random() < 0.5 else zero)
        elif method == "random_phase":
            vecs.append(rz_matrix(rng.uniform(0, 2 * math.pi)) @ HADAMARD @ zero)
        else:
            raise ValueError(f"unknown init method {method!r}")
    return _product_state(vecs)


def random_x_average(n: int, nuclei=None) -> DensityMatrix:
    """Uniform average over all 2^k random_x outcomes."""
    nuclei = list(range(n)) if nuclei is None else list(nuclei)
    acc = np.zeros((2**n, 2**n), dtype=complex)
    for flips in product((0, 1), repeat=len(nuclei)):
        bits = [0] * n
        for q, f in zip(nuclei, flips):
            bits[q] = f
        acc += basis_state(n, bits).matrix
    return DensityMatrix.from_matrix(acc / 2 ** len(nuclei))


def _psd_sqrt(m: np.ndarray, name: str, floor: float = -1e-9) -> np.ndarray:
    m = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(m)
    if w.min() < floor:
        raise ValueError(f"{name} is not positive semidefinite (min eigenvalue {w.min():.3g})")
    # Eigenvalues at rounding level are zero; their square roots would not be.
    w = np.where(w > 1e-14 * max(1.0, float(w.max())), w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho, sigma) -> float:
    """Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma, dtype=complex)
    if a.shape != b.shape:
        raise ValueError("fidelity needs states of equal dimension")
    # Nuclear norm of sqrt(rho) sqrt(sigma): singular values stay accurate for low-rank states.
    nuc = np.linalg.svd(_psd_sqrt(a, "rho") @ _psd_sqrt(b, "sigma"), compute_uv=False).sum()
    return float(min(1.0, nuc**2))


def trace_distance(rho, sigma) -> float:
    a = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    b = sigma.matrix if isinstance(sigma, DensityMatrix) else np.asarray(sigma)
    d = a - b
    return float(0.5 * np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


def expectations_of_matrix(rho: np.ndarray) -> np.ndarray:
    return DensityMatrix.from_matrix(rho).expectations()


__all__ = [
    "DensityMatrix", "MAX_QUBITS", "basis_state", "expectations_of_matrix", "fidelity",
    "prepare_initial", "random_x_average", "trace_distance",
]
