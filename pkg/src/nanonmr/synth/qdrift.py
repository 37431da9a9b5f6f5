"""qDRIFT randomized product formula."""

from __future__ import annotations

import numpy as np

from ..circuit import Circuit
from ..spinsys import PauliHamiltonian, PauliTerm, lambda_total
from .trotter import pauli_exponential


def qdrift_indices(H: PauliHamiltonian, N_terms: int, rng_seed=None) -> np.ndarray:
    """Sampled term indices, each drawn with probability |h_j| / lambda."""
    terms = H.terms
    if not terms:
        raise ValueError("qDRIFT needs a non-empty Hamiltonian")
    if N_terms < 1:
        raise ValueError("N_terms must be >= 1")
    lam = lambda_total(terms)
    if not lam > 0:
        raise ValueError("qDRIFT needs lambda > 0")
    p = np.array([abs(t.coeff) for t in terms]) / lam
    rng = np.random.default_rng(rng_seed)
    return rng.choice(len(terms), size=N_terms, p=p)


def qdrift_sample(H: PauliHamiltonian, t_f: float, N_terms: int, rng_seed=None) -> Circuit:
    """Sample a qDRIFT circuit of ``N_terms`` Pauli exponentials.

    Each sampled term j is applied as exp(-i (lambda t_f / N_terms) sgn(h_j) P_j).

    Args:
        H: Pauli Hamiltonian.
        t_f: Evolution time in us.
        N_terms: Number of sampled exponentials.
        rng_seed: Seed or ``numpy.random.Generator``.

    Returns:
        The sampled circuit.
    """
    terms = H.terms
    idx = qdrift_indices(H, N_terms, rng_seed)
    tau = lambda_total(terms) * t_f / N_terms
    gates = []
    for i in idx:
        t = terms[i]
        unit = PauliTerm(float(np.sign(t.coeff)), t.string)
        gates.extend(pauli_exponential(unit, tau))
    return Circuit(H.n_qubits, tuple(gates))


def qdrift_error_bound(lam: float, t_f: float, N_terms: int) -> float:
    """Upper bound 2 lambda^2 t_f^2 / N_terms on the qDRIFT channel error."""
    if N_terms < 1:
        raise ValueError("N_terms must be >= 1")
    return 2.0 * lam**2 * t_f**2 / N_terms
