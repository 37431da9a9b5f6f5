"""NV-center / nuclear spin systems and their Pauli decomposition.

Units throughout the package: couplings and frequencies in rad/us, times in
us, magnetic field in tesla, positions in nm.

Qubit ordering: NV centers occupy indices ``0..M-1`` and nuclei
``M..M+N-1``. Matrices use the big-endian convention, so qubit 0 is the most
significant bit of a basis index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import constants

# Carbon-13 gyromagnetic ratio, 2*pi x 10.7 MHz/T expressed in rad/(us T).
GAMMA_C = 2.0 * np.pi * 10.7
# Electron gyromagnetic ratio in rad/(us T).
GAMMA_E = constants.physical_constants["electron gyromag. ratio"][0] * 1e-6

# Conversion of (SI rad/s * m^3) into (rad/us * nm^3).
_SI_TO_US_NM3 = 1e-6 * 1e27


def dipolar_prefactor(gamma_a: float, gamma_b: float) -> float:
    """Return the prefactor C in A = C / (2 r^3) [z - 3 (z.r) r].

    The default uses C = mu0 hbar gamma_a gamma_b / (2 pi) so that C/2 equals
    the SI dipolar constant mu0 hbar gamma_a gamma_b / (4 pi).

    Args:
        gamma_a: Gyromagnetic ratio of the first spin in rad/(us T).
        gamma_b: Gyromagnetic ratio of the second spin in rad/(us T).

    Returns:
        Prefactor in rad/us * nm^3.
    """
    ga = gamma_a * 1e6
    gb = gamma_b * 1e6
    return constants.mu_0 * constants.hbar * ga * gb / (2.0 * np.pi) * _SI_TO_US_NM3


PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SpinSystem:
    """M NV centers coupled to N nuclear spins.

    Attributes:
        delta: NV detunings, shape (M,).
        A: Hyperfine vectors, shape (M, N, 3).
        g: Internuclear couplings, shape (N, N), strictly upper triangular.
        h: Inter-NV couplings, shape (M, M), strictly upper triangular.
        Bz: Field along z in tesla.
        gamma_c: Nuclear gyromagnetic ratio in rad/(us T).
        zeeman: Optional per-nucleus Zeeman vectors gamma_c * B, shape (N, 3).
            Used by frames in which the field is not along z (for example
            after a rotational frame change). Defaults to (0, 0, gamma_c Bz).
    """

    delta: np.ndarray
    A: np.ndarray
    g: np.ndarray | None = None
    h: np.ndarray | None = None
    Bz: float = 0.0
    gamma_c: float = GAMMA_C
    zeeman: np.ndarray | None = field(default=None)

    def __post_init__(self):
        delta = np.atleast_1d(np.asarray(self.delta, dtype=float))
        A = np.asarray(self.A, dtype=float)
        M = delta.shape[0]
        if A.ndim != 3 or A.shape[0] != M or A.shape[2] != 3:
            raise ValueError(f"A must have shape (M, N, 3) with M={M}, got {A.shape}")
        N = A.shape[1]
        g = np.zeros((N, N)) if self.g is None else np.asarray(self.g, dtype=float)
        h = np.zeros((M, M)) if self.h is None else np.asarray(self.h, dtype=float)
        if g.shape != (N, N):
            raise ValueError(f"g must have shape ({N}, {N}), got {g.shape}")
        if h.shape != (M, M):
            raise ValueError(f"h must have shape ({M}, {M}), got {h.shape}")
        g = _upper(g, "g")
        h = _upper(h, "h")
        zeeman = self.zeeman
        if zeeman is not None:
            zeeman = np.asarray(zeeman, dtype=float)
            if zeeman.shape != (N, 3):
                raise ValueError(f"zeeman must have shape ({N}, 3), got {zeeman.shape}")
            zeeman = _freeze(zeeman)
        for name, arr in (("delta", delta), ("A", A), ("g", g), ("h", h)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} contains non-finite values")
        if not np.isfinite(self.Bz) or not np.isfinite(self.gamma_c):
            raise ValueError("Bz and gamma_c must be finite")
        object.__setattr__(self, "delta", _freeze(delta))
        object.__setattr__(self, "A", _freeze(A))
        object.__setattr__(self, "g", _freeze(g))
        object.__setattr__(self, "h", _freeze(h))
        object.__setattr__(self, "zeeman", zeeman)
        object.__setattr__(self, "Bz", float(self.Bz))
        object.__setattr__(self, "gamma_c", float(self.gamma_c))

    @property
    def M(self) -> int:
        return int(self.delta.shape[0])

    @property
    def N(self) -> int:
        return int(self.A.shape[1])

    @property
    def n_qubits(self) -> int:
        return self.M + self.N

    def zeeman_vectors(self) -> np.ndarray:
        """Per-nucleus Zeeman vectors gamma_c * B, shape (N, 3)."""
        if self.zeeman is not None:
            return np.array(self.zeeman)
        z = np.zeros((self.N, 3))
        z[:, 2] = self.gamma_c * self.Bz
        return z

    def omega_c(self) -> np.ndarray:
        """Modified Larmor vectors gamma_c B - (1/2) sum_j A_jk, shape (N, 3)."""
        return self.zeeman_vectors() - 0.5 * self.A.sum(axis=0)

    def larmor(self) -> np.ndarray:
        """Magnitudes |omega_c| per nucleus."""
        return np.linalg.norm(self.omega_c(), axis=1)

    def a_perp(self, j: int = 0) -> np.ndarray:
        """Hyperfine component perpendicular to omega_c for NV ``j``, per nucleus."""
        w = self.omega_c()
        out = np.empty(self.N)
        for k in range(self.N):
            a = self.A[j, k]
            n = np.linalg.norm(w[k])
            if n == 0:
                out[k] = np.linalg.norm(a)
                continue
            u = w[k] / n
            out[k] = np.linalg.norm(a - (a @ u) * u)
        return out

    @property
    def interacting(self) -> bool:
        return bool(np.any(self.g != 0))

    def replace(self, **changes) -> "SpinSystem":
        fields = dict(
            delta=self.delta, A=self.A, g=self.g, h=self.h, Bz=self.Bz,
            gamma_c=self.gamma_c, zeeman=self.zeeman,
        )
        fields.update(changes)
        return SpinSystem(**fields)

    def to_dict(self) -> dict:
        d = {
            "Bz": self.Bz,
            "gamma_c": self.gamma_c,
            "couplings": {
                "delta": self.delta.tolist(),
                "A": self.A.tolist(),
                "g": self.g.tolist(),
                "h": self.h.tolist(),
            },
        }
        if self.zeeman is not None:
            d["zeeman"] = self.zeeman.tolist()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpinSystem":
        """Build from the JSON schema documented in the README.

        Exactly one of ``couplings`` or ``geometry`` must be present.
        """
        has_c = "couplings" in d
        has_g = "geometry" in d
        if has_c == has_g:
            raise ValueError("spin system needs exactly one of 'couplings' or 'geometry'")
        gamma_c = float(d.get("gamma_c", GAMMA_C))
        Bz = float(d.get("Bz", 0.0))
        if has_g:
            geo = d["geometry"]
            sys = couplings_from_geometry(
                geo["nv_positions"], geo["nucleus_positions"], Bz,
                gamma_c=gamma_c, prefactor=geo.get("prefactor"),
            )
            if "delta" in geo:
                sys = sys.replace(delta=geo["delta"])
            return sys
        c = d["couplings"]
        A = np.asarray(c["A"], dtype=float)
        if A.ndim == 2:
            A = A[None]
        M, N = A.shape[0], A.shape[1]
        delta = c.get("delta", [0.0] * M)
        g = c.get("g") or np.zeros((N, N))
        h = c.get("h") or np.zeros((M, M))
        return cls(delta=delta, A=A, g=g, h=h, Bz=Bz, gamma_c=gamma_c, zeeman=d.get("zeeman"))

    def to_json(self, path: str | Path | None = None) -> str:
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_json(cls, text_or_path: str | Path) -> "SpinSystem":
        text = str(text_or_path)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
        return cls.from_dict(json.loads(text))


def _upper(m: np.ndarray, name: str) -> np.ndarray:
    """Keep the strictly upper triangle; accept symmetric input."""
    if np.any(np.diag(m) != 0):
        raise ValueError(f"{name} must have a zero diagonal")
    lower = np.tril(m, -1)
    upper = np.triu(m, 1)
    if np.any(lower != 0):
        if np.any(upper != 0) and not np.allclose(lower.T, upper):
            raise ValueError(f"{name} lower and upper triangles disagree")
        upper = np.where(upper != 0, upper, lower.T)
    return upper


def _dipolar_vector(r: np.ndarray, prefactor: float) -> np.ndarray:
    d = np.linalg.norm(r)
    if d == 0:
        raise ValueError("coincident positions")
    rhat = r / d
    zhat = np.array([0.0, 0.0, 1.0])
    return prefactor / (2.0 * d**3) * (zhat - 3.0 * rhat[2] * rhat)


def _dipolar_scalar(r: np.ndarray, prefactor: float) -> float:
    d = np.linalg.norm(r)
    if d == 0:
        raise ValueError("coincident positions")
    return prefactor / (2.0 * d**3) * (1.0 - 3.0 * (r[2] / d) ** 2)


def couplings_from_geometry(
    nv_positions: Sequence[Sequence[float]],
    nucleus_positions: Sequence[Sequence[float]],
    Bz: float,
    gamma_c: float = GAMMA_C,
    prefactor: float | None = None,
    nn_prefactor: float | None = None,
    nv_prefactor: float | None = None,
) -> SpinSystem:
    """Secular dipolar couplings for NVs aligned with the field along z.

    Args:
        nv_positions: NV positions in nm, shape (M, 3).
        nucleus_positions: Nuclear positions in nm, shape (N, 3).
        Bz: Field in tesla.
        gamma_c: Nuclear gyromagnetic ratio in rad/(us T).
        prefactor: NV-nucleus prefactor C (rad/us nm^3). Defaults to
            ``dipolar_prefactor(GAMMA_E, gamma_c)``.
        nn_prefactor: Nucleus-nucleus prefactor, default uses gamma_c twice.
        nv_prefactor: NV-NV prefactor, default uses GAMMA_E twice.

    Returns:
        SpinSystem with zero detunings.
    """
    nv = np.atleast_2d(np.asarray(nv_positions, dtype=float))
    nuc = np.atleast_2d(np.asarray(nucleus_positions, dtype=float))
    if nuc.size == 0:
        nuc = nuc.reshape(0, 3)
    C = dipolar_prefactor(GAMMA_E, gamma_c) if prefactor is None else prefactor
    Cnn = dipolar_prefactor(gamma_c, gamma_c) if nn_prefactor is None else nn_prefactor
    Cee = dipolar_prefactor(GAMMA_E, GAMMA_E) if nv_prefactor is None else nv_prefactor
    M, N = nv.shape[0], nuc.shape[0]
    A = np.zeros((M, N, 3))
    for j in range(M):
        for k in range(N):
            A[j, k] = _dipolar_vector(nuc[k] - nv[j], C)
    g = np.zeros((N, N))
    for k in range(N):
        for k2 in range(k + 1, N):
            g[k, k2] = _dipolar_scalar(nuc[k2] - nuc[k], Cnn)
    h = np.zeros((M, M))
    for j in range(M):
        for j2 in range(j + 1, M):
            h[j, j2] = _dipolar_scalar(nv[j2] - nv[j], Cee)
    return SpinSystem(delta=np.zeros(M), A=A, g=g, h=h, Bz=Bz, gamma_c=gamma_c)


@dataclass(frozen=True)
class PauliTerm:
    """A weighted Pauli string such as ``coeff * "XIZ"``."""

    coeff: float
    string: str

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.string) if c != "I")

    @property
    def weight(self) -> int:
        return len(self.support)

    def matrix(self) -> np.ndarray:
        return self.coeff * pauli_string_matrix(self.string)


@dataclass
class PauliHamiltonian:
    """Hamiltonian split into single-qubit and two-qubit Pauli terms."""

    n_qubits: int
    sqg_terms: list[PauliTerm]
    tqg_terms: list[PauliTerm]

    @property
    def terms(self) -> list[PauliTerm]:
        return list(self.sqg_terms) + list(self.tqg_terms)

    def matrix(self) -> np.ndarray:
        dim = 2**self.n_qubits
        H = np.zeros((dim, dim), dtype=complex)
        for t in self.terms:
            H += t.matrix()
        return H


def pauli_string_matrix(s: str) -> np.ndarray:
    return reduce(np.kron, [PAULI[c] for c in s])


def _string(n: int, letters: dict[int, str]) -> str:
    return "".join(letters.get(i, "I") for i in range(n))


def pauli_decompose(sys: SpinSystem) -> PauliHamiltonian:
    """Split the system Hamiltonian into weighted Pauli strings.

    Single-qubit terms come first per nucleus (X, Y, Z), then per NV (Z).
    Two-qubit terms follow in the order NV-nucleus (XZ, YZ, ZZ), nucleus pairs
    (ZZ, XX, YY) and NV pairs (ZZ, XX, YY). Exactly-zero coefficients are
    dropped.
    """
    M, N = sys.M, sys.N
    n = M + N
    sqg: list[PauliTerm] = []
    tqg: list[PauliTerm] = []

    def add(lst, coeff, letters):
        if coeff != 0.0:
            lst.append(PauliTerm(float(coeff), _string(n, letters)))

    zee = sys.zeeman_vectors()
    Asum = sys.A.sum(axis=0)
    for k in range(N):
        q = M + k
        # -omega_c . I with I = sigma/2
        for axis, letter in enumerate("XYZ"):
            add(sqg, (Asum[k, axis] / 2.0 - zee[k, axis]) / 2.0, {q: letter})
    for j in range(M):
        add(sqg, sys.delta[j], {j: "Z"})

    for j in range(M):
        for k in range(N):
            q = M + k
            for axis, letter in enumerate("XYZ"):
                add(tqg, sys.A[j, k, axis] / 4.0, {j: "Z", q: letter})
    for k in range(N):
        for k2 in range(k + 1, N):
            g = sys.g[k, k2]
            a, b = M + k, M + k2
            add(tqg, g / 4.0, {a: "Z", b: "Z"})
            add(tqg, -g / 8.0, {a: "X", b: "X"})
            add(tqg, -g / 8.0, {a: "Y", b: "Y"})
    for j in range(M):
        for j2 in range(j + 1, M):
            h = sys.h[j, j2]
            add(tqg, h, {j: "Z", j2: "Z"})
            add(tqg, -h, {j: "X", j2: "X"})
            add(tqg, -h, {j: "Y", j2: "Y"})
    return PauliHamiltonian(n, sqg, tqg)


def lambda_total(H: PauliHamiltonian | Iterable[PauliTerm]) -> float:
    """Sum of absolute term weights."""
    terms = H.terms if isinstance(H, PauliHamiltonian) else list(H)
    return float(sum(abs(t.coeff) for t in terms))


def _embed(ops: dict[int, np.ndarray], n: int) -> np.ndarray:
    return reduce(np.kron, [ops.get(i, PAULI["I"]) for i in range(n)])


def drive_operator(phi: float) -> np.ndarray:
    """sigma^phi = cos(phi) X - sin(phi) Y."""
    return np.cos(phi) * PAULI["X"] - np.sin(phi) * PAULI["Y"]


def hamiltonian_matrix(sys: SpinSystem, rabi: float = 0.0, phase: float = 0.0) -> np.ndarray:
    """Dense Hamiltonian built directly from spin and ladder operators.

    This construction is independent of ``pauli_decompose`` and serves as its
    reference. A continuous drive (rabi/2) sigma^phase is added on every NV.
    """
    M, N = sys.M, sys.N
    n = M + N
    if n > 12:
        raise ValueError(f"dense Hamiltonian for {n} qubits is too large")
    sx, sy, sz = PAULI["X"], PAULI["Y"], PAULI["Z"]
    Ix, Iy, Iz = sx / 2, sy / 2, sz / 2
    sp = np.array([[0, 1], [0, 0]], dtype=complex)
    sm = sp.T.copy()
    Ip, Im = sp, sm
    dim = 2**n
    H = np.zeros((dim, dim), dtype=complex)
    w = sys.omega_c()
    for j in range(M):
        H += sys.delta[j] * _embed({j: sz}, n)
        if rabi:
            H += 0.5 * rabi * _embed({j: drive_operator(phase)}, n)
    for k in range(N):
        q = M + k
        H -= _embed({q: w[k, 0] * Ix + w[k, 1] * Iy + w[k, 2] * Iz}, n)
    for j in range(M):
        for k in range(N):
            q = M + k
            a = sys.A[j, k]
            AI = a[0] * Ix + a[1] * Iy + a[2] * Iz
            H += _embed({j: sz / 2, q: AI}, n)
    for k in range(N):
        for k2 in range(k + 1, N):
            a, b = M + k, M + k2
            g = sys.g[k, k2]
            H += g * (
                _embed({a: Iz, b: Iz}, n)
                - 0.25 * (_embed({a: Ip, b: Im}, n) + _embed({a: Im, b: Ip}, n))
            )
    for j in range(M):
        for j2 in range(j + 1, M):
            h = sys.h[j, j2]
            H += h * (
                _embed({j: sz, j2: sz}, n)
                - 2.0 * (_embed({j: sp, j2: sm}, n) + _embed({j: sm, j2: sp}, n))
            )
    return H
