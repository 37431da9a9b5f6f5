"""Gate-level circuit representation, scheduling and gate counting.

Two-qubit gate matrices are written in the basis |q_a q_b> where ``q_a`` is
the first entry of ``Gate.qubits``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

ONE_QUBIT = {"rxy", "rz", "x", "y", "h"}
TWO_QUBIT = {"uzz", "cz", "iswap", "swap", "cnot"}
KINDS = ONE_QUBIT | TWO_QUBIT | {"reset", "barrier"}
N_PARAMS = {"rxy": 2, "rz": 1, "uzz": 1, "cz": 1}
# Gates whose matrix is diagonal in the computational basis.
DIAGONAL = {"rz", "uzz", "cz"}

# Tags with a meaning for downstream passes.
TAG_DRIVE = "drive"  # continuous-drive rotation, rescaled by OU noise
TAG_PULSE = "pulse"  # pi-pulse of a decoupling sequence, rescaled by OU noise
TAG_PHYSICAL = "physical"  # Rz that must be executed physically
TAG_X_RND = "x_rnd"  # X applied with probability 1/2
TAG_PHASE_RND = "phase_rnd"  # Rz with a uniformly random angle
TAG_MEASURE = "measure"  # terminal measurement marker (barrier)


@dataclass(frozen=True)
class Gate:
    """A gate acting on one or two qubits.

    Attributes:
        kind: One of ``KINDS``.
        qubits: Qubit indices. Barriers may list any number (empty = all).
        params: Angles in radians. ``rxy`` takes (phi, theta), ``rz`` takes
            (theta,), ``uzz`` and ``cz`` take (phi,).
        tag: Optional annotation, see the ``TAG_*`` constants.
    """

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    tag: str | None = None

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qubits = tuple(int(q) for q in self.qubits)
        params = tuple(float(p) for p in self.params)
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit in {kind} {qubits}")
        if any(q < 0 for q in qubits):
            raise ValueError("negative qubit index")
        if kind in ONE_QUBIT or kind == "reset":
            if len(qubits) != 1:
                raise ValueError(f"{kind} acts on exactly one qubit")
        elif kind in TWO_QUBIT:
            if len(qubits) != 2:
                raise ValueError(f"{kind} acts on exactly two qubits")
        if len(params) != N_PARAMS.get(kind, 0):
            raise ValueError(f"{kind} takes {N_PARAMS.get(kind, 0)} parameters, got {len(params)}")
        if not all(math.isfinite(p) for p in params):
            raise ValueError("non-finite gate angle")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "qubits", qubits)
        object.__setattr__(self, "params", params)

    @property
    def is_tqg(self) -> bool:
        return self.kind in TWO_QUBIT

    @property
    def is_physical_sqg(self) -> bool:
        if self.kind == "rz":
            return self.tag == TAG_PHYSICAL
        return self.kind in ONE_QUBIT

    @property
    def is_diagonal(self) -> bool:
        return self.kind in DIAGONAL

    def on(self, *qubits: int) -> "Gate":
        """Same gate acting on different qubits."""
        return replace(self, qubits=tuple(qubits))

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "qubits": list(self.qubits), "params": list(self.params)}
        if self.tag is not None:
            d["tag"] = self.tag
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "Gate":
        return cls(d["kind"], tuple(d["qubits"]), tuple(d.get("params", ())), d.get("tag"))


# Convenience constructors.
def rxy(q: int, phi: float, theta: float, tag: str | None = None) -> Gate:
    return Gate("rxy", (q,), (phi, theta), tag)


def rx(q: int, theta: float, tag: str | None = None) -> Gate:
    return Gate("rxy", (q,), (0.0, theta), tag)


def ry(q: int, theta: float, tag: str | None = None) -> Gate:
    return Gate("rxy", (q,), (math.pi / 2, theta), tag)


def rz(q: int, theta: float, tag: str | None = None) -> Gate:
    return Gate("rz", (q,), (theta,), tag)


def uzz(a: int, b: int, phi: float) -> Gate:
    return Gate("uzz", (a, b), (phi,))


def swap(a: int, b: int) -> Gate:
    return Gate("swap", (a, b))


def reset(q: int) -> Gate:
    return Gate("reset", (q,))


def barrier(*qubits: int, tag: str | None = None) -> Gate:
    return Gate("barrier", tuple(qubits), (), tag)


_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)


def rxy_matrix(phi: float, theta: float) -> np.ndarray:
    n = math.cos(phi) * _X + math.sin(phi) * _Y
    return math.cos(theta / 2) * _I2 - 1j * math.sin(theta / 2) * n


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def uzz_matrix(phi: float) -> np.ndarray:
    a, b = np.exp(-1j * phi), np.exp(1j * phi)
    return np.diag([a, b, b, a])


def cz_matrix(phi: float) -> np.ndarray:
    return np.diag([1, 1, 1, np.exp(-1j * phi)]).astype(complex)


ISWAP = np.array([[1, 0, 0, 0], [0, 0, -1j, 0], [0, -1j, 0, 0], [0, 0, 0, 1]], dtype=complex)
SWAP = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def gate_matrix(g: Gate) -> np.ndarray:
    """Unitary of a gate.

    Matrices follow the defining expressions exactly, for example
    ``rxy(0, pi)`` is ``-iX``. Reset and barrier have no unitary.
    """
    k = g.kind
    if k == "rxy":
        return rxy_matrix(*g.params)
    if k == "rz":
        return rz_matrix(g.params[0])
    if k == "x":
        return _X.copy()
    if k == "y":
        return _Y.copy()
    if k == "h":
        return HADAMARD.copy()
    if k == "uzz":
        return uzz_matrix(g.params[0])
    if k == "cz":
        return cz_matrix(g.params[0])
    if k == "iswap":
        return ISWAP.copy()
    if k == "swap":
        return SWAP.copy()
    if k == "cnot":
        return CNOT.copy()
    raise ValueError(f"{k} has no unitary matrix")


@dataclass(frozen=True)
class Moment:
    """Indices of gates executed in parallel and the moment duration (us)."""

    gates: tuple[int, ...]
    duration: float


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list on ``n_qubits`` qubits.

    Attributes:
        n_qubits: Register size.
        gates: Gates in execution order.
        moments: Optional schedule from ``schedule_moments``.
        initial_layout: For routed circuits, physical position of each
            logical qubit at the start.
        final_layout: Physical position of each logical qubit at the end.
    """

    n_qubits: int
    gates: tuple[Gate, ...] = ()
    moments: tuple[Moment, ...] | None = None
    initial_layout: tuple[int, ...] | None = None
    final_layout: tuple[int, ...] | None = None

    def __post_init__(self):
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        for g in gates:
            if any(q >= self.n_qubits for q in g.qubits):
                raise ValueError(f"gate {g.kind}{g.qubits} outside {self.n_qubits}-qubit register")
        for name in ("initial_layout", "final_layout"):
            lay = getattr(self, name)
            if lay is not None:
                lay = tuple(int(x) for x in lay)
                if len(set(lay)) != len(lay) or any(not 0 <= x < self.n_qubits for x in lay):
                    raise ValueError(f"invalid {name} {lay}")
                object.__setattr__(self, name, lay)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise ValueError("register size mismatch")
        return Circuit(self.n_qubits, self.gates + other.gates)

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.n_qubits, tuple(gates), None, self.initial_layout, self.final_layout)

    def to_dict(self) -> dict:
        d = {"n_qubits": self.n_qubits, "gates": [g.to_dict() for g in self.gates]}
        if self.initial_layout is not None:
            d["initial_layout"] = list(self.initial_layout)
        if self.final_layout is not None:
            d["final_layout"] = list(self.final_layout)
        return d

    def to_json(self, path: str | Path | None = None) -> str:
        text = _dump_circuit(self.to_dict())
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_dict(cls, d: Mapping) -> "Circuit":
        return cls(
            int(d["n_qubits"]),
            tuple(Gate.from_dict(g) for g in d["gates"]),
            None,
            d.get("initial_layout"),
            d.get("final_layout"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Circuit":
        return cls.from_dict(json.loads(text))


def _fmt(x: float) -> str:
    s = format(x, ".17g")
    if s in ("inf", "-inf", "nan"):
        raise ValueError("non-finite value in circuit")
    return s


def _dump_circuit(d: dict) -> str:
    lines = ["{", f'  "n_qubits": {d["n_qubits"]},', '  "gates": [']
    rows = []
    for g in d["gates"]:
        parts = [
            f'"kind": {json.dumps(g["kind"])}',
            f'"qubits": [{", ".join(str(q) for q in g["qubits"])}]',
            f'"params": [{", ".join(_fmt(p) for p in g["params"])}]',
        ]
        if "tag" in g:
            parts.append(f'"tag": {json.dumps(g["tag"])}')
        rows.append("    {" + ", ".join(parts) + "}")
    lines.append(",\n".join(rows))
    tail = "  ]"
    for key in ("initial_layout", "final_layout"):
        if key in d:
            tail += f',\n  "{key}": [{", ".join(str(x) for x in d[key])}]'
    lines.append(tail)
    lines.append("}")
    return "\n".join(line for line in lines if line) + "\n"


def gate_duration(g: Gate, durations: Mapping[str, float]) -> float:
    """Duration of one gate; virtual Rz and barriers take no time."""
    if g.kind == "barrier":
        return 0.0
    if g.kind == "rz" and g.tag != TAG_PHYSICAL:
        return 0.0
    if g.kind == "reset":
        return float(durations.get("reset", durations["sqg"]))
    if g.kind == "swap":
        return 3.0 * float(durations["tqg"])
    if g.is_tqg:
        return float(durations["tqg"])
    return float(durations["sqg"])


def schedule_moments(c: Circuit, durations: Mapping[str, float]) -> Circuit:
    """ASAP schedule into moments.

    Each gate goes into the first moment after the last moment used by any of
    its qubits. A barrier aligns its qubits (all qubits if none are listed)
    without occupying a moment.

    Args:
        c: Circuit to schedule.
        durations: Mapping with keys ``sqg`` and ``tqg`` (and optionally
            ``reset``) in us.

    Returns:
        A copy of ``c`` with ``moments`` filled in.
    """
    for key in ("sqg", "tqg"):
        if not durations[key] > 0:
            raise ValueError("gate durations must be positive")
    level = [0] * c.n_qubits
    slots: list[list[int]] = []
    for i, g in enumerate(c.gates):
        qs = g.qubits if g.qubits else tuple(range(c.n_qubits))
        start = max(level[q] for q in qs) if qs else 0
        if g.kind == "barrier":
            for q in qs:
                level[q] = start
            continue
        while len(slots) <= start:
            slots.append([])
        slots[start].append(i)
        for q in qs:
            level[q] = start + 1
    moments = tuple(
        Moment(tuple(s), max((gate_duration(c.gates[i], durations) for i in s), default=0.0))
        for s in slots
    )
    return replace(c, moments=moments)


@dataclass(frozen=True)
class GateCounts:
    N_TQG: int
    N_SQG: int
    N_SWAP: int
    tqg_depth: int

    def as_dict(self) -> dict:
        return {"N_TQG": self.N_TQG, "N_SQG": self.N_SQG, "N_SWAP": self.N_SWAP, "depth": self.tqg_depth}


def count_gates(c: Circuit) -> GateCounts:
    """Count gates.

    A SWAP counts as three two-qubit gates. Only physical single-qubit gates
    are counted, so virtual Rz gates are excluded. The TQG depth is the
    number of layers of an ASAP schedule of the two-qubit gates alone.
    """
    n_tqg = n_sqg = n_swap = 0
    level = [0] * c.n_qubits
    depth = 0
    for g in c.gates:
        if g.kind == "swap":
            n_swap += 1
            n_tqg += 3
            reps = 3
        elif g.is_tqg:
            n_tqg += 1
            reps = 1
        else:
            if g.is_physical_sqg:
                n_sqg += 1
            continue
        a, b = g.qubits
        top = max(level[a], level[b]) + reps
        level[a] = level[b] = top
        depth = max(depth, top)
    return GateCounts(n_tqg, n_sqg, n_swap, depth)


def _apply_to_operator(U: np.ndarray, mat: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    """Left-multiply the (2,)*n + (dim,) tensor ``U`` by a gate on ``qubits``."""
    k = len(qubits)
    m = mat.reshape((2,) * (2 * k))
    out = np.tensordot(m, U, axes=(list(range(k, 2 * k)), list(qubits)))
    return np.moveaxis(out, list(range(k)), list(qubits))


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense unitary of a circuit without resets or stochastic gates.

    Barriers are ignored. Gates tagged ``x_rnd`` or ``phase_rnd`` are treated
    as their deterministic matrices.
    """
    n = c.n_qubits
    if n > 12:
        raise ValueError(f"dense unitary for {n} qubits is too large")
    dim = 2**n
    U = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        if g.kind == "barrier":
            continue
        if g.kind == "reset":
            raise ValueError("circuit with reset has no unitary")
        U = _apply_to_operator(U, gate_matrix(g), g.qubits, n)
    return U.reshape(dim, dim)


def permutation_unitary(layout: Sequence[int], n: int) -> np.ndarray:
    """Unitary that moves logical qubit ``i`` to physical position ``layout[i]``.

    The register may be larger than the layout; extra physical qubits hold
    the remaining positions in increasing order.
    """
    layout = list(layout)
    rest = [p for p in range(n) if p not in layout]
    full = layout + rest
    dim = 2**n
    P = np.zeros((dim, dim))
    for x in range(dim):
        bits = [(x >> (n - 1 - i)) & 1 for i in range(n)]
        y = 0
        for i, b in enumerate(bits):
            if b:
                y |= 1 << (n - 1 - full[i])
        P[y, x] = 1.0
    return P


def equal_up_to_phase(U: np.ndarray, V: np.ndarray, atol: float = 1e-10) -> bool:
    return phase_distance(U, V) <= atol


def phase_distance(U: np.ndarray, V: np.ndarray) -> float:
    """Spectral-norm distance after removing the best global phase."""
    ov = np.vdot(V, U)
    ph = ov / abs(ov) if abs(ov) > 1e-300 else 1.0
    return float(np.linalg.norm(U - ph * V, 2))


def inverse_gate(g: Gate) -> list[Gate]:
    """Gates implementing the inverse of ``g`` (up to global phase)."""
    k = g.kind
    if k == "rxy":
        return [Gate("rxy", g.qubits, (g.params[0], -g.params[1]), g.tag)]
    if k == "rz":
        return [Gate("rz", g.qubits, (-g.params[0],), g.tag)]
    if k in ("uzz", "cz"):
        return [Gate(k, g.qubits, (-g.params[0],), g.tag)]
    if k in ("x", "y", "h", "swap", "cnot"):
        return [g]
    if k == "iswap":
        a, b = g.qubits
        return [g, rz(a, math.pi), rz(b, math.pi)]
    raise ValueError(f"no inverse for {k}")
