"""Sweep results and their CSV form."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

OBSERVABLES = ("X", "Y", "Z")
CSV_HEADER = ("omega_rad_per_us", "qubit", "observable", "expectation")


@dataclass
class Spectrum:
    """Per-point, per-qubit expectations of a frequency sweep.

    Attributes:
        omega: Sweep values in rad/us (Rabi frequency or pulse frequency),
            strictly increasing.
        values: Expectations, shape (points, qubits, 3) for X, Y, Z.
        initial: Expectations of the initial state, shape (qubits, 3).
        n_nv: Number of leading NV qubits.
        pump_sign: +1 if the protocol pumps nuclei towards |0>, -1 towards |1>.
        meta: Free-form description of the sweep.
    """

    omega: np.ndarray
    values: np.ndarray
    initial: np.ndarray | None = None
    n_nv: int = 1
    pump_sign: int = -1
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.omega.ndim != 1 or len(self.omega) < 1:
            raise ValueError("sweep grid must be a non-empty 1-d array")
        if np.any(np.diff(self.omega) <= 0):
            raise ValueError("sweep grid must be strictly increasing")
        if self.values.ndim != 3 or self.values.shape[0] != len(self.omega) or self.values.shape[2] != 3:
            raise ValueError(f"values must have shape ({len(self.omega)}, n, 3), got {self.values.shape}")
        if self.initial is None:
            self.initial = np.zeros(self.values.shape[1:])
        self.initial = np.asarray(self.initial, dtype=float)

    @property
    def n_qubits(self) -> int:
        return self.values.shape[1]

    @property
    def step(self) -> float:
        return float(np.min(np.diff(self.omega))) if len(self.omega) > 1 else 0.0

    def expectation(self, qubit: int, observable: str) -> np.ndarray:
        return self.values[:, qubit, OBSERVABLES.index(observable.upper())]

    def polarization(self, qubit: int) -> np.ndarray:
        """Polarization curve of a qubit.

        Nuclei: pump_sign * <Z>, so the pumped direction is positive. NVs:
        projection of the Bloch vector on the initial NV Bloch vector.
        """
        if qubit < self.n_nv:
            v0 = self.initial[qubit]
            norm = np.linalg.norm(v0)
            if norm == 0:
                return self.values[:, qubit, 2]
            return self.values[:, qubit, :] @ (v0 / norm)
        return self._nuclear(qubit)

    def _nuclear(self, qubit: int) -> np.ndarray:
        return float(self.pump_sign) * self.values[:, qubit, 2]

    def gain(self, qubit: int) -> np.ndarray:
        """Polarization gain: final minus initial polarization."""
        if qubit < self.n_nv:
            v0 = self.initial[qubit]
            norm = np.linalg.norm(v0)
            p0 = norm if norm else v0[2]
            return self.polarization(qubit) - p0
        p0 = float(self.pump_sign) * self.initial[qubit, 2]
        return self._nuclear(qubit) - p0

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for i, om in enumerate(self.omega):
            for q in range(self.n_qubits):
                for a, name in enumerate(OBSERVABLES):
                    w.writerow([repr(float(om)), q, name, repr(float(self.values[i, q, a]))])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def from_csv(cls, text_or_path, **kwargs) -> "Spectrum":
        text = str(text_or_path)
        if "\n" not in text:
            text = Path(text).read_text()
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise ValueError(f"spectrum CSV must start with header {','.join(CSV_HEADER)}")
        data = rows[1:]
        omegas = sorted({float(r[0]) for r in data})
        n = max(int(r[1]) for r in data) + 1 if data else 0
        idx = {w: i for i, w in enumerate(omegas)}
        vals = np.full((len(omegas), n, 3), np.nan)
        for r in data:
            vals[idx[float(r[0])], int(r[1]), OBSERVABLES.index(r[2])] = float(r[3])
        if np.isnan(vals).any():
            raise ValueError("spectrum CSV is missing records")
        return cls(np.array(omegas), vals, **kwargs)
