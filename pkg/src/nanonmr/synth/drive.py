"""Drive and Trotter-plan parameters."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from ..spinsys import SpinSystem

MODES = ("none", "continuous", "pulsed")


@dataclass(frozen=True)
class Drive:
    """NV drive.

    Attributes:
        mode: ``"continuous"`` (Hartmann-Hahn), ``"pulsed"`` (pi-pulse train)
            or ``"none"`` (free evolution).
        Omega: Rabi frequency of the continuous drive in rad/us.
        phi: Drive phase in rad.
        harmonic: Resonance harmonic n of the pulse train (odd for the
            symmetric filter function).
        pattern: Pulse axes, cycled over each sub-sequence.
        N_blocks: Repetitions of ``pattern`` per sub-sequence.
        steps_per_interval: Trotter steps per half interpulse interval.
            ``None`` derives it from the Trotter plan.
        target: Nucleus whose Larmor frequency sets the pulse spacing.
        frequency: Probed frequency in rad/us; the pulse spacing is
            tau = n pi / frequency. ``None`` uses |omega_c| of ``target``.
        amplitude_error: Static fractional pi-pulse amplitude error.
    """

    mode: str = "continuous"
    Omega: float = 0.0
    phi: float = 0.0
    harmonic: int = 1
    pattern: str = "XYXYYXYX"
    N_blocks: int = 1
    steps_per_interval: int | None = None
    target: int = 0
    frequency: float | None = None
    amplitude_error: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown drive mode {self.mode!r}")
        if self.mode == "continuous" and not self.Omega >= 0:
            raise ValueError("continuous drive needs Omega >= 0")
        if self.harmonic < 1:
            raise ValueError("harmonic must be a positive integer")
        if self.N_blocks < 1:
            raise ValueError("N_blocks must be a positive integer")
        if not self.pattern or set(self.pattern.upper()) - set("XY"):
            raise ValueError(f"pulse pattern must use X and Y only, got {self.pattern!r}")
        if self.steps_per_interval is not None and self.steps_per_interval < 1:
            raise ValueError("steps_per_interval must be >= 1")
        if self.frequency is not None and not self.frequency > 0:
            raise ValueError("pulse frequency must be positive")

    @property
    def n_pulses(self) -> int:
        """Pulses per sub-sequence."""
        return len(self.pattern) * self.N_blocks

    def tau(self, sys: SpinSystem) -> float:
        """Interpulse spacing n pi / frequency."""
        w = self.frequency
        if w is None:
            if not 0 <= self.target < sys.N:
                raise ValueError(f"target nucleus {self.target} out of range")
            w = float(sys.larmor()[self.target])
        if not w > 0:
            raise ValueError("pulsed drive needs a nonzero Larmor frequency")
        return self.harmonic * math.pi / w

    def with_sweep_value(self, value: float) -> "Drive":
        """Drive with the swept quantity set: Omega (continuous) or frequency (pulsed)."""
        if self.mode == "pulsed":
            return replace(self, frequency=float(value))
        return replace(self, Omega=float(value))

    def to_dict(self) -> dict:
        return {
            "mode": self.mode, "Omega": self.Omega, "phi": self.phi,
            "harmonic": self.harmonic, "pattern": self.pattern, "N_blocks": self.N_blocks,
            "steps_per_interval": self.steps_per_interval, "target": self.target,
            "frequency": self.frequency, "amplitude_error": self.amplitude_error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Drive":
        return cls(**d)


@dataclass(frozen=True)
class TrotterPlan:
    """Time discretization.

    Attributes:
        t_f: Evolution time per cycle in us (continuous drive).
        s: Trotter steps per cycle.
        cycles: Number of polarization cycles, each followed by an NV reset.
        order: 1 (Lie-Trotter) or 2 (Strang).
    """

    t_f: float = 30.0
    s: int = 32
    cycles: int = 1
    order: int = 1

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("s must be >= 1")
        if self.cycles < 0:
            raise ValueError("cycles must be >= 0")
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        if not self.t_f > 0:
            raise ValueError("t_f must be positive")

    @property
    def dt(self) -> float:
        return self.t_f / self.s

    def to_dict(self) -> dict:
        return {"t_f": self.t_f, "s": self.s, "cycles": self.cycles, "order": self.order}

    @classmethod
    def from_dict(cls, d: dict) -> "TrotterPlan":
        return cls(**d)
