"""Ornstein-Uhlenbeck drive-amplitude fluctuations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class OUParams:
    """OU process parameters.

    Attributes:
        tau: Correlation time in us.
        c: Diffusion constant in 1/us.
        dt: Time between successive samples in us.
    """

    tau: float = 500.0
    c: float = 4e-7
    dt: float = 1.0

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("OU correlation time must be positive")
        if self.c < 0:
            raise ValueError("OU diffusion constant must be non-negative")
        if self.dt < 0:
            raise ValueError("OU step must be non-negative")

    @property
    def stationary_variance(self) -> float:
        return self.c * self.tau / 2.0

    def to_dict(self) -> dict:
        return {"tau": self.tau, "c": self.c, "dt": self.dt}


def ou_step(X: float, p: OUParams, rng: np.random.Generator, dt: float | None = None) -> float:
    """Exact update X(t+dt) = X e^{-dt/tau} + sqrt(c tau/2 (1 - e^{-2 dt/tau})) N."""
    dt = p.dt if dt is None else dt
    if dt == 0:
        return X
    decay = math.exp(-dt / p.tau)
    sd = math.sqrt(p.c * p.tau / 2.0 * (1.0 - decay * decay))
    return X * decay + sd * rng.standard_normal()


def ou_trajectory(n_steps: int, p: OUParams, rng: np.random.Generator, x0: float | None = None) -> np.ndarray:
    """``n_steps`` successive values; x0 defaults to a stationary draw."""
    decay = math.exp(-p.dt / p.tau)
    sd = math.sqrt(p.c * p.tau / 2.0 * (1.0 - decay * decay))
    x = math.sqrt(p.stationary_variance) * rng.standard_normal() if x0 is None else x0
    noise = rng.standard_normal(n_steps)
    out = np.empty(n_steps)
    for i in range(n_steps):
        x = x * decay + sd * noise[i]
        out[i] = x
    return out
