"""Gaussian peak fits and spectrum quality metrics."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares

FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))


class FitError(ValueError):
    """Raised when a peak cannot be fitted."""


@dataclass(frozen=True)
class PeakFit:
    """Gaussian b + h exp(-(w - omega0)^2 / (2 sigma^2)) and its RMS residual."""

    h: float
    omega0: float
    sigma: float
    b: float
    residual: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("peak width must be positive")

    def __call__(self, w):
        w = np.asarray(w, dtype=float)
        return gaussian(w, self.h, self.omega0, self.sigma, self.b)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "PeakFit":
        return cls(**{k: float(d[k]) for k in ("h", "omega0", "sigma", "b", "residual")})


def gaussian(w, h, omega0, sigma, b):
    return b + h * np.exp(-((w - omega0) ** 2) / (2.0 * sigma**2))


def _initial_guess(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float, float]:
    n_edge = max(1, len(x) // 5)
    b = float(np.median(np.concatenate([y[:n_edge], y[-n_edge:]])))
    i = int(np.argmax(np.abs(y - b)))
    h = float(y[i] - b)
    # Walk outwards to the half-maximum crossings.
    half = b + h / 2
    above = (y - half) * np.sign(h) >= 0
    lo = i
    while lo > 0 and above[lo - 1]:
        lo -= 1
    hi = i
    while hi < len(x) - 1 and above[hi + 1]:
        hi += 1
    step = float(np.min(np.diff(x)))
    width = max(float(x[hi] - x[lo]), step)
    return h, float(x[i]), width / FWHM_PER_SIGMA, b


def gaussian_fit(x: Sequence[float], y: Sequence[float], xtol: float = 1e-8, max_iter: int = 200) -> PeakFit:
    """Least-squares Gaussian fit of one peak.

    Args:
        x: Increasing sweep values (at least 5).
        y: Data at ``x``.
        xtol: Relative parameter-change tolerance.
        max_iter: Maximum number of function evaluations.

    Returns:
        The fitted peak.

    Raises:
        FitError: Too few points, flat data, or no convergence.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise FitError("x and y must be 1-d arrays of equal length")
    if len(x) < 5:
        raise FitError(f"need at least 5 points to fit a peak, got {len(x)}")
    if np.any(np.diff(x) <= 0):
        raise FitError("sweep values must be strictly increasing")
    scale = max(1.0, float(np.max(np.abs(y))))
    if float(np.ptp(y)) <= 1e-12 * scale:
        raise FitError("flat data: no peak to fit")
    p0 = _initial_guess(x, y)
    span = float(x[-1] - x[0])
    res = least_squares(
        lambda p: gaussian(x, *p) - y,
        p0,
        bounds=([-np.inf, x[0] - span, 1e-6 * span, -np.inf], [np.inf, x[-1] + span, 10 * span, np.inf]),
        x_scale=[max(abs(p0[0]), 1e-12), span, max(p0[2], 1e-12), max(abs(p0[0]), 1e-12)],
        xtol=xtol,
        ftol=1e-12,
        gtol=1e-12,
        max_nfev=max_iter,
    )
    if res.status <= 0:
        raise FitError(f"Gaussian fit did not converge after {res.nfev} evaluations: {res.message}")
    h, w0, sigma, b = (float(v) for v in res.x)
    rms = float(np.sqrt(np.mean(res.fun**2)))
    return PeakFit(h, w0, abs(sigma), b, rms)


def xi_metric(fits: Sequence[PeakFit]) -> float:
    """Mean height-to-width ratio h / sigma over the fitted peaks."""
    if not fits:
        raise ValueError("xi needs at least one fit")
    vals = []
    for f in fits:
        if f.sigma == 0:
            raise ValueError("peak with zero width")
        vals.append(f.h / f.sigma)
    return float(np.mean(vals))


def delta_peak_metric(noisy: Sequence[PeakFit], ideal: Sequence[PeakFit]) -> float:
    """Mean |omega_noisy - omega_ideal| / |omega_ideal| over matched peaks."""
    if len(noisy) != len(ideal):
        raise ValueError(f"{len(noisy)} noisy fits against {len(ideal)} ideal fits")
    if not noisy:
        raise ValueError("delta_peak needs at least one fit")
    errs = []
    for a, b in zip(noisy, ideal):
        if b.omega0 == 0:
            raise ValueError("ideal peak center is zero")
        errs.append(abs((a.omega0 - b.omega0) / b.omega0))
    return float(np.mean(errs))
