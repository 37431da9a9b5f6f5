"""Noise model parameters and Kraus channels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np
from scipy import integrate

_I = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.diag([1.0, -1.0]).astype(complex)
PAULIS_1Q = (_I, _X, _Y, _Z)


@dataclass(frozen=True)
class KrausSet:
    """Kraus operators of a CPTP map."""

    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.ops)
        if not ops:
            raise ValueError("empty Kraus set")
        shape = ops[0].shape
        if len(shape) != 2 or shape[0] != shape[1] or any(k.shape != shape for k in ops):
            raise ValueError("Kraus operators must be square matrices of equal size")
        object.__setattr__(self, "ops", ops)

    @property
    def dim(self) -> int:
        return self.ops[0].shape[0]

    @property
    def n_qubits(self) -> int:
        return int(round(math.log2(self.dim)))

    def completeness_error(self) -> float:
        """max |sum K^dagger K - I|."""
        s = sum(k.conj().T @ k for k in self.ops)
        return float(np.max(np.abs(s - np.eye(self.dim))))

    def is_cptp(self, atol: float = 1e-12) -> bool:
        return self.completeness_error() <= atol

    def apply(self, rho: np.ndarray) -> np.ndarray:
        return sum(k @ rho @ k.conj().T for k in self.ops)

    def superoperator(self) -> np.ndarray:
        """Tensor S[a, b, c, d] with rho'[a, b] = S[a, b, c, d] rho[c, d], per-qubit axes."""
        k = self.n_qubits
        S = sum(np.einsum("ac,bd->abcd", K, K.conj()) for K in self.ops)
        d = 2**k
        S = S.reshape(d, d, d, d)
        return S.reshape((2,) * (4 * k))


def _check_p(p: float):
    if not (0.0 <= p <= 1.0) or not math.isfinite(p):
        raise ValueError(f"probability {p} outside [0, 1]")


def amplitude_damping(p: float) -> KrausSet:
    _check_p(p)
    return KrausSet((
        np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=complex),
        np.array([[0, math.sqrt(p)], [0, 0]], dtype=complex),
    ))


def phase_damping(p: float) -> KrausSet:
    _check_p(p)
    return KrausSet((
        np.array([[1, 0], [0, math.sqrt(1 - p)]], dtype=complex),
        np.array([[0, 0], [0, math.sqrt(p)]], dtype=complex),
    ))


def depolarizing_1q(p: float) -> KrausSet:
    _check_p(p)
    w = math.sqrt(p / 3)
    return KrausSet((math.sqrt(1 - p) * _I, w * _X, w * _Y, w * _Z))


def depolarizing_2q(p: float) -> KrausSet:
    _check_p(p)
    w = math.sqrt(p / 15)
    ops = []
    for a, b in product(range(4), repeat=2):
        scale = math.sqrt(1 - p) if a == b == 0 else w
        ops.append(scale * np.kron(PAULIS_1Q[a], PAULIS_1Q[b]))
    return KrausSet(tuple(ops))


def reset_channel() -> KrausSet:
    return KrausSet((
        np.array([[1, 0], [0, 0]], dtype=complex),
        np.array([[0, 1], [0, 0]], dtype=complex),
    ))


def bit_flip_mixture() -> KrausSet:
    """X applied with probability 1/2."""
    return KrausSet((_I / math.sqrt(2), _X / math.sqrt(2)))


def full_dephasing() -> KrausSet:
    """Average of Rz(phi) over a uniform phase."""
    return KrausSet((np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)))


@dataclass(frozen=True)
class NoiseModel:
    """Device noise.

    Attributes:
        T1: Relaxation time in us (``inf`` disables amplitude damping).
        T2: Dephasing time in us (``inf`` disables dephasing).
        eps_TQG: Depolarizing probability per two-qubit gate.
        eps_SQG: Depolarizing probability per physical single-qubit gate;
            ``None`` means eps_TQG / 10.
        tau_SQG: Single-qubit gate duration in us.
        tau_TQG: Two-qubit gate duration in us.
        tau_reset: Reset duration in us; ``None`` means tau_SQG.
        dephasing_mode: ``"markovian"`` uses p(t) = 1 - exp(-t/T2);
            ``"one_over_f"`` uses p(t) = 1 - exp(-Gamma(t)) with a 1/f
            spectrum between the cutoffs.
        beta: Inverse bath temperature in us/rad for the 1/f integral;
            ``None`` is the zero-temperature limit.
        omega_ir: Infrared cutoff of the 1/f spectrum in rad/us.
        omega_uv: Ultraviolet cutoff of the 1/f spectrum in rad/us.
        amplitude: Spectral amplitude; ``None`` calibrates Gamma(T2) = 1.
    """

    T1: float = math.inf
    T2: float = math.inf
    eps_TQG: float = 0.0
    eps_SQG: float | None = None
    tau_SQG: float = 0.060
    tau_TQG: float = 0.027
    tau_reset: float | None = None
    dephasing_mode: str = "markovian"
    beta: float | None = None
    omega_ir: float = 1e-3
    omega_uv: float = 1e3
    amplitude: float | None = None

    def __post_init__(self):
        if not (self.T1 > 0 and self.T2 > 0):
            raise ValueError("T1 and T2 must be positive")
        for e in (self.eps_TQG, self.sqg_error):
            _check_p(e)
        if not (self.tau_SQG > 0 and self.tau_TQG > 0):
            raise ValueError("gate durations must be positive")
        if self.dephasing_mode not in ("markovian", "one_over_f"):
            raise ValueError(f"unknown dephasing mode {self.dephasing_mode!r}")
        if self.dephasing_mode == "one_over_f" and not (0 < self.omega_ir < self.omega_uv):
            raise ValueError("1/f dephasing needs 0 < omega_ir < omega_uv")

    @property
    def sqg_error(self) -> float:
        return self.eps_TQG / 10.0 if self.eps_SQG is None else self.eps_SQG

    @property
    def durations(self) -> dict[str, float]:
        return {
            "sqg": self.tau_SQG,
            "tqg": self.tau_TQG,
            "reset": self.tau_SQG if self.tau_reset is None else self.tau_reset,
        }

    @property
    def is_ideal(self) -> bool:
        return (
            math.isinf(self.T1) and math.isinf(self.T2)
            and self.eps_TQG == 0.0 and self.sqg_error == 0.0
        )

    def amp_damp_probability(self, t: float) -> float:
        if t < 0:
            raise ValueError("duration must be non-negative")
        return 0.0 if math.isinf(self.T1) else -math.expm1(-t / self.T1)

    def dephasing_probability(self, t: float) -> float:
        if t < 0:
            raise ValueError("duration must be non-negative")
        if math.isinf(self.T2) or t == 0:
            return 0.0
        if self.dephasing_mode == "markovian":
            return -math.expm1(-t / self.T2)
        return -math.expm1(-_gamma_one_over_f(t, self))

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, d: dict) -> "NoiseModel":
        d = dict(d)
        for k in ("T1", "T2"):
            if d.get(k) is None:
                d[k] = math.inf
        return cls(**d)


def _gamma_integral(t: float, omega_ir: float, omega_uv: float, beta: float | None) -> float:
    """t^2/2 int dw (1/w) coth(beta w / 2) sinc^2(w t / 2) over the cutoff band."""

    def f(w):
        x = w * t / 2
        sinc = math.sin(x) / x if x != 0 else 1.0
        coth = 1.0 if beta is None else 1.0 / math.tanh(beta * w / 2)
        return coth * sinc * sinc / w

    def tail(w):
        coth = 1.0 if beta is None else 1.0 / math.tanh(beta * w / 2)
        return coth * 2.0 / (w * t) ** 2 / w

    # Integrate in log w, since the integrand spans many decades. Above
    # w t / 2 = 100 the oscillating sin^2 is replaced by its mean 1/2.
    w_c = min(omega_uv, max(omega_ir, 200.0 / t))
    val, _ = integrate.quad(lambda u: f(math.exp(u)) * math.exp(u),
                            math.log(omega_ir), math.log(w_c), limit=400)
    if w_c < omega_uv:
        val += integrate.quad(lambda u: tail(math.exp(u)) * math.exp(u),
                              math.log(w_c), math.log(omega_uv), limit=200)[0]
    return 0.5 * t * t * val


@lru_cache(maxsize=256)
def _gamma_cached(t, T2, omega_ir, omega_uv, beta, amplitude):
    if amplitude is None:
        amplitude = 1.0 / _gamma_integral(T2, omega_ir, omega_uv, beta)
    return amplitude * _gamma_integral(t, omega_ir, omega_uv, beta)


def _gamma_one_over_f(t: float, m: NoiseModel) -> float:
    return _gamma_cached(float(t), m.T2, m.omega_ir, m.omega_uv, m.beta, m.amplitude)


def noise_channel(kind: str, model: NoiseModel | None = None, t: float | None = None,
                  p: float | None = None) -> KrausSet:
    """Kraus set of a named channel.

    Args:
        kind: ``amp_damp``, ``dephase`` (need ``t`` and ``model``),
            ``depolarize_1q``, ``depolarize_2q`` (need ``p``, or take the
            model's gate errors), or ``reset``.
        model: Noise model supplying T1, T2 and gate errors.
        t: Duration in us.
        p: Explicit probability.
    """
    model = NoiseModel() if model is None else model
    if kind == "reset":
        return reset_channel()
    if kind in ("amp_damp", "dephase"):
        if p is None:
            if t is None:
                raise ValueError(f"{kind} needs a duration")
            p = model.amp_damp_probability(t) if kind == "amp_damp" else model.dephasing_probability(t)
        return amplitude_damping(p) if kind == "amp_damp" else phase_damping(p)
    if kind == "depolarize_1q":
        return depolarizing_1q(model.sqg_error if p is None else p)
    if kind == "depolarize_2q":
        return depolarizing_2q(model.eps_TQG if p is None else p)
    raise ValueError(f"unknown channel {kind!r}")


def compose_1q(first: KrausSet, second: KrausSet) -> KrausSet:
    """Channel applying ``first`` then ``second``."""
    return KrausSet(tuple(b @ a for a in first.ops for b in second.ops))
