"""Noisy density-matrix execution of circuits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from ..circuit import (
    TAG_DRIVE,
    TAG_PHASE_RND,
    TAG_PULSE,
    TAG_X_RND,
    Circuit,
    Gate,
    circuit_unitary,
    gate_matrix,
    rxy_matrix,
    schedule_moments,
)
from .channels import (
    NoiseModel,
    amplitude_damping,
    bit_flip_mixture,
    depolarizing_1q,
    depolarizing_2q,
    full_dephasing,
    phase_damping,
    reset_channel,
)
from .ou import OUParams, ou_step
from .state import DensityMatrix

INIT_SAMPLING = ("auto", "exact", "exhaustive", "random")
EXHAUSTIVE_LIMIT = 5
DEFAULT_RANDOM_SAMPLES = 32
# Noiseless unitary segments are fused into dense matrices up to this size.
SEGMENT_QUBIT_LIMIT = 8


def task_rng(seed: int, *keys: int) -> np.random.Generator:
    """Generator for task ``keys`` under master ``seed``.

    The stream depends only on (seed, keys), so results do not depend on how
    tasks are distributed over workers.
    """
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in keys)))


def _is_x_rnd(g: Gate) -> bool:
    return g.tag == TAG_X_RND


def _is_phase_rnd(g: Gate) -> bool:
    return g.tag == TAG_PHASE_RND


class _SuperopCache:
    """Superoperator tensors keyed by channel parameters."""

    def __init__(self, model: NoiseModel):
        self.model = model
        self._store: dict = {}

    def _get(self, key, build):
        s = self._store.get(key)
        if s is None:
            s = build().superoperator()
            self._store[key] = s
        return s

    def depol_1q(self, p: float):
        return self._get(("d1", p), lambda: depolarizing_1q(p))

    def depol_2q(self, p: float):
        return self._get(("d2", p), lambda: depolarizing_2q(p))

    def reset(self):
        return self._get(("reset",), reset_channel)

    def bit_flip(self):
        return self._get(("flip",), bit_flip_mixture)

    def dephase_all(self):
        return self._get(("phase_avg",), full_dephasing)

    def segments(self, c: Circuit, ou_on: bool):
        key = ("segments", id(c), ou_on)
        if key not in self._store:
            self._store[key] = _segments(c, ou_on)
        return self._store[key]

    def segment_unitary(self, seg: tuple, n: int) -> np.ndarray:
        key = ("seg", seg)
        if key not in self._store:
            self._store[key] = _segment_unitary(seg, n)
        return self._store[key]

    def idle(self, t: float):
        """Amplitude damping followed by dephasing for duration ``t``; None if trivial."""
        key = ("idle", t)
        if key not in self._store:
            pa = self.model.amp_damp_probability(t)
            pd = self.model.dephasing_probability(t)
            if pa == 0.0 and pd == 0.0:
                self._store[key] = None
            else:
                a = amplitude_damping(pa).superoperator().reshape(4, 4)
                d = phase_damping(pd).superoperator().reshape(4, 4)
                self._store[key] = (d @ a).reshape((2,) * 4)
        return self._store[key]


@dataclass
class _OUState:
    params: OUParams
    rng: np.random.Generator
    values: dict

    def next(self, q: int) -> float:
        if q not in self.values:
            self.values[q] = math.sqrt(self.params.stationary_variance) * self.rng.standard_normal()
        self.values[q] = ou_step(self.values[q], self.params, self.rng)
        return self.values[q]


def _scaled_matrix(g: Gate, factor: float) -> np.ndarray:
    if g.kind == "rxy":
        return rxy_matrix(g.params[0], g.params[1] * factor)
    if g.kind in ("x", "y"):
        return rxy_matrix(0.0 if g.kind == "x" else math.pi / 2, math.pi * factor)
    return gate_matrix(g)


def _apply_gate(rho: DensityMatrix, g: Gate, cache: _SuperopCache, choice, ou: _OUState | None):
    """Apply the ideal action of one gate. ``choice`` resolves stochastic gates."""
    if g.kind == "barrier":
        return
    if g.kind == "reset":
        rho.apply_superoperator(cache.reset(), g.qubits)
        return
    if _is_x_rnd(g):
        if choice == "channel":
            rho.apply_superoperator(cache.bit_flip(), g.qubits)
        elif choice:
            rho.apply_unitary(gate_matrix(Gate("x", g.qubits)), g.qubits)
        return
    if _is_phase_rnd(g):
        if choice == "channel":
            rho.apply_superoperator(cache.dephase_all(), g.qubits)
        else:
            rho.apply_unitary(gate_matrix(Gate("rz", g.qubits, (float(choice),))), g.qubits)
        return
    if ou is not None and g.tag in (TAG_DRIVE, TAG_PULSE):
        U = _scaled_matrix(g, 1.0 + ou.next(g.qubits[0]))
    else:
        U = gate_matrix(g)
    rho.apply_unitary(U, g.qubits)


def _apply_gate_error(rho: DensityMatrix, g: Gate, model: NoiseModel, cache: _SuperopCache):
    if g.kind == "swap":
        p = 1.0 - (1.0 - model.eps_TQG) ** 3
        if p > 0:
            rho.apply_superoperator(cache.depol_2q(p), g.qubits)
    elif g.is_tqg:
        if model.eps_TQG > 0:
            rho.apply_superoperator(cache.depol_2q(model.eps_TQG), g.qubits)
    elif g.kind not in ("reset", "barrier") and g.is_physical_sqg:
        if model.sqg_error > 0:
            rho.apply_superoperator(cache.depol_1q(model.sqg_error), g.qubits)


def _is_plain_unitary(g: Gate, ou_on: bool) -> bool:
    if g.kind in ("barrier", "reset") or _is_x_rnd(g) or _is_phase_rnd(g):
        return False
    return not (ou_on and g.tag in (TAG_DRIVE, TAG_PULSE))


def _smallest_period(seg: tuple) -> int:
    L = len(seg)
    first = seg[0]
    for p in range(1, L // 2 + 1):
        if L % p == 0 and seg[p] == first and seg[:L - p] == seg[p:]:
            return p
    return L


def _segment_unitary(seg: tuple, n: int) -> np.ndarray:
    """Dense unitary of a gate sequence, using its repetition period."""
    p = _smallest_period(seg)
    U = circuit_unitary(Circuit(n, seg[:p]))
    return np.linalg.matrix_power(U, len(seg) // p) if p < len(seg) else U


def _segments(c: Circuit, ou_on: bool) -> list:
    """Split a circuit into unitary segments and single non-unitary gates."""
    out, cur = [], []
    for i, g in enumerate(c.gates):
        if g.kind == "barrier":
            continue
        if _is_plain_unitary(g, ou_on):
            cur.append(g)
            continue
        if cur:
            out.append(("U", tuple(cur)))
            cur = []
        out.append(("G", i))
    if cur:
        out.append(("U", tuple(cur)))
    return out


def _execute_ideal(c: Circuit, rho: DensityMatrix, choices: dict, ou: _OUState | None,
                   cache: _SuperopCache) -> DensityMatrix:
    n = c.n_qubits
    for kind, item in cache.segments(c, ou is not None):
        if kind == "G":
            _apply_gate(rho, c.gates[item], cache, choices.get(item), ou)
        elif len(item) < 4 or n > SEGMENT_QUBIT_LIMIT:
            for g in item:
                _apply_gate(rho, g, cache, None, ou)
        else:
            rho.apply_unitary(cache.segment_unitary(item, n), tuple(range(n)))
    return rho


def _execute(c: Circuit, model: NoiseModel | None, rho: DensityMatrix, choices: dict,
             ou: _OUState | None, cache: _SuperopCache) -> DensityMatrix:
    if model is None or model.is_ideal:
        return _execute_ideal(c, rho, choices, ou, cache)
    for m in c.moments:
        for i in m.gates:
            _apply_gate(rho, c.gates[i], cache, choices.get(i), ou)
        for i in m.gates:
            _apply_gate_error(rho, c.gates[i], model, cache)
        if m.duration > 0:
            S = cache.idle(m.duration)
            if S is not None:
                for q in range(c.n_qubits):
                    rho.apply_superoperator(S, (q,))
    return rho


def _plan_runs(c: Circuit, init_sampling: str, samples: int | None, ou: OUParams | None, seed: int):
    """List of (choices, rng) per run."""
    if init_sampling not in INIT_SAMPLING:
        raise ValueError(f"unknown init sampling {init_sampling!r}")
    xr = [i for i, g in enumerate(c.gates) if _is_x_rnd(g)]
    pr = [i for i, g in enumerate(c.gates) if _is_phase_rnd(g)]
    k = len(xr) + len(pr)
    mode = init_sampling
    if mode == "auto":
        if k == 0:
            mode = "exact"
        elif not pr and len(xr) <= EXHAUSTIVE_LIMIT:
            mode = "exhaustive"
        else:
            mode = "random"
    if mode == "exhaustive" and pr:
        raise ValueError("random phases cannot be enumerated; use exact or random sampling")

    runs = []
    if mode == "exact":
        n_runs = (samples or 1) if ou is not None else 1
        for r in range(n_runs):
            runs.append(({i: "channel" for i in xr + pr}, task_rng(seed, r)))
    elif mode == "exhaustive":
        for r, flips in enumerate(product((False, True), repeat=len(xr))):
            runs.append((dict(zip(xr, flips)), task_rng(seed, r)))
    else:
        n_runs = DEFAULT_RANDOM_SAMPLES if samples is None else samples
        if n_runs < 1:
            raise ValueError("samples must be >= 1")
        for r in range(n_runs):
            rng = task_rng(seed, r)
            ch = {i: bool(rng.random() < 0.5) for i in xr}
            ch.update({i: rng.uniform(0.0, 2 * math.pi) for i in pr})
            runs.append((ch, rng))
    return runs


def run_density(
    c: Circuit,
    model: NoiseModel | None = None,
    *,
    seed: int = 0,
    ou: OUParams | None = None,
    samples: int | None = None,
    init_sampling: str = "auto",
    initial: DensityMatrix | None = None,
) -> DensityMatrix:
    """Execute a circuit and return the run-averaged final state.

    Without noise, gates are applied in order. With noise, the circuit is
    scheduled (if it has no moments yet) and each moment applies the gate
    unitaries, then depolarizing errors of the gates, then amplitude damping
    and dephasing of every qubit for the moment duration.

    Args:
        c: Circuit to execute.
        model: Noise model; ``None`` is noiseless.
        seed: Master seed. Run ``r`` uses ``task_rng(seed, r)``.
        ou: Enables OU fluctuations of gates tagged ``drive`` or ``pulse``.
            Each NV qubit carries its own process, advanced by ``ou.dt``
            before every tagged gate; the rotation angle is scaled by 1 + X.
        samples: Number of runs for random sampling, or of OU trajectories
            when the initialization is handled exactly.
        init_sampling: How stochastic initialization gates are treated.
            ``exact`` applies the averaged channel, ``exhaustive`` enumerates
            every X pattern, ``random`` draws them. ``auto`` enumerates up to
            five random X gates and samples otherwise.
        initial: Initial state; defaults to |0...0>.

    Returns:
        Average of the final density matrices over all runs.
    """
    if initial is not None and initial.n_qubits != c.n_qubits:
        raise ValueError(f"initial state has {initial.n_qubits} qubits, circuit {c.n_qubits}")
    noisy = model is not None and not model.is_ideal
    if noisy and c.moments is None:
        c = schedule_moments(c, model.durations)
    cache = _SuperopCache(model if model is not None else NoiseModel())
    acc = None
    runs = _plan_runs(c, init_sampling, samples, ou, seed)
    for choices, rng in runs:
        rho = initial.copy() if initial is not None else DensityMatrix.zero(c.n_qubits)
        state = _OUState(ou, rng, {}) if ou is not None else None
        rho = _execute(c, model, rho, choices, state, cache)
        acc = rho.tensor if acc is None else acc + rho.tensor
    return DensityMatrix(c.n_qubits, acc / len(runs))


def run(c: Circuit, model: NoiseModel | None = None, **opts) -> np.ndarray:
    """Per-qubit expectations <X>, <Y>, <Z>, shape (n, 3); see ``run_density``."""
    return run_density(c, model, **opts).expectations()


def logical_expectations(values: np.ndarray, c: Circuit) -> np.ndarray:
    """Reorder physical-qubit expectations by logical qubit using the final layout."""
    if c.final_layout is None:
        return values
    return values[list(c.final_layout)]
