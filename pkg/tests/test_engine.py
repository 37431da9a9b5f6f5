"""Tests for channels, states, the OU process and circuit execution."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from nanonmr.circuit import TAG_DRIVE, TAG_PHASE_RND, TAG_X_RND, Circuit, Gate, circuit_unitary, reset, rx, rxy, swap, uzz
from nanonmr.engine import (
    DensityMatrix,
    KrausSet,
    NoiseModel,
    OUParams,
    amplitude_damping,
    basis_state,
    bit_flip_mixture,
    compose_1q,
    depolarizing_1q,
    depolarizing_2q,
    expm_hermitian,
    fidelity,
    full_dephasing,
    noise_channel,
    ou_step,
    ou_trajectory,
    phase_damping,
    prepare_initial,
    random_x_average,
    reset_channel,
    run,
    run_density,
    task_rng,
    trace_distance,
)

prob = st.floats(0.0, 1.0, allow_nan=False)


def random_state(n, rng, rank=None):
    d = 2**n
    rank = d if rank is None else rank
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    rho = G @ G.conj().T
    return DensityMatrix.from_matrix(rho / np.trace(rho))


# Channels


@settings(max_examples=50, deadline=None)
@given(prob)
def test_parameterized_channels_complete(p):
    for ch in (amplitude_damping(p), phase_damping(p), depolarizing_1q(p), depolarizing_2q(p)):
        assert ch.completeness_error() < 1e-12


def test_fixed_channels_complete():
    for ch in (reset_channel(), bit_flip_mixture(), full_dephasing(), compose_1q(amplitude_damping(0.3), phase_damping(0.2))):
        assert ch.is_cptp()


@pytest.mark.parametrize("p", [-0.1, 1.1, math.nan])
def test_channel_probability_validated(p):
    with pytest.raises(ValueError):
        amplitude_damping(p)


def test_kraus_set_validation():
    with pytest.raises(ValueError):
        KrausSet(())
    with pytest.raises(ValueError):
        KrausSet((np.eye(2), np.eye(4)))
    assert not KrausSet((2 * np.eye(2),)).is_cptp()


def test_amplitude_damping_relaxes_excited_state():
    rho = amplitude_damping(0.3).apply(np.diag([0.0, 1.0]))
    np.testing.assert_allclose(rho, np.diag([0.3, 0.7]), atol=1e-15)


def test_phase_damping_shrinks_coherence():
    plus = np.full((2, 2), 0.5)
    rho = phase_damping(0.36).apply(plus)
    assert rho[0, 1] == pytest.approx(0.5 * 0.8)
    assert rho[0, 0] == pytest.approx(0.5)


def test_depolarizing_1q_shrinks_bloch_vector():
    rho = depolarizing_1q(0.3).apply(np.diag([1.0, 0.0]))
    assert (rho[0, 0] - rho[1, 1]).real == pytest.approx(1 - 4 * 0.3 / 3)


def test_depolarizing_2q_single_qubit_marginal():
    """Eight of the fifteen error Paulis flip Z on the first qubit."""
    rho = depolarizing_2q(0.15).apply(np.diag([1.0, 0, 0, 0]))
    z0 = np.real(rho[0, 0] + rho[1, 1] - rho[2, 2] - rho[3, 3])
    assert z0 == pytest.approx(1 - 16 * 0.15 / 15)


def test_superoperator_matches_kraus_application():
    rng = np.random.default_rng(1)
    ch = compose_1q(amplitude_damping(0.2), depolarizing_1q(0.1))
    rho = random_state(1, rng)
    out = rho.copy()
    out.apply_superoperator(ch.superoperator(), (0,))
    np.testing.assert_allclose(out.matrix, ch.apply(rho.matrix), atol=1e-14)


def test_noise_channel_names():
    m = NoiseModel(T1=10.0, T2=20.0, eps_TQG=0.01)
    ad = noise_channel("amp_damp", m, t=1.0)
    np.testing.assert_allclose(ad.ops[1][0, 1] ** 2, 1 - math.exp(-0.1))
    assert noise_channel("depolarize_1q", m).ops[0][0, 0] == pytest.approx(math.sqrt(1 - 0.001))
    assert noise_channel("reset").is_cptp()
    with pytest.raises(ValueError):
        noise_channel("dephase", m)
    with pytest.raises(ValueError):
        noise_channel("bogus", m)


def test_noise_model_defaults():
    m = NoiseModel(eps_TQG=2e-3)
    assert m.sqg_error == pytest.approx(2e-4)
    assert not m.is_ideal
    assert NoiseModel().is_ideal
    assert NoiseModel.from_dict({"T1": None, "T2": 50.0}).T1 == math.inf
    with pytest.raises(ValueError):
        NoiseModel(T1=-1.0)


def test_one_over_f_dephasing_calibrated_at_T2():
    m = NoiseModel(T2=40.0, dephasing_mode="one_over_f")
    assert m.dephasing_probability(40.0) == pytest.approx(1 - math.exp(-1), rel=1e-6)
    p = [m.dephasing_probability(t) for t in (1.0, 10.0, 40.0, 100.0)]
    assert all(b > a for a, b in zip(p, p[1:]))
    assert phase_damping(m.dephasing_probability(5.0)).is_cptp()


def test_one_over_f_long_durations_converge():
    """Long idles integrate without quadrature warnings."""
    import warnings

    m = NoiseModel(T2=40.0, dephasing_mode="one_over_f")
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        p = [m.dephasing_probability(t) for t in (100.0, 1e3, 1e4)]
    assert all(0.0 < x <= 1.0 for x in p)
    assert p[0] <= p[1] <= p[2]


def test_channel_fuzz_small():
    """Random channel sequences keep states valid."""
    rng = np.random.default_rng(7)
    rho = random_state(2, rng)
    makers = [amplitude_damping, phase_damping, depolarizing_1q]
    for _ in range(300):
        if rng.random() < 0.3:
            rho.apply_superoperator(depolarizing_2q(rng.random()).superoperator(), (0, 1))
        else:
            ch = makers[rng.integers(3)](rng.random())
            rho.apply_superoperator(ch.superoperator(), (int(rng.integers(2)),))
    rho.validate()


# States


def test_basis_state_and_expectations():
    e = basis_state(3, [0, 1, 0]).expectations()
    np.testing.assert_allclose(e[:, 2], [1, -1, 1])
    np.testing.assert_allclose(e[:, :2], 0)
    with pytest.raises(ValueError):
        basis_state(2, [0, 2])


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix.from_matrix(np.eye(3))
    bad = DensityMatrix.from_matrix(np.diag([1.5, -0.5]))
    with pytest.raises(ValueError, match="negative"):
        bad.validate()
    with pytest.raises(ValueError, match="trace"):
        DensityMatrix.from_matrix(np.eye(2)).validate()


def test_reduced_state_of_product():
    rng = np.random.default_rng(2)
    a, b = random_state(1, rng), random_state(1, rng)
    rho = DensityMatrix.from_matrix(np.kron(a.matrix, b.matrix))
    np.testing.assert_allclose(rho.reduced(0), a.matrix, atol=1e-14)
    np.testing.assert_allclose(rho.reduced(1), b.matrix, atol=1e-14)


def test_apply_unitary_matches_dense():
    rng = np.random.default_rng(3)
    rho = random_state(3, rng)
    c = Circuit(3, [uzz(2, 0, 0.4), rxy(1, 0.2, 0.9)])
    U = circuit_unitary(c)
    out = rho.copy()
    out.apply_unitary(circuit_unitary(Circuit(2, [uzz(0, 1, 0.4)])), (2, 0))
    out.apply_unitary(circuit_unitary(Circuit(1, [rxy(0, 0.2, 0.9)])), (1,))
    np.testing.assert_allclose(out.matrix, U @ rho.matrix @ U.conj().T, atol=1e-13)


def test_prepare_initial_methods():
    rng = np.random.default_rng(0)
    s = prepare_initial(3, "random_x", rng, nuclei=[1, 2])
    z = s.expectations()[:, 2]
    assert z[0] == 1 and set(np.abs(z[1:])) == {1.0}
    p = prepare_initial(2, "random_phase", rng)
    np.testing.assert_allclose(np.linalg.norm(p.expectations()[:, :2], axis=1), 1.0)
    np.testing.assert_allclose(p.expectations()[:, 2], 0.0, atol=1e-15)
    assert prepare_initial(2, "pure", bits=[1, 0]).expectations()[0, 2] == pytest.approx(-1)
    with pytest.raises(ValueError):
        prepare_initial(2, "random_x")


def test_random_x_average_is_maximally_mixed_on_nuclei():
    rho = random_x_average(3, nuclei=[1, 2])
    np.testing.assert_allclose(rho.reduced(1), np.eye(2) / 2)
    np.testing.assert_allclose(rho.expectations()[0], [0, 0, 1])


def test_fidelity_and_trace_distance_examples():
    zero, one = basis_state(1, [0]), basis_state(1, [1])
    mixed = DensityMatrix.from_matrix(np.eye(2) / 2)
    assert fidelity(zero, zero) == pytest.approx(1.0)
    assert fidelity(zero, one) == pytest.approx(0.0, abs=1e-12)
    assert fidelity(zero, mixed) == pytest.approx(0.5)
    assert trace_distance(zero, one) == pytest.approx(1.0)
    assert trace_distance(zero, mixed) == pytest.approx(0.5)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_fidelity_symmetric_and_bounded(seed):
    rng = np.random.default_rng(seed)
    a, b = random_state(2, rng), random_state(2, rng, rank=1)
    f = fidelity(a, b)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(fidelity(b, a), abs=1e-8)


def test_expm_hermitian_matches_scipy():
    rng = np.random.default_rng(4)
    G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    H = G + G.conj().T
    np.testing.assert_allclose(expm_hermitian(H, 0.7), expm(-0.7j * H), atol=1e-12)


# OU process


def test_ou_step_examples():
    p = OUParams(tau=2.0, c=0.0, dt=1.0)
    rng = np.random.default_rng(0)
    assert ou_step(1.0, p, rng) == pytest.approx(math.exp(-0.5))
    assert ou_step(0.3, p, rng, dt=0.0) == 0.3
    assert OUParams(tau=500.0, c=4e-7).stationary_variance == pytest.approx(1e-4)


def test_ou_trajectory_autocorrelation():
    p = OUParams(tau=10.0, c=0.2, dt=1.0)
    x = ou_trajectory(200_000, p, np.random.default_rng(5))
    lag = 10
    r = np.corrcoef(x[:-lag], x[lag:])[0, 1]
    assert r == pytest.approx(math.exp(-1), abs=0.02)


def test_ou_validation():
    with pytest.raises(ValueError):
        OUParams(tau=0.0)
    with pytest.raises(ValueError):
        OUParams(c=-1.0)


# Execution


def test_run_noiseless_flip():
    vals = run(Circuit(2, [Gate("x", (1,))]))
    np.testing.assert_allclose(vals[:, 2], [1, -1])


def test_run_reset():
    vals = run(Circuit(1, [rx(0, 1.0), reset(0)]), NoiseModel(T1=1e9, T2=1e9))
    assert vals[0, 2] == pytest.approx(1.0, abs=1e-6)


def test_run_amplitude_damping_during_gate():
    """One 0.5 us X gate with T1 = 1 us leaves P(1) = exp(-0.5)."""
    m = NoiseModel(T1=1.0, tau_SQG=0.5)
    z = run(Circuit(1, [Gate("x", (0,))]), m)[0, 2]
    assert z == pytest.approx(1 - 2 * math.exp(-0.5), abs=1e-12)


def test_run_dephasing_during_gate():
    m = NoiseModel(T2=2.0, tau_SQG=0.5)
    x = run(Circuit(1, [Gate("h", (0,))]), m)[0, 0]
    assert x == pytest.approx(math.exp(-0.5 / 4), abs=1e-12)


def test_run_gate_depolarizing():
    m = NoiseModel(eps_TQG=0.03, eps_SQG=0.0, tau_TQG=1e-9)
    z = run(Circuit(2, [uzz(0, 1, 0.3)]), m)[0, 2]
    assert z == pytest.approx(1 - 16 * 0.03 / 15, abs=1e-6)


def test_run_swap_error_is_three_gates():
    eps = 0.01
    m = NoiseModel(eps_TQG=eps, eps_SQG=0.0, tau_TQG=1e-9)
    z = run(Circuit(2, [swap(0, 1)]), m)[1, 2]
    p = 1 - (1 - eps) ** 3
    assert z == pytest.approx(1 - 16 * p / 15, abs=1e-6)


def test_virtual_rz_is_noise_free():
    m = NoiseModel(T1=1.0, T2=1.0, eps_TQG=0.1)
    rho = run_density(Circuit(1, [Gate("rz", (0,), (0.4,))]), m)
    assert rho.expectations()[0, 2] == pytest.approx(1.0)


def test_init_sampling_modes_agree():
    c = Circuit(2, [Gate("x", (1,), (), TAG_X_RND), rxy(1, 0.3, 0.8), uzz(0, 1, 0.5), rx(0, 0.7)])
    exact = run(c, init_sampling="exact")
    exhaustive = run(c, init_sampling="exhaustive")
    np.testing.assert_allclose(exact, exhaustive, atol=1e-12)
    sampled = run(c, init_sampling="random", samples=400, seed=3)
    np.testing.assert_allclose(sampled, exact, atol=0.15)


def test_seeded_runs_reproducible():
    c = Circuit(2, [Gate("h", (1,)), Gate("rz", (1,), (0.0,), TAG_PHASE_RND), rx(1, 0.4), uzz(0, 1, 0.5)])
    a = run(c, init_sampling="random", samples=5, seed=11)
    b = run(c, init_sampling="random", samples=5, seed=11)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, run(c, init_sampling="random", samples=5, seed=12))


def test_task_rng_streams_independent_of_order():
    a = task_rng(5, 2).random()
    task_rng(5, 1).random()
    assert task_rng(5, 2).random() == a
    assert task_rng(5, 3).random() != a


def test_ou_scales_drive_rotation():
    """A large static amplitude error turns a pi rotation into (1 + X) pi."""
    c = Circuit(1, [rxy(0, 0.0, math.pi, tag=TAG_DRIVE)])
    ou = OUParams(tau=1e9, c=2e-9 * 0.01, dt=0.0)  # stationary std 0.1, frozen
    z = run(c, ou=ou, samples=200, init_sampling="exact", seed=1)[0, 2]
    # E[cos(pi (1 + X))] = -exp(-pi^2 sigma^2 / 2) for Gaussian X.
    assert z == pytest.approx(-math.exp(-(math.pi * 0.1) ** 2 / 2), abs=0.02)
    assert run(c)[0, 2] == pytest.approx(-1.0)


def test_initial_state_size_checked():
    with pytest.raises(ValueError, match="initial state"):
        run(Circuit(2, [rx(0, 0.1)]), initial=basis_state(1, [0]))
