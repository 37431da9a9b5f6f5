"""Tests for topologies, routing, native decompositions and closed-form counts."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nanonmr.analysis.counting import counting_system, measured_row, transpile_step
from nanonmr.circuit import Circuit, circuit_unitary, count_gates, phase_distance, permutation_unitary, uzz
from nanonmr.route import (
    Topology,
    check_adjacency,
    closed_form_counts,
    decompose_native,
    decompose_swap,
    decompose_uzz,
    gate_error_bound,
    grid_shape,
    interaction_order,
    resonator_protocol_wrap,
    route,
    snake_coordinates,
    swap_savings,
    tqg_depth_form,
)
from nanonmr.synth import trotter_step

NATIVE_OVERHEAD = {"uzz_param": (1, 0), "uzz_fixed": (2, 5), "cz_fixed": (2, 3), "cnot": (2, 1), "cz_param": (1, 0)}


def routed_step(n, topology, interacting, dt=0.3):
    sys = counting_system(n, interacting)
    topo = Topology(topology, n)
    c = trotter_step(sys, None, dt, pair_order=interaction_order(topo, interacting, n))
    return c, route(c, topo, interacting), topo


def routed_equals_logical(c, r, atol=1e-10):
    """U_phys P_init == P_final U_log, up to global phase."""
    n = r.n_qubits
    lhs = circuit_unitary(r) @ permutation_unitary(r.initial_layout, n)
    rhs = permutation_unitary(r.final_layout, n) @ circuit_unitary(c)
    return phase_distance(lhs, rhs) <= atol


def test_star_edges():
    t = Topology("star", 5)
    assert t.edges == {(0, 1), (0, 2), (0, 3), (0, 4)}
    assert t.neighbors(3) == [0]


def test_grid_snake_is_embedded():
    """Consecutive snake positions are grid neighbors."""
    assert grid_shape(6) == (2, 3)
    coords = snake_coordinates(7)
    for a, b in zip(coords, coords[1:]):
        assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def test_topology_validation():
    with pytest.raises(ValueError):
        Topology("ring", 4)
    with pytest.raises(ValueError):
        Topology("star", 3, hub=5)


@pytest.mark.parametrize("topology,interacting,swaps", [
    ("star", False, 0), ("star", True, 4), ("square_grid", True, 10), ("linear_chain", True, 10),
    ("square_grid", False, 3), ("all_to_all", True, 0),
])
def test_swap_counts_n6(topology, interacting, swaps):
    """Star interacting n-2, chain interacting (n-1)(n-2)/2, NV walk n-3."""
    _, r, topo = routed_step(6, topology, interacting)
    assert count_gates(r).N_SWAP == swaps
    assert check_adjacency(r, topo) == []


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("topology", ["star", "square_grid", "linear_chain", "all_to_all"])
@pytest.mark.parametrize("interacting", [False, True])
def test_routing_preserves_unitary(n, topology, interacting):
    c, r, _ = routed_step(n, topology, interacting)
    assert routed_equals_logical(c, r)


def test_route_rejects_bad_layout():
    c, _, topo = routed_step(4, "star", True)
    with pytest.raises(ValueError, match="distinct"):
        route(c, topo, True, initial_layout=(0, 0, 1, 2))


@pytest.mark.parametrize("native", sorted(NATIVE_OVERHEAD))
def test_native_uzz_overheads(native):
    tqg, sqg = NATIVE_OVERHEAD[native]
    counts = count_gates(Circuit(2, decompose_uzz(0, 1, 0.37, native)))
    assert (counts.N_TQG, counts.N_SQG) == (tqg, sqg)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(NATIVE_OVERHEAD)), st.floats(-3.0, 3.0, allow_nan=False))
def test_native_uzz_unitary(native, phi):
    U = circuit_unitary(Circuit(2, decompose_uzz(0, 1, phi, native)))
    assert phase_distance(U, circuit_unitary(Circuit(2, [uzz(0, 1, phi)]))) < 1e-10


@pytest.mark.parametrize("native", sorted(NATIVE_OVERHEAD))
def test_native_swap_unitary(native):
    U = circuit_unitary(Circuit(2, decompose_swap(0, 1, native)))
    assert phase_distance(U, permutation_unitary([1, 0], 2)) < 1e-10
    assert count_gates(Circuit(2, decompose_swap(0, 1, native))).N_TQG == 3


@pytest.mark.parametrize("native", ["cz_fixed", "cnot"])
def test_decompose_native_routed_circuit(native):
    c, r, _ = routed_step(4, "linear_chain", True)
    nat = decompose_native(r, native)
    assert routed_equals_logical(c, nat)


def test_native_name_aliases():
    assert count_gates(Circuit(2, decompose_uzz(0, 1, 0.2, "CZ_fixed"))).N_TQG == 2
    with pytest.raises(ValueError):
        decompose_uzz(0, 1, 0.2, "toffoli")


def test_closed_form_examples():
    assert closed_form_counts(6, True, "star")["N_TQG"] == 57
    assert closed_form_counts(6, True, "square_grid")["N_TQG"] == 75
    assert closed_form_counts(6, True, "all_to_all")["N_TQG"] == 45
    assert closed_form_counts(6, False, "star")["N_TQG"] == 5
    assert closed_form_counts(5, True, "star")["N_SQG"] == 105
    with pytest.raises(ValueError):
        closed_form_counts(2, True, "star")


def test_depth_forms():
    assert tqg_depth_form(6, "star") == 57
    assert tqg_depth_form(6, "square_grid") == 36


def test_sqg_forms_grow_with_n():
    for topo in ("star", "square_grid", "all_to_all"):
        for inter in (False, True):
            vals = [closed_form_counts(n, inter, topo)["N_SQG"] for n in range(3, 22)]
            assert all(b > a for a, b in zip(vals, vals[1:]))


def test_swap_savings_examples():
    assert swap_savings(21, True) == Fraction(9, 10)
    assert swap_savings(21, False) == 1
    assert swap_savings(6, True) == 1 - Fraction(4, 10)
    with pytest.raises(ValueError):
        swap_savings(2, True)


def test_gate_error_bound_examples():
    assert gate_error_bound(0, 0, 0.1, 0.1) == 0.0
    assert gate_error_bound(1, 0, 0.01, 0.5) == pytest.approx(0.01)
    assert gate_error_bound(2, 1, 0.1, 0.5) == pytest.approx(1 - 0.81 * 0.5)
    with pytest.raises(ValueError):
        gate_error_bound(1, 1, 1.5, 0.0)


def test_measured_star_interacting_matches_closed_form():
    for n in (4, 6):
        row = measured_row("star", n, True)
        assert row["N_TQG"] == closed_form_counts(n, True, "star")["N_TQG"]
        assert row["N_SWAP"] == n - 2


def test_resonator_wrap_adds_two_moves():
    r, nat = transpile_step(counting_system(5, False), "star", "cz_param", rotational=True)
    w = resonator_protocol_wrap(nat, Topology("star", 5))
    kinds = [g.kind for g in w.gates]
    assert w.n_qubits == 6
    assert kinds.count("iswap") == 2
    assert kinds.count("cz") == 4
    assert count_gates(w).N_TQG == count_gates(nat).N_TQG + 2


def test_resonator_wrap_keeps_resonator_empty():
    """With the resonator in |0> the wrapped step acts like the routed one."""
    c, r, topo = routed_step(4, "star", False)
    w = resonator_protocol_wrap(r, topo)
    n = w.n_qubits
    embed = np.zeros((2**n, 2 ** (n - 1)))
    embed[2 * np.arange(2 ** (n - 1)), np.arange(2 ** (n - 1))] = 1.0
    lhs = circuit_unitary(w) @ permutation_unitary(w.initial_layout, n) @ embed
    rhs = permutation_unitary(w.final_layout, n) @ embed @ circuit_unitary(c)
    assert phase_distance(lhs, rhs) < 1e-10


def test_resonator_wrap_rejects_non_star():
    c, r, _ = routed_step(4, "linear_chain", False)
    with pytest.raises(ValueError, match="star"):
        resonator_protocol_wrap(r, Topology("linear_chain", 4))
