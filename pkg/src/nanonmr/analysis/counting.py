"""Transpiled Trotter steps and gate-count tables."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..circuit import Circuit, count_gates
from ..route import Topology, closed_form_counts, decompose_native, interaction_order, route, swap_savings, tqg_depth_form
from ..route.counts import grid_swaps, star_swaps
from ..spinsys import SpinSystem
from ..synth import rotational_optimize, trotter_step

COUNT_COLUMNS = ("topology", "n", "interacting", "N_TQG", "N_SQG", "N_SWAP", "depth", "source", "swap_savings")


def counting_system(n: int, interacting: bool, Bz: float = 0.05) -> SpinSystem:
    """One NV and n-1 nuclei with every coupling nonzero.

    Generic couplings make every Pauli term present, which is what the
    closed-form gate counts assume.
    """
    if n < 2:
        raise ValueError("counting system needs n >= 2")
    N = n - 1
    A = np.zeros((1, N, 3))
    A[0] = [0.1, 0.05, 0.3]
    g = np.triu(np.full((N, N), 0.01), 1) if interacting else None
    return SpinSystem(delta=[0.1], A=A, g=g, Bz=Bz)


def transpile_step(
    sys: SpinSystem,
    topology: str | None = None,
    native: str | None = None,
    rotational: bool = False,
    dt: float = 0.1,
) -> tuple[Circuit, Circuit]:
    """One Trotter step of ``sys``, routed and decomposed.

    Args:
        sys: Spin system with one NV.
        topology: Chip topology name; ``None`` keeps the logical circuit.
        native: Native two-qubit gate set, ``None`` keeps UZZ and SWAP.
        rotational: Align the hyperfine vectors first (noninteracting only),
            leaving one ZZ per nucleus.
        dt: Step duration in us.

    Returns:
        The routed circuit and its native decomposition.
    """
    work = sys
    if rotational:
        work, _ = rotational_optimize(sys)
    pair_order = None
    topo = None
    if topology is not None:
        topo = Topology(topology, sys.n_qubits)
        pair_order = interaction_order(topo, sys.interacting, sys.n_qubits)
    c = trotter_step(work, None, dt, pair_order=pair_order)
    if topo is not None:
        c = route(c, topo, sys.interacting)
    return c, (c if native is None else decompose_native(c, native))


def _savings(n: int, interacting: bool) -> Fraction | None:
    try:
        return swap_savings(n, interacting)
    except ValueError:
        return None


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else repr(float(v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


def closed_form_row(topology: str, n: int, interacting: bool) -> dict:
    """Count-table row from the closed forms (depth only where a form exists)."""
    cf = closed_form_counts(n, interacting, topology)
    if topology == "star":
        n_swap = star_swaps(n, interacting)
    elif topology in ("square_grid", "linear_chain"):
        n_swap = grid_swaps(n, interacting)
    else:
        n_swap = 0
    depth = None
    if interacting and topology in ("star", "square_grid"):
        depth = tqg_depth_form(n, topology)
    return {
        "topology": topology, "n": n, "interacting": interacting,
        "N_TQG": cf["N_TQG"], "N_SQG": cf["N_SQG"], "N_SWAP": n_swap, "depth": depth,
        "source": "closed_form", "swap_savings": _savings(n, interacting),
    }


def measured_row(topology: str, n: int, interacting: bool, native: str | None = None,
                 sys: SpinSystem | None = None) -> dict:
    """Count-table row measured on a transpiled Trotter step.

    SWAPs are counted before native decomposition, since decomposed SWAPs
    are no longer recognizable.
    """
    sys = counting_system(n, interacting) if sys is None else sys
    routed, nat = transpile_step(sys, topology, native, rotational=not interacting)
    before = count_gates(routed)
    after = count_gates(nat)
    return {
        "topology": topology, "n": n, "interacting": interacting,
        "N_TQG": after.N_TQG, "N_SQG": after.N_SQG, "N_SWAP": before.N_SWAP,
        "depth": after.tqg_depth, "source": "measured" if native is None else f"measured:{native}",
        "swap_savings": _savings(n, interacting) if n >= 3 else None,
    }


def counts_csv(rows) -> str:
    lines = [",".join(COUNT_COLUMNS)]
    for r in rows:
        vals = [r[k] for k in COUNT_COLUMNS]
        vals[2] = "true" if vals[2] else "false"
        lines.append(",".join(_fmt(v) for v in vals))
    return "\n".join(lines) + "\n"
