"""Star protocol with a resonator hub.

The resonator cannot take single-qubit gates, so the NV state lives on an
extra "selected" qubit and is moved into the resonator only for runs of
diagonal two-qubit gates with the other qubits:

1. single-qubit gates of the NV act on the selected qubit;
2. an iSWAP moves the state into the resonator;
3. CZ/UZZ gates couple the resonator to the nuclei (virtual Rz allowed);
4. the inverse iSWAP moves the state back before the next non-diagonal
   operation on the NV.

The iSWAP adds a relative phase that commutes with the diagonal gates. With
``exact_inverse`` the return move is iSWAP^dagger (iSWAP followed by virtual
Rz(pi) on both qubits), which restores the state exactly.
"""

from __future__ import annotations

import math

from ..circuit import Circuit, Gate, rz
from .topology import Topology


def _move_in(sel: int, hub: int, use_iswap: bool) -> list[Gate]:
    return [Gate("iswap" if use_iswap else "swap", (sel, hub))]


def _move_out(sel: int, hub: int, use_iswap: bool, exact_inverse: bool) -> list[Gate]:
    if not use_iswap:
        return [Gate("swap", (sel, hub))]
    out = [Gate("iswap", (sel, hub))]
    if exact_inverse:
        out += [rz(sel, math.pi), rz(hub, math.pi)]
    return out


def resonator_protocol_wrap(
    c: Circuit,
    topo: Topology | None = None,
    use_iswap: bool = True,
    exact_inverse: bool = True,
) -> Circuit:
    """Carry the hub qubit's state through a resonator.

    Args:
        c: Star-routed circuit whose two-qubit gates on the hub are diagonal
            (UZZ or CZ).
        topo: Star topology of ``c``; defaults to a star with hub 0.
        use_iswap: Move the state with iSWAP (True) or SWAP (False).
        exact_inverse: Undo the iSWAP phase on the way back.

    Returns:
        Circuit on ``n + 1`` qubits. Qubit ``n`` is the selected qubit; the
        hub index is the resonator, which starts and ends in |0>. Layouts are
        updated so that the hub's logical qubit maps to the selected qubit.

    Raises:
        ValueError: On a non-diagonal two-qubit gate touching the hub.
    """
    topo = Topology("star", c.n_qubits) if topo is None else topo
    if topo.kind != "star":
        raise ValueError("resonator protocol needs a star topology")
    hub, sel = topo.hub, c.n_qubits
    out: list[Gate] = []
    inside = False
    for g in c.gates:
        if hub not in g.qubits and not (g.kind == "barrier" and not g.qubits):
            out.append(g)
            continue
        if g.is_tqg:
            if not g.is_diagonal:
                raise ValueError(f"non-diagonal hub gate {g.kind}{g.qubits}; the iSWAP phase would leak")
            if not inside:
                out += _move_in(sel, hub, use_iswap)
                inside = True
            out.append(g)
            continue
        if g.kind == "rz" and inside:
            out.append(g)
            continue
        if inside:
            out += _move_out(sel, hub, use_iswap, exact_inverse)
            inside = False
        if g.kind == "barrier":
            qs = g.qubits if g.qubits else tuple(range(c.n_qubits))
            out.append(g.on(*(sel if q == hub else q for q in qs)))
        else:
            out.append(g.on(*(sel if q == hub else q for q in g.qubits)))
    if inside:
        out += _move_out(sel, hub, use_iswap, exact_inverse)

    def moved(layout):
        if layout is None:
            layout = tuple(range(c.n_qubits))
        return tuple(sel if p == hub else p for p in layout)

    return Circuit(c.n_qubits + 1, tuple(out), None, moved(c.initial_layout), moved(c.final_layout))
