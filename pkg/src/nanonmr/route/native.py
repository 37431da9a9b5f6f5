"""Decomposition of UZZ and SWAP gates into a native two-qubit gate.

Per UZZ(phi) the overheads are (TQG / physical SQG):

=============  =======
uzz_param      1 / 0
uzz_fixed      2 / 5   (only UZZ(-pi/4) available)
cz_fixed       2 / 3   (only CZ(pi) available)
cnot           2 / 1
cz_param       1 / 0   (continuously parameterized CZ)
=============  =======

The fixed-gate constructions use U X_a U^dagger = Y_a Z_b for
U = UZZ(pi/4), hence
UZZ(phi) = Rx_a(pi/2) U Rx_a(2 phi) U^dagger Rx_a(-pi/2).
Rz gates produced here are virtual unless tagged physical.
"""

from __future__ import annotations

import math

from ..circuit import Circuit, Gate, TAG_PHYSICAL, rx, ry, rz

NATIVE_KINDS = ("uzz_param", "uzz_fixed", "cz_fixed", "cnot", "cz_param")
_ALIASES = {
    "UZZ_param": "uzz_param", "UZZ_fixed": "uzz_fixed", "CZ_fixed": "cz_fixed",
    "CNOT": "cnot", "CZ_param": "cz_param",
}
Q = math.pi / 4


def native_kind(name: str) -> str:
    kind = _ALIASES.get(name, name).lower()
    if kind not in NATIVE_KINDS:
        raise ValueError(f"unknown native gate set {name!r}")
    return kind


def _cz_pi(a: int, b: int, kind: str) -> list[Gate]:
    """CZ(pi) up to global phase from the native gate."""
    if kind in ("cz_fixed", "cz_param"):
        return [Gate("cz", (a, b), (math.pi,))]
    if kind == "uzz_param":
        return [Gate("uzz", (a, b), (Q,)), rz(a, -math.pi / 2), rz(b, -math.pi / 2)]
    if kind == "uzz_fixed":
        return [Gate("uzz", (a, b), (-Q,)), rz(a, math.pi / 2), rz(b, math.pi / 2)]
    if kind == "cnot":
        return [ry(b, -math.pi / 2), Gate("cnot", (a, b)), ry(b, math.pi / 2)]
    raise ValueError(kind)


def _cnot(a: int, b: int, kind: str) -> list[Gate]:
    if kind == "cnot":
        return [Gate("cnot", (a, b))]
    return [ry(b, -math.pi / 2)] + _cz_pi(a, b, kind) + [ry(b, math.pi / 2)]


def decompose_uzz(a: int, b: int, phi: float, kind: str) -> list[Gate]:
    """Gates equal to UZZ(phi) on (a, b) up to global phase."""
    kind = native_kind(kind)
    if kind == "uzz_param":
        return [Gate("uzz", (a, b), (phi,))]
    if kind == "cz_param":
        return [Gate("cz", (a, b), (4 * phi,)), rz(a, 2 * phi), rz(b, 2 * phi)]
    if kind == "cnot":
        return [Gate("cnot", (a, b)), rz(b, 2 * phi, tag=TAG_PHYSICAL), Gate("cnot", (a, b))]
    if kind == "cz_fixed":
        # UZZ(-pi/4) ~ CZ Rz(-pi/2) Rz(-pi/2), UZZ(pi/4) ~ CZ Rz(pi/2) Rz(pi/2).
        minus = [Gate("cz", (a, b), (math.pi,)), rz(a, -math.pi / 2), rz(b, -math.pi / 2)]
        plus = [Gate("cz", (a, b), (math.pi,)), rz(a, math.pi / 2), rz(b, math.pi / 2)]
    else:
        # Only UZZ(-pi/4): realize UZZ(pi/4) as X_a UZZ(-pi/4) X_a.
        minus = [Gate("uzz", (a, b), (-Q,))]
        plus = [Gate("x", (a,)), Gate("uzz", (a, b), (-Q,)), Gate("x", (a,))]
    return [rx(a, -math.pi / 2)] + minus + [rx(a, 2 * phi)] + plus + [rx(a, math.pi / 2)]


def decompose_swap(a: int, b: int, kind: str) -> list[Gate]:
    """SWAP as three CNOTs, each built from one native two-qubit gate."""
    kind = native_kind(kind)
    return _cnot(a, b, kind) + _cnot(b, a, kind) + _cnot(a, b, kind)


def decompose_native(c: Circuit, native: str) -> Circuit:
    """Rewrite every UZZ and SWAP with the native two-qubit gate.

    Args:
        c: Circuit containing only UZZ, SWAP, iSWAP, CZ, single-qubit gates,
            resets and barriers.
        native: One of ``NATIVE_KINDS`` (the capitalized names such as
            ``"CZ_fixed"`` are accepted as well).

    Returns:
        Equivalent circuit up to global phase, layouts preserved.
    """
    kind = native_kind(native)
    out: list[Gate] = []
    for g in c.gates:
        if g.kind == "uzz":
            out += decompose_uzz(*g.qubits, g.params[0], kind)
        elif g.kind == "swap":
            out += decompose_swap(*g.qubits, kind)
        elif g.kind in ("iswap", "cz"):
            # State moves of the resonator protocol and CZs are kept as they are.
            out.append(g)
        elif g.is_tqg:
            raise ValueError(f"cannot decompose {g.kind}; expected UZZ or SWAP")
        else:
            out.append(g)
    return c.with_gates(out)
