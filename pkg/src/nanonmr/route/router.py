"""Pattern-driven SWAP routing.

The router executes gates in dependency order and only reorders gates that
commute (disjoint supports, or both diagonal on every shared qubit). When no
ready two-qubit gate acts on coupled qubits, it inserts the next SWAP of the
topology's pattern:

* star: the hub exchanges its state with the external qubit holding the
  logical qubit needed next, so the hub visits the nuclei one after another;
* chain or snake-embedded grid, noninteracting: the NV starts on the second
  qubit, interacts with both neighbors and is swapped one step towards its
  next partner;
* chain or snake-embedded grid, interacting: odd-even transposition rounds,
  applied lazily one SWAP at a time.

SWAPs are emitted as ``swap`` gates and counted as three two-qubit gates.
"""

from __future__ import annotations

import heapq
from typing import Iterator, Sequence

from ..circuit import Circuit, Gate, swap
from .topology import Topology


def default_layout(topo: Topology, interacting: bool, n_logical: int | None = None) -> tuple[int, ...]:
    """Initial physical position of each logical qubit (logical 0 is the NV)."""
    n = topo.n_qubits if n_logical is None else n_logical
    if n > topo.n_qubits:
        raise ValueError(f"{n} logical qubits do not fit on {topo.n_qubits} physical qubits")
    if topo.kind == "star":
        others = [p for p in range(topo.n_qubits) if p != topo.hub]
        return tuple([topo.hub] + others[: n - 1])
    if topo.is_chain_like and not interacting and n >= 2:
        return tuple([1, 0] + list(range(2, n)))
    return tuple(range(n))


def _dependencies(gates: Sequence[Gate], n: int) -> list[list[int]]:
    """Successor lists of the gate dependency graph."""
    succ: list[list[int]] = [[] for _ in gates]
    last_nondiag: list[int | None] = [None] * n
    diag_since: list[list[int]] = [[] for _ in range(n)]
    for i, g in enumerate(gates):
        qs = g.qubits if g.qubits else tuple(range(n))
        preds = set()
        diag = g.is_diagonal
        for q in qs:
            if last_nondiag[q] is not None:
                preds.add(last_nondiag[q])
            if not diag:
                preds.update(diag_since[q])
        for p in preds:
            succ[p].append(i)
        for q in qs:
            if diag:
                diag_since[q].append(i)
            else:
                last_nondiag[q] = i
                diag_since[q] = []
    return succ


class _OddEven:
    """Lazy odd-even transposition swaps on a chain, even pairs first."""

    def __init__(self, n: int):
        self.n = n
        self.round = 0
        self.it = self._pairs()

    def _pairs(self) -> Iterator[tuple[int, int]]:
        while True:
            start = self.round % 2
            pairs = [(i, i + 1) for i in range(start, self.n - 1, 2)]
            self.round += 1
            yield from pairs

    def next(self, *_) -> tuple[int, int]:
        return next(self.it)


def route(
    c: Circuit,
    topo: Topology,
    interacting: bool,
    initial_layout: Sequence[int] | None = None,
    max_swaps: int | None = None,
) -> Circuit:
    """Map a logical circuit onto ``topo`` by inserting SWAPs.

    Args:
        c: Logical circuit; qubit 0 is the NV center.
        topo: Target connectivity.
        interacting: Selects the chain pattern (odd-even if True, NV walk
            otherwise) and the default layout.
        initial_layout: Physical position of each logical qubit. Defaults to
            ``default_layout``.
        max_swaps: Safety cap; defaults to a generous multiple of the
            circuit size.

    Returns:
        Physical circuit on ``topo.n_qubits`` qubits with ``initial_layout``
        and ``final_layout`` set.

    Raises:
        ValueError: When the pattern cannot make a required pair adjacent.
    """
    n_log = c.n_qubits
    n_phys = topo.n_qubits
    layout = list(default_layout(topo, interacting, n_log) if initial_layout is None else initial_layout)
    if len(layout) != n_log or len(set(layout)) != n_log:
        raise ValueError("initial layout must place every logical qubit on a distinct position")
    init = tuple(layout)
    where = {p: l for l, p in enumerate(layout)}  # physical -> logical
    edges = topo.routing_edges
    gates = c.gates
    succ = _dependencies(gates, n_log)
    indeg = [0] * len(gates)
    for s in succ:
        for j in s:
            indeg[j] += 1
    heap = [i for i, d in enumerate(indeg) if d == 0]
    heapq.heapify(heap)
    remaining_tqg = [0] * n_log
    for g in gates:
        if g.is_tqg:
            for q in g.qubits:
                remaining_tqg[q] += 1
    out: list[Gate] = []
    odd_even = _OddEven(n_phys) if topo.is_chain_like and interacting else None
    cap = max_swaps if max_swaps is not None else 4 * (n_phys**2 + 1) * (len(gates) + 1)
    n_swaps = 0

    def executable(g: Gate) -> bool:
        if not g.is_tqg:
            return True
        a, b = layout[g.qubits[0]], layout[g.qubits[1]]
        return (min(a, b), max(a, b)) in edges

    def apply_swap(pa: int, pb: int):
        la, lb = where.get(pa), where.get(pb)
        out.append(swap(pa, pb))
        if la is not None:
            layout[la] = pb
        if lb is not None:
            layout[lb] = pa
        where.pop(pa, None)
        where.pop(pb, None)
        if la is not None:
            where[pb] = la
        if lb is not None:
            where[pa] = lb

    def choose_swap(blocked: list[int]) -> tuple[int, int]:
        pending = [gates[i] for i in blocked if gates[i].is_tqg]
        if not pending:
            raise ValueError("routing stalled without pending two-qubit gates")
        if odd_even is not None:
            return odd_even.next()
        if topo.kind == "star":
            g = pending[0]
            target = min(g.qubits)
            return (topo.hub, layout[target])
        if topo.is_chain_like:
            best = min(pending, key=lambda g: abs(layout[g.qubits[0]] - layout[g.qubits[1]]))
            a, b = best.qubits
            mover, partner = (a, b) if (remaining_tqg[a], -a) >= (remaining_tqg[b], -b) else (b, a)
            pm, pp = layout[mover], layout[partner]
            step = 1 if pp > pm else -1
            return tuple(sorted((pm, pm + step)))
        raise ValueError(f"no routing pattern for topology {topo.kind!r} with this circuit")

    done = 0
    while done < len(gates):
        progressed = False
        blocked: list[int] = []
        while heap:
            i = heapq.heappop(heap)
            g = gates[i]
            if not executable(g):
                blocked.append(i)
                continue
            if g.qubits:
                out.append(g.on(*(layout[q] for q in g.qubits)))
            else:
                out.append(g.on(*sorted(layout)))
            if g.is_tqg:
                for q in g.qubits:
                    remaining_tqg[q] -= 1
            done += 1
            progressed = True
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        for i in blocked:
            heapq.heappush(heap, i)
        if done < len(gates) and not progressed:
            if n_swaps >= cap:
                raise ValueError("routing did not converge; is the gate order compatible with the pattern?")
            apply_swap(*choose_swap(sorted(blocked)))
            n_swaps += 1
    return Circuit(n_phys, tuple(out), None, init, tuple(layout))


def interaction_order(topo: Topology, interacting: bool, n_logical: int | None = None) -> list[tuple[int, int]]:
    """Logical qubit pairs in the order the routing pattern makes them adjacent.

    Passing this as ``pair_order`` to the circuit synthesis lets the router
    follow its pattern without extra SWAPs.
    """
    n = topo.n_qubits if n_logical is None else n_logical
    nv_pairs = [(0, k) for k in range(1, n)]
    if not interacting:
        return nv_pairs
    if topo.kind == "all_to_all":
        return nv_pairs + [(a, b) for a in range(1, n) for b in range(a + 1, n)]
    if topo.kind == "star":
        return nv_pairs + [(a, b) for a in range(1, n - 1) for b in range(a + 1, n)]
    if topo.is_chain_like:
        layout = list(default_layout(topo, True, n))
        at = {p: l for l, p in enumerate(layout)}
        seen: list[tuple[int, int]] = []
        seen_set = set()

        def visit(pa: int, pb: int):
            if pa in at and pb in at:
                pair = tuple(sorted((at[pa], at[pb])))
                if pair not in seen_set:
                    seen_set.add(pair)
                    seen.append(pair)

        for p in range(topo.n_qubits - 1):
            visit(p, p + 1)
        oe = _OddEven(topo.n_qubits)
        total = n * (n - 1) // 2
        guard = 0
        while len(seen) < total:
            pa, pb = oe.next()
            la, lb = at.get(pa), at.get(pb)
            at.pop(pa, None)
            at.pop(pb, None)
            if la is not None:
                at[pb] = la
            if lb is not None:
                at[pa] = lb
            for q in (pa - 1, pa, pb):
                if 0 <= q < topo.n_qubits - 1:
                    visit(q, q + 1)
            guard += 1
            if guard > 4 * topo.n_qubits**2:
                raise ValueError("odd-even pattern failed to cover all pairs")
        return seen
    raise ValueError(f"unknown topology {topo.kind!r}")


def check_adjacency(c: Circuit, topo: Topology) -> list[int]:
    """Indices of two-qubit gates acting on uncoupled qubits."""
    return [i for i, g in enumerate(c.gates) if g.is_tqg and not topo.adjacent(*g.qubits)]
