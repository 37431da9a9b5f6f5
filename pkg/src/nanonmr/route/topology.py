"""Chip connectivity graphs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

KINDS = ("star", "square_grid", "linear_chain", "all_to_all")


def grid_shape(n: int) -> tuple[int, int]:
    """(rows, cols) of the near-square lattice holding ``n`` qubits."""
    cols = math.ceil(math.sqrt(n))
    rows = math.ceil(n / cols)
    return rows, cols


def snake_coordinates(n: int) -> list[tuple[int, int]]:
    """Grid coordinates of qubit ``i``, numbered along a boustrophedon path.

    Consecutive indices are always grid neighbors, so the path embeds a
    linear chain into the grid. A partial last row starts at the column where
    the path enters it.
    """
    _, cols = grid_shape(n)
    coords = []
    for i in range(n):
        r, c = divmod(i, cols)
        coords.append((r, c if r % 2 == 0 else cols - 1 - c))
    return coords


@dataclass(frozen=True)
class Topology:
    """Qubit connectivity.

    Attributes:
        kind: One of ``KINDS``.
        n_qubits: Number of physical qubits.
        hub: Central qubit of a star.
    """

    kind: str
    n_qubits: int
    hub: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown topology {self.kind!r}")
        if self.n_qubits < 1:
            raise ValueError("topology needs at least one qubit")
        if not 0 <= self.hub < self.n_qubits:
            raise ValueError("hub index out of range")

    @cached_property
    def edges(self) -> frozenset[tuple[int, int]]:
        """Coupled pairs (a, b) with a < b."""
        n = self.n_qubits
        if self.kind == "star":
            return frozenset(tuple(sorted((self.hub, q))) for q in range(n) if q != self.hub)
        if self.kind == "all_to_all":
            return frozenset((a, b) for a in range(n) for b in range(a + 1, n))
        if self.kind == "linear_chain":
            return frozenset((i, i + 1) for i in range(n - 1))
        pos = {c: i for i, c in enumerate(snake_coordinates(n))}
        out = set()
        for (r, c), i in pos.items():
            for nb in ((r + 1, c), (r, c + 1)):
                if nb in pos:
                    out.add(tuple(sorted((i, pos[nb]))))
        return frozenset(out)

    @cached_property
    def routing_edges(self) -> frozenset[tuple[int, int]]:
        """Edges used by the routing patterns; the grid is routed as its snake chain."""
        if self.kind == "square_grid":
            return frozenset((i, i + 1) for i in range(self.n_qubits - 1))
        return self.edges

    def adjacent(self, a: int, b: int) -> bool:
        return (min(a, b), max(a, b)) in self.edges

    def neighbors(self, q: int) -> list[int]:
        return sorted(b if a == q else a for a, b in self.edges if q in (a, b))

    @property
    def is_chain_like(self) -> bool:
        return self.kind in ("linear_chain", "square_grid")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "n_qubits": self.n_qubits, "hub": self.hub}
