"""Closed-form gate counts per Trotter step and the accumulated gate error."""

from __future__ import annotations

from fractions import Fraction as F

from .topology import Topology

# (N_TQG, N_SQG) polynomials in n per (topology, interacting), as coefficient
# triples (a, b, c) of a n^2 + b n + c.
_TABLE = {
    ("all_to_all", False): ((0, 1, -1), (0, F(5, 2), 2)),
    ("star", False): ((0, 1, -1), (0, F(5, 2), 2)),
    ("square_grid", False): ((0, 4, -4), (0, F(21, 2), F(-47, 2))),
    ("all_to_all", True): ((F(3, 2), F(-3, 2), 0), (4, F(-9, 2), F(7, 2))),
    ("star", True): ((F(3, 2), F(3, 2), -6), (4, F(7, 2), F(-25, 2))),
    ("square_grid", True): ((3, -6, 3), (8, F(-33, 2), F(11, 2))),
}


def _kind(topo: Topology | str) -> str:
    kind = topo.kind if isinstance(topo, Topology) else str(topo)
    # The chain routes exactly like the snake-embedded grid.
    return "square_grid" if kind == "linear_chain" else kind


def _poly(coeffs, n: int) -> F:
    a, b, c = (F(x) for x in coeffs)
    return a * n * n + b * n + c


def closed_form_counts(n: int, interacting: bool, topo: Topology | str) -> dict[str, F]:
    """Tabulated TQG and SQG counts for one Trotter step on ``n`` qubits.

    Noninteracting counts assume the rotational frame optimization (one ZZ
    per nucleus). Values are exact fractions; some SQG counts are
    half-integers for odd n.
    """
    if n < 3:
        raise ValueError("closed forms need n >= 3")
    key = (_kind(topo), bool(interacting))
    if key not in _TABLE:
        raise ValueError(f"no closed form for {key}")
    tqg, sqg = _TABLE[key]
    return {"N_TQG": _poly(tqg, n), "N_SQG": _poly(sqg, n)}


def star_swaps(n: int, interacting: bool) -> int:
    return n - 2 if interacting else 0


def grid_swaps(n: int, interacting: bool) -> F:
    """SWAPs of the grid protocol implied by the tabulated TQG counts."""
    if interacting:
        return F((n - 1) * (n - 2), 2)
    grid = closed_form_counts(n, False, "square_grid")["N_TQG"]
    star = closed_form_counts(n, False, "star")["N_TQG"]
    return (grid - star) / 3


def swap_savings(n: int, interacting: bool) -> F:
    """Fraction of grid SWAPs saved by the star pattern, 1 - star/grid."""
    if n < 3:
        raise ValueError("savings need n >= 3")
    g = grid_swaps(n, interacting)
    if g == 0:
        raise ValueError(f"grid needs no SWAPs at n={n}; savings undefined")
    return 1 - F(star_swaps(n, interacting)) / g


def tqg_depth_form(n: int, topo: Topology | str) -> int:
    """TQG depth of one interacting Trotter step: star (3/2)n^2+(3/2)n-6, grid 6n."""
    if n < 3:
        raise ValueError("depth closed forms need n >= 3")
    kind = _kind(topo)
    if kind == "star":
        return int(_poly((F(3, 2), F(3, 2), -6), n))
    if kind == "square_grid":
        return 6 * n
    raise ValueError(f"no depth closed form for {kind}")


def gate_error_bound(N_TQG: int, N_SQG: int, eps_TQG: float, eps_SQG: float) -> float:
    """1 - (1 - eps_TQG)^N_TQG (1 - eps_SQG)^N_SQG."""
    for e in (eps_TQG, eps_SQG):
        if not 0.0 <= e <= 1.0:
            raise ValueError("error rates must lie in [0, 1]")
    return 1.0 - (1.0 - eps_TQG) ** N_TQG * (1.0 - eps_SQG) ** N_SQG
