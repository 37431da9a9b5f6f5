"""Topology-aware routing, native-gate decomposition and gate-count closed forms."""

from .counts import (
    closed_form_counts,
    gate_error_bound,
    grid_swaps,
    star_swaps,
    swap_savings,
    tqg_depth_form,
)
from .native import NATIVE_KINDS, decompose_native, decompose_swap, decompose_uzz, native_kind
from .resonator import resonator_protocol_wrap
from .router import check_adjacency, default_layout, interaction_order, route
from .topology import KINDS, Topology, grid_shape, snake_coordinates

__all__ = [
    "KINDS", "NATIVE_KINDS", "Topology", "check_adjacency", "closed_form_counts",
    "decompose_native", "decompose_swap", "decompose_uzz", "default_layout",
    "gate_error_bound", "grid_shape", "grid_swaps", "interaction_order", "native_kind",
    "resonator_protocol_wrap", "route", "snake_coordinates", "star_swaps", "swap_savings",
    "tqg_depth_form",
]
