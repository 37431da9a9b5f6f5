"""Per-nucleus frame rotation that aligns each hyperfine vector with z.

With the hyperfine vector along z, each NV-nucleus interaction needs a single
ZZ exponential instead of three. The frame change is undone by a
counter-rotation on each nucleus before measurement.
"""

from __future__ import annotations

import math

import numpy as np

from ..circuit import Gate, rxy
from ..spinsys import SpinSystem


def rodrigues(v: np.ndarray, axis: np.ndarray, theta: float) -> np.ndarray:
    """Rotate ``v`` by ``theta`` about the unit vector ``axis``."""
    v = np.asarray(v, dtype=float)
    k = np.asarray(axis, dtype=float)
    return v * math.cos(theta) + np.cross(k, v) * math.sin(theta) + k * (k @ v) * (1 - math.cos(theta))


def alignment_rotation(a: np.ndarray) -> tuple[float, float]:
    """Angle theta and azimuth phi of the axis k = (cos phi, sin phi, 0) mapping ``a`` onto +z."""
    norm = float(np.linalg.norm(a))
    if norm == 0.0:
        return 0.0, -math.pi / 2
    theta = math.atan2(math.hypot(a[0], a[1]), a[2])
    phi = -math.pi / 2 + math.atan2(a[1], a[0])
    return theta, phi


def rotational_optimize(sys: SpinSystem) -> tuple[SpinSystem, list[Gate]]:
    """Rotate every nuclear frame so that its hyperfine vector points along z.

    Args:
        sys: System with one NV and no internuclear couplings.

    Returns:
        The rotated system (hyperfine vectors (0, 0, |A_k|), Zeeman vectors
        rotated alike) and one counter-rotation gate per nucleus, to be
        applied before measurement.

    Raises:
        ValueError: If internuclear couplings are present or M != 1.
    """
    if np.any(sys.g != 0):
        raise ValueError("rotational optimization requires noninteracting nuclei (g = 0)")
    if sys.M != 1:
        raise ValueError("rotational optimization supports a single NV center")
    A = np.array(sys.A)
    zee = sys.zeeman_vectors()
    gates = []
    for k in range(sys.N):
        theta, phi = alignment_rotation(A[0, k])
        axis = np.array([math.cos(phi), math.sin(phi), 0.0])
        # Exact image of the rotation; avoids rounding residue in x and y.
        A[0, k] = (0.0, 0.0, float(np.linalg.norm(A[0, k])))
        zee[k] = rodrigues(zee[k], axis, theta)
        # Spin rotation R = exp(-i theta/2 k.sigma); measurement needs R^dagger.
        gates.append(rxy(sys.M + k, phi, -theta))
    rot = sys.replace(A=A, zeeman=zee)
    return rot, gates
