"""Circuit synthesis: Trotter steps, pulse sequences, qDRIFT, frame rotation."""

from .drive import Drive, TrotterPlan
from .protocol import build_protocol, cycle_time, nv_init_gates
from .pulsed import effective_coupling, fourier_cos_coefficient, pulsed_duration, pulsed_schedule
from .qdrift import qdrift_error_bound, qdrift_indices, qdrift_sample
from .rotation import alignment_rotation, rodrigues, rotational_optimize
from .trotter import BASIS_CHANGE, pauli_exponential, step_blocks, trotter_step
from .zyz import zyz_decompose, zyz_gates, zyz_matrix

__all__ = [
    "BASIS_CHANGE", "Drive", "TrotterPlan", "alignment_rotation", "build_protocol",
    "cycle_time", "effective_coupling", "fourier_cos_coefficient", "nv_init_gates",
    "pauli_exponential", "pulsed_duration", "pulsed_schedule", "qdrift_error_bound",
    "qdrift_indices", "qdrift_sample", "rodrigues", "rotational_optimize", "step_blocks",
    "trotter_step", "zyz_decompose", "zyz_gates", "zyz_matrix",
]
