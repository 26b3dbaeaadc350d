"""Block and regionally localized entanglement for multi-qubit states."""

from ._optimize import OptimizerConfig
from .families import FamilySpec
from .linalg import (
    block_entanglement,
    eigen_spectrum,
    negativity,
    pair_entanglement,
    partial_trace,
    partial_transpose,
    schmidt_values,
    to_density,
)
from .localization import (
    BranchEnsemble,
    MeasurementPlan,
    average_entanglement,
    ble,
    local_projectors,
    measure,
    pauli_le,
    rle,
    total_rle,
)
from .noise import PhaseFlipChannel, apply_channel, branch_probabilities, f_factor
from .oracles import BoundLine, bound_lines, monogamy_score
from .states import DensityMatrix, InvariantViolation, PureState, QubitPartition

__all__ = [
    "BoundLine",
    "BranchEnsemble",
    "DensityMatrix",
    "FamilySpec",
    "InvariantViolation",
    "MeasurementPlan",
    "OptimizerConfig",
    "PhaseFlipChannel",
    "PureState",
    "QubitPartition",
    "apply_channel",
    "average_entanglement",
    "ble",
    "block_entanglement",
    "bound_lines",
    "branch_probabilities",
    "eigen_spectrum",
    "f_factor",
    "local_projectors",
    "measure",
    "monogamy_score",
    "negativity",
    "pair_entanglement",
    "partial_trace",
    "partial_transpose",
    "pauli_le",
    "rle",
    "schmidt_values",
    "to_density",
    "total_rle",
]

__version__ = "0.1.0"
