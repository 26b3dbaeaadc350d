"""Local projective measurements and the localizable-entanglement optimizers.

Block localizable entanglement (``ble``) measures an auxiliary set and
concentrates entanglement across the hub : rest cut of the remaining block;
regionally localized entanglement (``rle``) measures everything except the
hub and one partner qubit.  Both maximize the average post-measurement
entanglement over all products of single-qubit rank-1 projective bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ._optimize import (
    PRODUCT_FLOOR,
    AverageEntanglementObjective,
    OptimizationResult,
    OptimizerConfig,
    branch_blocks_at,
    maximize_average_entanglement,
    measurement_bases,
    pauli_angle_vector,
)
from .linalg import block_entanglement, pair_entanglement
from .states import DensityMatrix, PureState

BRANCH_PRUNE = 1e-12
PAULI_GUARD = 12


@dataclass
class MeasurementPlan:
    """Per-qubit measurement bases for an ordered set of measured qubits.

    ``mode='angles'`` takes one (theta, phi) pair per qubit with theta in
    [0, pi] and phi in [0, 2 pi); ``mode='pauli'`` takes one axis from
    {'x','y','z'} per qubit.
    """

    measured_qubits: tuple
    mode: str = "angles"
    angles: np.ndarray | None = None
    pauli_axes: tuple | None = None

    def __post_init__(self):
        self.measured_qubits = tuple(self.measured_qubits)
        if len(set(self.measured_qubits)) != len(self.measured_qubits):
            raise ValueError("measured qubits repeat")
        if self.mode == "angles":
            if self.angles is None:
                raise ValueError("angles mode needs an angle array")
            self.angles = np.asarray(self.angles, dtype=float).reshape(
                len(self.measured_qubits), 2
            )
            th, ph = self.angles[:, 0], self.angles[:, 1]
            if np.any(th < 0) or np.any(th > np.pi):
                raise ValueError("theta out of [0, pi]")
            if np.any(ph < 0) or np.any(ph >= 2 * np.pi):
                raise ValueError("phi out of [0, 2 pi)")
        elif self.mode == "pauli":
            if self.pauli_axes is None or len(self.pauli_axes) != len(self.measured_qubits):
                raise ValueError("pauli mode needs one axis per measured qubit")
            if any(a not in ("x", "y", "z") for a in self.pauli_axes):
                raise ValueError("pauli axes must be in {'x','y','z'}")
            self.pauli_axes = tuple(self.pauli_axes)
        else:
            raise ValueError(f"unknown mode {self.mode!r}")

    def angle_vector(self) -> np.ndarray:
        """Flat (theta, phi, theta, phi, ...) vector in sorted-qubit order."""
        order = np.argsort(self.measured_qubits)
        if self.mode == "pauli":
            axes = tuple(self.pauli_axes[i] for i in order)
            return pauli_angle_vector(axes)
        return self.angles[order].reshape(-1)

    def sorted_qubits(self) -> tuple:
        return tuple(sorted(self.measured_qubits))


@dataclass
class BranchEnsemble:
    """Post-measurement ensemble ``{(p_k, state_k)}`` on the unmeasured qubits.

    ``kept_qubits`` maps branch-register positions back to original labels.
    """

    branches: list
    kept_qubits: tuple

    def __post_init__(self):
        total = sum(p for p, _ in self.branches)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"branch probabilities sum to {total}, not 1")

    def probabilities(self) -> np.ndarray:
        return np.array([p for p, _ in self.branches])

    def branch_position(self, qubit: int) -> int:
        """1-based position of an original qubit label inside the branches."""
        try:
            return self.kept_qubits.index(qubit) + 1
        except ValueError:
            raise ValueError(f"qubit {qubit} was measured away") from None


def local_projectors(plan: MeasurementPlan) -> np.ndarray:
    """Rank-1 projector factors, shape (K, outcome, 2, 2), sorted-qubit order."""
    U = measurement_bases(plan.angle_vector())
    return np.einsum("kos,kot->kost", U, np.conj(U))


def outcome_projector(projectors: np.ndarray, outcome_bits) -> np.ndarray:
    """Tensor product of one projector per measured qubit (test utility)."""
    P = projectors[0, outcome_bits[0]]
    for j, b in enumerate(outcome_bits[1:], start=1):
        P = np.kron(P, projectors[j, b])
    return P


def measure(state, plan: MeasurementPlan) -> BranchEnsemble:
    """Apply a measurement plan and collect the normalized branch ensemble.

    Pure inputs yield pure branches.  Branches with probability below
    1e-12 are dropped before normalization.
    """
    n = state.num_qubits
    measured = plan.sorted_qubits()
    if not measured:
        raise ValueError("measure at least one qubit")
    if len(measured) >= n:
        raise ValueError("at least one qubit must stay unmeasured")
    kept = tuple(q for q in range(1, n + 1) if q not in set(measured))
    blocks = branch_blocks_at(state, measured, plan.angle_vector())
    branches = []
    if isinstance(state, PureState):
        for row in blocks:
            p = float(np.vdot(row, row).real)
            if p < BRANCH_PRUNE:
                continue
            branches.append((p, PureState(len(kept), row / np.sqrt(p))))
    else:
        for blk in blocks:
            p = float(np.trace(blk).real)
            if p < BRANCH_PRUNE:
                continue
            branches.append((p, DensityMatrix(len(kept), blk / p)))
    total = sum(p for p, _ in branches)
    branches = [(p / total, s) for p, s in branches]
    return BranchEnsemble(branches, kept)


def average_entanglement(ensemble: BranchEnsemble, hub: int) -> float:
    """Probability-weighted block entanglement of the branches, hub : rest."""
    pos = ensemble.branch_position(hub)
    return float(
        sum(p * block_entanglement(s, hub=pos) for p, s in ensemble.branches)
    )


def _resolve_config(config: OptimizerConfig | None) -> OptimizerConfig:
    return config if config is not None else OptimizerConfig()


def ble(
    state,
    s0,
    hub: int = 1,
    config: OptimizerConfig | None = None,
    return_details: bool = False,
):
    """Block localizable entanglement: measure ``s0``, maximize hub : rest.

    With an empty ``s0`` this is the plain block entanglement of the state.
    """
    s0 = tuple(sorted(s0))
    n = state.num_qubits
    if hub in s0:
        raise ValueError("hub cannot be measured")
    if n - len(s0) < 2:
        raise ValueError("need at least two unmeasured qubits")
    if not s0:
        value = block_entanglement(state, hub=hub)
        return (value, None) if return_details else value
    objective = AverageEntanglementObjective(state, s0, hub=hub)
    result = maximize_average_entanglement(objective, _resolve_config(config))
    return (result.value, result) if return_details else result.value


def rle(
    state,
    partner: int,
    hub: int = 1,
    config: OptimizerConfig | None = None,
    return_details: bool = False,
):
    """Regionally localized entanglement of the (hub, partner) region.

    Measures all other qubits; for a two-qubit register this is the plain
    pair entanglement.
    """
    n = state.num_qubits
    if partner == hub:
        raise ValueError("partner must differ from the hub")
    for q in (hub, partner):
        if not 1 <= q <= n:
            raise ValueError(f"qubit {q} out of range 1..{n}")
    if n == 2:
        value = block_entanglement(state, hub=1)
        return (value, None) if return_details else value
    measured = tuple(q for q in range(1, n + 1) if q not in (hub, partner))
    objective = AverageEntanglementObjective(state, measured, hub=hub, partner=partner)
    result = maximize_average_entanglement(objective, _resolve_config(config))
    return (result.value, result) if return_details else result.value


def total_rle(
    state,
    hub: int = 1,
    region=None,
    config: OptimizerConfig | None = None,
):
    """Total regionally localized entanglement and its per-partner breakdown.

    ``region`` defaults to the whole register; partners are all region
    qubits except the hub.  Returns ``(total, {partner: value})``.
    """
    n = state.num_qubits
    region = tuple(sorted(region)) if region is not None else tuple(range(1, n + 1))
    if hub not in region:
        raise ValueError("hub must belong to the region")
    if len(region) < 2:
        raise ValueError("region needs at least two qubits")
    per_partner = {}
    for i in region:
        if i == hub:
            continue
        per_partner[i] = rle(state, i, hub=hub, config=config)
    return float(sum(per_partner.values())), per_partner


def pauli_le(
    state,
    measured,
    hub: int = 1,
    partner: int | None = None,
    guard: int = PAULI_GUARD,
    return_axes: bool = False,
):
    """Exhaustive maximum over all Pauli-axis assignments on the measured set.

    A restricted search, so always a lower bound on ``ble``/``rle``.
    """
    measured = tuple(sorted(measured))
    if len(measured) > guard:
        raise ValueError(
            f"{len(measured)} measured qubits exceed the 3^K enumeration guard {guard}"
        )
    if not measured:
        value = (
            block_entanglement(state, hub=hub)
            if partner is None
            else pair_entanglement(state, hub, partner)
        )
        return (value, ()) if return_axes else value
    objective = AverageEntanglementObjective(state, measured, hub=hub, partner=partner)
    best, best_axes = -np.inf, None
    assignments = list(product("zxy", repeat=len(measured)))
    X = np.array([pauli_angle_vector(a) for a in assignments])
    chunk = max(1, 4096 // max(1, 2 ** len(measured)))
    for lo in range(0, len(X), chunk):
        vals = objective(X[lo : lo + chunk])
        j = int(np.argmax(vals))
        if vals[j] > best:
            best = float(vals[j])
            best_axes = assignments[lo + j]
    if best < PRODUCT_FLOOR:
        best = 0.0
    return (best, best_axes) if return_axes else best
