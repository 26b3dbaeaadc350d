"""Dense linear algebra on multi-qubit states and operators.

Partial trace, partial transpose, spectra, negativity, and the rescaled
block entanglement ``E = 2 * negativity`` over a hub-versus-rest cut.
"""

from __future__ import annotations

import numpy as np

from .states import DensityMatrix, PureState, QubitPartition

NEGATIVITY_CUTOFF = 1e-10
HERMITIZE_ATOL = 1e-8


def to_density(state: PureState) -> DensityMatrix:
    """Rank-1 projector onto a pure state."""
    return DensityMatrix(state.num_qubits, np.outer(state.amplitudes, state.amplitudes.conj()))


def _as_density(rho) -> DensityMatrix:
    return to_density(rho) if isinstance(rho, PureState) else rho


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out all qubits not in ``keep``.

    The kept qubits retain their relative order; the result is a density
    matrix on ``len(keep)`` qubits.
    """
    rho = _as_density(rho)
    keep = sorted(set(keep))
    n = rho.num_qubits
    if not keep:
        raise ValueError("keep set must be non-empty")
    if keep[0] < 1 or keep[-1] > n:
        raise ValueError(f"keep indices {keep} out of range 1..{n}")
    t = rho.tensor()
    traced = 0
    for q in range(n, 0, -1):
        if q in keep:
            continue
        ax = q - 1
        cols_left = n - traced
        t = np.trace(t, axis1=ax, axis2=ax + cols_left)
        traced += 1
    d = 2 ** len(keep)
    return DensityMatrix(len(keep), t.reshape(d, d))


def partial_transpose(rho: DensityMatrix, transpose_side) -> np.ndarray:
    """Transpose the indices of ``transpose_side`` qubits; returns a raw matrix.

    The result is Hermitian with unit trace but may have negative
    eigenvalues, so it is not wrapped in :class:`DensityMatrix`.
    """
    rho = _as_density(rho)
    n = rho.num_qubits
    side = sorted(set(transpose_side))
    if side and (side[0] < 1 or side[-1] > n):
        raise ValueError(f"transpose indices {side} out of range 1..{n}")
    t = rho.tensor()
    perm = list(range(2 * n))
    for q in side:
        ax = q - 1
        perm[ax], perm[ax + n] = perm[ax + n], perm[ax]
    d = rho.dim
    return t.transpose(perm).reshape(d, d)


def eigen_spectrum(m: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    Inputs with asymmetry below 1e-8 are symmetrized as (M + M^dag)/2;
    anything worse is rejected.
    """
    m = np.asarray(m, dtype=np.complex128)
    asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if asym > HERMITIZE_ATOL:
        raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
    if asym > 0:
        m = (m + m.conj().T) / 2
    return np.linalg.eigvalsh(m)[::-1]


def negativity(rho, partition: QubitPartition) -> float:
    """Absolute sum of the negative eigenvalues of the partial transpose.

    Eigenvalues above ``-NEGATIVITY_CUTOFF`` are treated as numerical noise.
    """
    pt = partial_transpose(_as_density(rho), partition.side_b)
    w = eigen_spectrum(pt)
    return float(-w[w < -NEGATIVITY_CUTOFF].sum())


def schmidt_values(state: PureState, partition: QubitPartition) -> np.ndarray:
    """Squared Schmidt coefficients of a pure state across a bipartition."""
    axes_a = tuple(q - 1 for q in partition.side_a)
    axes_b = tuple(q - 1 for q in partition.side_b)
    mat = state.tensor().transpose(axes_a + axes_b).reshape(
        2 ** len(axes_a), 2 ** len(axes_b)
    )
    s = np.linalg.svd(mat, compute_uv=False)
    return s**2


def pure_negativity(state: PureState, partition: QubitPartition) -> float:
    """Negativity of a pure state from its Schmidt values.

    Equals ``sum_{i<j} sqrt(lam_i lam_j)``, i.e. ``((sum sqrt(lam))**2 - 1)/2``.
    """
    lam = schmidt_values(state, partition)
    root_sum = np.sqrt(np.clip(lam, 0.0, None)).sum()
    return float(max(0.0, (root_sum**2 - 1.0) / 2.0))


def block_entanglement(rho, hub: int = 1) -> float:
    """Rescaled entanglement ``2 * negativity`` over the hub : rest cut."""
    n = rho.num_qubits
    if n < 2:
        raise ValueError("block entanglement needs at least two qubits")
    part = QubitPartition.hub_vs_rest(n, hub)
    if isinstance(rho, PureState):
        return 2.0 * pure_negativity(rho, part)
    return 2.0 * negativity(rho, part)


def pair_entanglement(rho, qubit_a: int, qubit_b: int) -> float:
    """Block entanglement of the reduced two-qubit state on (a, b)."""
    red = partial_trace(_as_density(rho), (qubit_a, qubit_b))
    hub_pos = 1 if qubit_a < qubit_b else 2
    return block_entanglement(red, hub=hub_pos)
