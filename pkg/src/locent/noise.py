"""Local phase-flip channels in operator-sum form.

Each target qubit is dephased independently with Kraus operators
``{sqrt(p0) I, sqrt(p1) Z}``.  The Markovian channel has
``p0 = 1 - q/2``; the non-Markovian variant reweights the pair through the
memory parameter ``eta``.  Off-diagonal elements between basis states
differing on ``d`` target qubits shrink by ``(1 - f)**d`` with
``f = q [1 + eta (1 - q/2)]``; ``f`` may exceed 1 at strong coupling, in
which case ``1 - f`` flips sign and coherences revive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import to_density
from .states import DensityMatrix, PureState


def _check_params(q: float, eta: float):
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"noise strength q={q} out of [0, 1]")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"non-Markovianity eta={eta} out of [0, 1]")


def branch_probabilities(q: float, eta: float = 0.0) -> tuple:
    """Kraus weights (p0, p1) of the single-qubit phase flip."""
    _check_params(q, eta)
    if eta == 0.0:
        return 1.0 - q / 2.0, q / 2.0
    p0 = (1.0 - q / 2.0) * (1.0 - eta * q / 2.0)
    p1 = (1.0 + eta * (1.0 - q / 2.0)) * q / 2.0
    return p0, p1


def f_factor(q: float, eta: float = 0.0) -> float:
    """Coherence-decay factor ``q [1 + eta (1 - q/2)]``; equals q when eta=0."""
    _check_params(q, eta)
    return q * (1.0 + eta * (1.0 - q / 2.0))


@dataclass(frozen=True)
class PhaseFlipChannel:
    """Independent phase flips of strength ``q`` on ``target_qubits``.

    ``target_qubits=None`` dephases every qubit of the input register.
    """

    q: float
    eta: float = 0.0
    target_qubits: tuple | None = None

    def __post_init__(self):
        _check_params(self.q, self.eta)
        if self.target_qubits is not None:
            object.__setattr__(self, "target_qubits", tuple(sorted(self.target_qubits)))

    def probabilities(self) -> tuple:
        return branch_probabilities(self.q, self.eta)

    def kraus_operators(self) -> list:
        p0, p1 = self.probabilities()
        I = np.eye(2, dtype=np.complex128)
        Z = np.diag([1.0, -1.0]).astype(np.complex128)
        return [np.sqrt(p0) * I, np.sqrt(p1) * Z]


def apply_channel(channel: PhaseFlipChannel, state) -> DensityMatrix:
    """Send a state through the channel; always returns a density matrix.

    Channels on distinct qubits commute, so the 2^|targets| Kraus products
    are expanded one qubit at a time.
    """
    rho = to_density(state) if isinstance(state, PureState) else state
    n = rho.num_qubits
    targets = channel.target_qubits or tuple(range(1, n + 1))
    for t in targets:
        if not 1 <= t <= n:
            raise ValueError(f"target qubit {t} out of range 1..{n}")
    p0, p1 = channel.probabilities()
    m = rho.matrix.copy()
    d = rho.dim
    idx = np.arange(d)
    for t in targets:
        bit = (idx >> (n - t)) & 1
        flip = np.where(bit[:, None] != bit[None, :], -1.0, 1.0)
        m = p0 * m + p1 * (flip * m)
    return DensityMatrix(n, m)
