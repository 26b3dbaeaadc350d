"""Quantum state containers for a register of qubits.

Conventions used throughout the package:

* Qubits are labeled ``1 .. num_qubits``.  Qubit 1 is the most-significant
  bit of the computational-basis index, so ``|q1 q2 ... qN>`` maps to the
  integer ``q1*2**(N-1) + ... + qN``.
* ``|0>`` is the *excited* level (sigma-z eigenvalue +1); a basis state with
  ``n`` qubits in ``|0>`` has total magnetization ``m = 2n - N``.
* Amplitude vectors are normalized, density matrices are Hermitian with
  unit trace; both are validated at construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

NORM_ATOL = 1e-10
HERMITICITY_ATOL = 1e-10
PSD_ATOL = 1e-9


class InvariantViolation(ValueError):
    """A state or operator failed one of its numerical invariants."""


@dataclass
class PureState:
    """Complex amplitude vector over an ordered qubit register."""

    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.complex128)
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise InvariantViolation(
                f"amplitude vector has length {self.amplitudes.shape}, "
                f"expected ({2**self.num_qubits},)"
            )
        norm2 = float(np.vdot(self.amplitudes, self.amplitudes).real)
        if abs(norm2 - 1.0) > NORM_ATOL:
            raise InvariantViolation(f"squared norm {norm2} deviates from 1")

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit (axis 0 = qubit 1)."""
        return self.amplitudes.reshape((2,) * self.num_qubits)

    def fidelity(self, other: "PureState") -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)

    def to_json_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "amplitudes": [[float(a.real), float(a.imag)] for a in self.amplitudes],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "PureState":
        amps = np.array([complex(re, im) for re, im in d["amplitudes"]])
        return cls(int(d["num_qubits"]), amps)


@dataclass
class DensityMatrix:
    """Hermitian, unit-trace operator on the register."""

    num_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if self.num_qubits < 1:
            raise ValueError(f"num_qubits must be >= 1, got {self.num_qubits}")
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        d = 2**self.num_qubits
        if self.matrix.shape != (d, d):
            raise InvariantViolation(
                f"matrix has shape {self.matrix.shape}, expected ({d}, {d})"
            )
        asym = np.max(np.abs(self.matrix - self.matrix.conj().T))
        if asym > HERMITICITY_ATOL:
            raise InvariantViolation(f"matrix is non-Hermitian (asymmetry {asym:.3e})")
        tr = complex(np.trace(self.matrix))
        if abs(tr - 1.0) > NORM_ATOL:
            raise InvariantViolation(f"trace {tr} deviates from 1")
        lo = float(np.linalg.eigvalsh(self.matrix).min())
        if lo < -PSD_ATOL:
            raise InvariantViolation(f"negative eigenvalue {lo:.3e} below tolerance")

    @property
    def dim(self) -> int:
        return 2**self.num_qubits

    def tensor(self) -> np.ndarray:
        """Matrix reshaped to one axis per qubit per side (row axes first)."""
        return self.matrix.reshape((2,) * (2 * self.num_qubits))

    def to_json_dict(self) -> dict:
        return {
            "num_qubits": self.num_qubits,
            "matrix": [
                [[float(v.real), float(v.imag)] for v in row] for row in self.matrix
            ],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "DensityMatrix":
        m = np.array([[complex(re, im) for re, im in row] for row in d["matrix"]])
        return cls(int(d["num_qubits"]), m)


@dataclass(frozen=True)
class QubitPartition:
    """Bipartition of the register into two disjoint, complete index sets."""

    num_qubits: int
    side_a: tuple = field(default=())
    side_b: tuple = field(default=())

    def __post_init__(self):
        a, b = tuple(self.side_a), tuple(self.side_b)
        object.__setattr__(self, "side_a", a)
        object.__setattr__(self, "side_b", b)
        seen = set(a) | set(b)
        if len(a) + len(b) != len(seen):
            raise ValueError("partition sides overlap or repeat indices")
        if seen != set(range(1, self.num_qubits + 1)):
            raise ValueError(
                f"partition {a} | {b} does not cover qubits 1..{self.num_qubits}"
            )
        if not a or not b:
            raise ValueError("both partition sides must be non-empty")

    @classmethod
    def hub_vs_rest(cls, num_qubits: int, hub: int = 1) -> "QubitPartition":
        rest = tuple(q for q in range(1, num_qubits + 1) if q != hub)
        return cls(num_qubits, (hub,), rest)

    def swapped(self) -> "QubitPartition":
        return QubitPartition(self.num_qubits, self.side_b, self.side_a)


def basis_state(bits: str) -> PureState:
    """Computational-basis ket from a bit string, e.g. ``'010'``."""
    n = len(bits)
    idx = int(bits, 2)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[idx] = 1.0
    return PureState(n, amps)


def tensor_product(*states: PureState) -> PureState:
    """Kronecker product of pure states, first factor most significant."""
    amps = states[0].amplitudes
    n = states[0].num_qubits
    for s in states[1:]:
        amps = np.kron(amps, s.amplitudes)
        n += s.num_qubits
    return PureState(n, amps)


def dump_state(state, fp) -> None:
    json.dump(state.to_json_dict(), fp)


def load_state(fp):
    d = json.load(fp)
    if "amplitudes" in d:
        return PureState.from_json_dict(d)
    return DensityMatrix.from_json_dict(d)
