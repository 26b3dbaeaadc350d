import numpy as np
import pytest

from locent import OptimizerConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def light_config():
    """Small optimizer budget for tests whose optima are easy to find."""
    return OptimizerConfig(restarts=6, max_iterations=250, seed=99)


def random_pure(rng, num_qubits):
    from locent import PureState

    c = rng.normal(size=2**num_qubits) + 1j * rng.normal(size=2**num_qubits)
    return PureState(num_qubits, c / np.linalg.norm(c))


def random_density(rng, num_qubits, rank=None):
    from locent import DensityMatrix

    d = 2**num_qubits
    rank = rank or d
    a = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = a @ a.conj().T
    return DensityMatrix(num_qubits, m / np.trace(m))
