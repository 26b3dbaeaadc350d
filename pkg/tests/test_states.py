import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locent import DensityMatrix, InvariantViolation, PureState, QubitPartition
from locent.states import basis_state, dump_state, load_state, tensor_product


def test_pure_state_validates_norm():
    with pytest.raises(InvariantViolation):
        PureState(1, np.array([1.0, 1.0]))


def test_pure_state_validates_length():
    with pytest.raises(InvariantViolation):
        PureState(2, np.array([1.0, 0.0]))


def test_basis_state_bits():
    s = basis_state("010")
    assert s.num_qubits == 3
    assert s.amplitudes[0b010] == 1.0


def test_tensor_product_order():
    # qubit 1 is the most significant bit
    s = tensor_product(basis_state("1"), basis_state("0"))
    assert s.amplitudes[0b10] == 1.0


def test_density_matrix_rejects_non_hermitian():
    m = np.array([[0.5, 0.1], [0.3, 0.5]], dtype=complex)
    with pytest.raises(InvariantViolation):
        DensityMatrix(1, m)


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(InvariantViolation):
        DensityMatrix(1, np.eye(2))


def test_density_matrix_rejects_negative_eigenvalues():
    m = np.diag([1.5, -0.5]).astype(complex)
    with pytest.raises(InvariantViolation):
        DensityMatrix(1, m)


def test_partition_validates_cover_and_disjointness():
    QubitPartition(3, (1,), (2, 3))
    with pytest.raises(ValueError):
        QubitPartition(3, (1, 2), (2, 3))
    with pytest.raises(ValueError):
        QubitPartition(3, (1,), (2,))
    with pytest.raises(ValueError):
        QubitPartition(2, (1, 2), ())


def test_hub_vs_rest():
    p = QubitPartition.hub_vs_rest(4, hub=2)
    assert p.side_a == (2,)
    assert p.side_b == (1, 3, 4)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**31 - 1))
def test_pure_state_json_round_trip(n, seed):
    g = np.random.default_rng(seed)
    c = g.normal(size=2**n) + 1j * g.normal(size=2**n)
    s = PureState(n, c / np.linalg.norm(c))
    buf = io.StringIO()
    dump_state(s, buf)
    buf.seek(0)
    back = load_state(buf)
    assert isinstance(back, PureState)
    np.testing.assert_allclose(back.amplitudes, s.amplitudes, atol=1e-15)


def test_density_json_round_trip(rng):
    from conftest import random_density

    r = random_density(rng, 2)
    buf = io.StringIO()
    dump_state(r, buf)
    buf.seek(0)
    back = load_state(buf)
    assert isinstance(back, DensityMatrix)
    np.testing.assert_allclose(back.matrix, r.matrix, atol=1e-15)
