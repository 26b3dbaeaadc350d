import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_pure
from locent import (
    QubitPartition,
    block_entanglement,
    eigen_spectrum,
    negativity,
    pair_entanglement,
    partial_trace,
    partial_transpose,
    schmidt_values,
    to_density,
)
from locent.families import dicke, ghz, w_state
from locent.linalg import pure_negativity
from locent.states import PureState, basis_state, tensor_product

BELL = PureState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
PLUS = PureState(1, np.array([1, 1]) / np.sqrt(2))


def test_to_density_basis_projector():
    rho = to_density(basis_state("0"))
    np.testing.assert_allclose(rho.matrix, np.diag([1.0, 0.0]), atol=1e-15)


def test_to_density_uniform_superposition():
    rho = to_density(PLUS)
    np.testing.assert_allclose(rho.matrix, np.full((2, 2), 0.5), atol=1e-15)


def test_to_density_w3_outer_product():
    w3 = w_state(3)
    # single-excitation support: indices with exactly one qubit in |0>
    idx = [0b011, 0b101, 0b110]
    expected = np.zeros((8, 8), dtype=complex)
    for i in idx:
        for j in idx:
            expected[i, j] = 1 / 3
    np.testing.assert_allclose(to_density(w3).matrix, expected, atol=1e-15)


def test_partial_trace_ghz_remainder():
    rho = partial_trace(to_density(ghz(3)), keep=(2, 3))
    expected = np.zeros((4, 4), dtype=complex)
    expected[0, 0] = expected[3, 3] = 0.5
    np.testing.assert_allclose(rho.matrix, expected, atol=1e-15)


def test_partial_trace_product_state_factor():
    s = tensor_product(basis_state("0"), PLUS)
    rho = partial_trace(to_density(s), keep=(2,))
    np.testing.assert_allclose(rho.matrix, to_density(PLUS).matrix, atol=1e-15)


def test_partial_trace_w3_pair_by_contraction():
    # brute-force index contraction oracle for keep={1,2}
    w3 = w_state(3)
    t = to_density(w3).tensor()
    expected = np.trace(t, axis1=2, axis2=5).reshape(4, 4)
    got = partial_trace(to_density(w3), keep=(1, 2))
    np.testing.assert_allclose(got.matrix, expected, atol=1e-14)
    # structure: (2/3) |psi+><psi+| + (1/3) |11><11| in our excitation convention
    psi_plus = np.zeros(4, dtype=complex)
    psi_plus[0b01] = psi_plus[0b10] = 1 / np.sqrt(2)
    direct = (2 / 3) * np.outer(psi_plus, psi_plus.conj())
    direct[3, 3] = 1 / 3
    np.testing.assert_allclose(got.matrix, direct, atol=1e-14)


def test_partial_trace_errors():
    rho = to_density(ghz(3))
    with pytest.raises(ValueError):
        partial_trace(rho, keep=())
    with pytest.raises(ValueError):
        partial_trace(rho, keep=(0, 1))


def test_partial_transpose_diagonal_invariant():
    from locent import DensityMatrix

    rho = np.diag([0.5, 0.2, 0.2, 0.1]).astype(complex)
    dm = DensityMatrix(2, rho)
    np.testing.assert_allclose(partial_transpose(dm, (2,)), rho, atol=1e-15)


def test_partial_transpose_bell_eigenvalues():
    pt = partial_transpose(to_density(BELL), (2,))
    w = np.sort(np.linalg.eigvalsh(pt))
    np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)


def test_partial_transpose_involution(rng):
    rho = random_density(rng, 3)
    once = partial_transpose(rho, (1, 3))
    # transpose the same sides again on the raw matrix
    t = once.reshape((2,) * 6)
    perm = [3, 1, 5, 0, 4, 2]
    again = t.transpose(perm).reshape(8, 8)
    np.testing.assert_allclose(again, rho.matrix, atol=1e-15)


def test_partial_transpose_preserves_trace_and_hermiticity(rng):
    rho = random_density(rng, 3)
    pt = partial_transpose(rho, (2,))
    assert abs(np.trace(pt) - 1.0) < 1e-12
    np.testing.assert_allclose(pt, pt.conj().T, atol=1e-12)


def test_negativity_bell():
    assert negativity(to_density(BELL), QubitPartition(2, (1,), (2,))) == pytest.approx(0.5)


def test_negativity_product_zero():
    s = basis_state("00")
    assert negativity(to_density(s), QubitPartition(2, (1,), (2,))) == 0.0


def test_negativity_w3_pair_reduced():
    red = partial_trace(to_density(w_state(3)), keep=(1, 2))
    got = negativity(red, QubitPartition(2, (1,), (2,)))
    assert got == pytest.approx((np.sqrt(5) - 1) / 6, abs=1e-12)


def test_negativity_side_swap_invariance(rng):
    rho = random_density(rng, 3)
    p = QubitPartition(3, (1, 3), (2,))
    assert negativity(rho, p) == pytest.approx(negativity(rho, p.swapped()), abs=1e-10)


def test_block_entanglement_examples():
    assert block_entanglement(ghz(5)) == pytest.approx(1.0, abs=1e-12)
    assert block_entanglement(dicke(4, 2)) == pytest.approx(1.0, abs=1e-12)
    assert block_entanglement(w_state(3)) == pytest.approx(2 * np.sqrt(2) / 3, abs=1e-12)


def test_eigen_spectrum_trivial():
    np.testing.assert_allclose(eigen_spectrum(np.eye(2) / 2), [0.5, 0.5])
    np.testing.assert_allclose(eigen_spectrum(np.diag([1.0, -1.0])), [1.0, -1.0])


def test_eigen_spectrum_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigen_spectrum(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigen_spectrum_hermitizes_small_asymmetry():
    m = np.array([[1.0, 1e-9], [0.0, -1.0]])
    w = eigen_spectrum(m)
    np.testing.assert_allclose(w, [1.0, -1.0], atol=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.integers(0, 2**31 - 1))
def test_pure_negativity_matches_density_route(n, seed):
    """sum_{i<j} sqrt(lam_i lam_j) over Schmidt values equals the eigensolve."""
    g = np.random.default_rng(seed)
    c = g.normal(size=2**n) + 1j * g.normal(size=2**n)
    s = PureState(n, c / np.linalg.norm(c))
    cut = 1 + int(g.integers(0, n - 1))
    side_a = tuple(range(1, cut + 1))
    side_b = tuple(range(cut + 1, n + 1))
    part = QubitPartition(n, side_a, side_b)
    assert pure_negativity(s, part) == pytest.approx(
        negativity(to_density(s), part), abs=1e-8
    )


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_partial_trace_composition(seed):
    g = np.random.default_rng(seed)
    from locent import DensityMatrix

    a = g.normal(size=(16, 16)) + 1j * g.normal(size=(16, 16))
    m = a @ a.conj().T
    rho = DensityMatrix(4, m / np.trace(m))
    two_step = partial_trace(partial_trace(rho, keep=(1, 2, 4)), keep=(1, 3))
    one_step = partial_trace(rho, keep=(1, 4))
    np.testing.assert_allclose(two_step.matrix, one_step.matrix, atol=1e-12)


def test_schmidt_values_bell():
    np.testing.assert_allclose(
        np.sort(schmidt_values(BELL, QubitPartition(2, (1,), (2,)))), [0.5, 0.5]
    )


def test_pair_entanglement_w3():
    got = pair_entanglement(to_density(w_state(3)), 1, 2)
    assert got == pytest.approx((np.sqrt(5) - 1) / 3, abs=1e-12)
