import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_density, random_pure
from locent import (
    MeasurementPlan,
    OptimizerConfig,
    PureState,
    average_entanglement,
    ble,
    block_entanglement,
    local_projectors,
    measure,
    pauli_le,
    rle,
    to_density,
    total_rle,
)
from locent.families import dicke, gghz, ghz, gw, w_state
from locent.localization import outcome_projector
from locent.states import basis_state, tensor_product


def test_plan_validation():
    with pytest.raises(ValueError):
        MeasurementPlan((1, 1), angles=[[0, 0], [0, 0]])
    with pytest.raises(ValueError):
        MeasurementPlan((1,), angles=[[4.0, 0.0]])  # theta > pi
    with pytest.raises(ValueError):
        MeasurementPlan((1,), mode="pauli", pauli_axes=("q",))
    p = MeasurementPlan((2, 1), mode="pauli", pauli_axes=("x", "z"))
    # angle_vector is in sorted-qubit order: qubit 1 (z) first
    np.testing.assert_allclose(p.angle_vector(), [0, 0, np.pi / 2, 0])


def test_local_projectors_z_basis():
    plan = MeasurementPlan((1,), angles=[[0.0, 0.0]])
    projs = local_projectors(plan)
    np.testing.assert_allclose(projs[0, 0], np.diag([1.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(projs[0, 1], np.diag([0.0, 1.0]), atol=1e-12)


def test_local_projectors_x_basis():
    plan = MeasurementPlan((1,), angles=[[np.pi / 2, 0.0]])
    projs = local_projectors(plan)
    np.testing.assert_allclose(projs[0, 0], np.full((2, 2), 0.5), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_projector_completeness_random_angles(seed):
    g = np.random.default_rng(seed)
    K = int(g.integers(1, 4))
    angles = np.column_stack([g.uniform(0, np.pi, K), g.uniform(0, 2 * np.pi, K)])
    plan = MeasurementPlan(tuple(range(1, K + 1)), angles=angles)
    projs = local_projectors(plan)
    total = np.zeros((2**K, 2**K), dtype=complex)
    for k in range(2**K):
        bits = [(k >> (K - 1 - j)) & 1 for j in range(K)]
        total += outcome_projector(projs, bits)
    np.testing.assert_allclose(total, np.eye(2**K), atol=1e-12)


def test_measure_ghz3_x_basis():
    plan = MeasurementPlan((3,), angles=[[np.pi / 2, 0.0]])
    ens = measure(ghz(3), plan)
    assert ens.kept_qubits == (1, 2)
    assert len(ens.branches) == 2
    for p, s in ens.branches:
        assert p == pytest.approx(0.5, abs=1e-12)
        # branches are (|00> +/- |11>)/sqrt(2)
        amp = np.abs(s.amplitudes)
        np.testing.assert_allclose(amp, [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)], atol=1e-12)


def test_measure_product_state_single_distinct_branch():
    s = tensor_product(basis_state("0"), PureState(1, np.array([1, 1]) / np.sqrt(2)))
    plan = MeasurementPlan((2,), angles=[[np.pi / 2, 1.0]])
    ens = measure(s, plan)
    for _, b in ens.branches:
        np.testing.assert_allclose(np.abs(b.amplitudes), [1.0, 0.0], atol=1e-12)


def test_measure_w3_z_basis_branches():
    plan = MeasurementPlan((3,), angles=[[0.0, 0.0]])
    ens = measure(w_state(3), plan)
    probs = sorted(p for p, _ in ens.branches)
    assert probs == pytest.approx([1 / 3, 2 / 3], abs=1e-12)


def test_measure_requires_unmeasured_qubit():
    with pytest.raises(ValueError):
        measure(ghz(2), MeasurementPlan((1, 2), angles=[[0, 0], [0, 0]]))


def test_measure_mixed_branches_are_density_matrices(rng):
    rho = random_density(rng, 3, rank=2)
    plan = MeasurementPlan((2,), angles=[[1.0, 2.0]])
    ens = measure(rho, plan)
    assert sum(p for p, _ in ens.branches) == pytest.approx(1.0, abs=1e-9)
    for _, b in ens.branches:
        assert b.num_qubits == 2  # validated DensityMatrix by construction


def test_average_entanglement_examples():
    plan = MeasurementPlan((3,), angles=[[np.pi / 2, 0.0]])
    ens = measure(ghz(3), plan)
    assert average_entanglement(ens, hub=1) == pytest.approx(1.0, abs=1e-12)
    plan_z = MeasurementPlan((3,), angles=[[0.0, 0.0]])
    ens_w = measure(w_state(3), plan_z)
    assert average_entanglement(ens_w, hub=1) == pytest.approx(2 / 3, abs=1e-12)
    product = tensor_product(*(basis_state("0") for _ in range(3)))
    ens_p = measure(product, MeasurementPlan((3,), angles=[[0.3, 0.4]]))
    assert average_entanglement(ens_p, hub=1) == pytest.approx(0.0, abs=1e-12)


def test_ble_empty_s0_is_block_entanglement(light_config):
    s = dicke(4, 1)
    assert ble(s, (), config=light_config) == block_entanglement(s)


def test_ble_w_state_closed_form(light_config):
    # M=5 W state with one auxiliary qubit: 2 sqrt(N-1)/M with N=4
    got = ble(w_state(5), (5,), config=light_config)
    assert got == pytest.approx(2 * np.sqrt(3) / 5, abs=1e-6)


def test_ble_dicke_sum_cross_check(light_config):
    got = ble(dicke(4, 2), (4,), config=light_config)
    assert got == pytest.approx(2 * np.sqrt(2) / 3, abs=1e-6)


def test_ble_validates_inputs(light_config):
    with pytest.raises(ValueError):
        ble(ghz(3), (1,), hub=1, config=light_config)
    with pytest.raises(ValueError):
        ble(ghz(3), (2, 3), hub=1, config=light_config)


def test_rle_ghz_and_w(light_config):
    assert rle(ghz(4), 3, config=light_config) == pytest.approx(1.0, abs=1e-7)
    assert rle(w_state(4), 2, config=light_config) == pytest.approx(0.5, abs=1e-6)


def test_rle_dicke_closed_form(light_config):
    got = rle(dicke(4, 2), 4, config=light_config)
    assert got == pytest.approx(2 / 3, abs=1e-6)


def test_rle_two_qubit_register_direct(light_config):
    bell = PureState(2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert rle(bell, 2, config=light_config) == pytest.approx(1.0, abs=1e-12)


def test_rle_validates_inputs(light_config):
    with pytest.raises(ValueError):
        rle(ghz(3), 1, hub=1, config=light_config)


def test_total_rle_ghz(light_config):
    total, per = total_rle(ghz(4), config=light_config)
    assert total == pytest.approx(3.0, abs=1e-6)
    assert set(per) == {2, 3, 4}


def test_total_rle_dicke_5_2(light_config):
    total, _ = total_rle(dicke(5, 2), config=light_config)
    assert total == pytest.approx(2.4, abs=1e-5)


def test_total_rle_separable_zero(light_config):
    product = tensor_product(*(basis_state("0") for _ in range(3)))
    total, _ = total_rle(product, config=light_config)
    assert total == 0.0


def test_total_rle_region_subset(light_config):
    total, per = total_rle(ghz(4), region=(1, 2, 3), config=light_config)
    assert set(per) == {2, 3}
    assert total == pytest.approx(2.0, abs=1e-6)


def test_pauli_le_w_state_matches_rle(light_config):
    # sigma-z is optimal for the W family
    full = rle(w_state(4), 2, config=light_config)
    restricted, axes = pauli_le(w_state(4), (3, 4), partner=2, return_axes=True)
    assert restricted == pytest.approx(full, abs=1e-7)
    assert restricted == pytest.approx(0.5, abs=1e-9)


def test_pauli_le_gghz_x_optimal(light_config):
    s = gghz(3, np.sqrt(0.3), np.sqrt(0.7))
    full = rle(s, 2, config=light_config)
    restricted, axes = pauli_le(s, (3,), partner=2, return_axes=True)
    assert restricted == pytest.approx(full, abs=1e-7)
    assert axes == ("x",)


def test_pauli_le_guard():
    with pytest.raises(ValueError):
        pauli_le(ghz(4), (2, 3, 4), partner=None, guard=2)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_pauli_le_is_lower_bound(seed):
    g = np.random.default_rng(seed)
    c = g.normal(size=8) + 1j * g.normal(size=8)
    s = PureState(3, c / np.linalg.norm(c))
    cfg = OptimizerConfig(restarts=8, max_iterations=300, seed=seed)
    full = rle(s, 2, config=cfg)
    restricted = pauli_le(s, (3,), partner=2)
    assert restricted <= full + 1e-9


def test_multistart_beats_dense_grid(rng):
    """Optimizer must reach at least the best point of a theta/phi grid."""
    cfg = OptimizerConfig(restarts=10, max_iterations=300, seed=17)
    thetas = np.arange(0.0, np.pi + 1e-9, np.pi / 20)
    phis = np.arange(0.0, 2 * np.pi, np.pi / 20)
    from locent._optimize import AverageEntanglementObjective

    for trial in range(4):
        c = rng.normal(size=8) + 1j * rng.normal(size=8)
        s = PureState(3, c / np.linalg.norm(c))
        obj = AverageEntanglementObjective(s, (3,), hub=1, partner=2)
        grid = np.array([[t, p] for t in thetas for p in phis])
        grid_best = float(obj(grid).max())
        assert rle(s, 2, config=cfg) >= grid_best - 1e-3


def test_rle_bounded_by_single_qubit_cuts(rng):
    """Monotonicity: F_i cannot exceed either one-qubit block entanglement."""
    cfg = OptimizerConfig(restarts=8, max_iterations=300, seed=23)
    for trial in range(4):
        s = random_pure(rng, 4)
        f2 = rle(s, 2, config=cfg)
        e_hub = block_entanglement(s, hub=1)
        e_partner = block_entanglement(s, hub=2)
        assert f2 <= min(e_hub, e_partner) + 1e-6


def test_ble_at_least_partial_trace_entanglement(rng):
    """Convexity: measuring cannot do worse than discarding the auxiliaries."""
    from locent import partial_trace

    cfg = OptimizerConfig(restarts=8, max_iterations=300, seed=31)
    for trial in range(4):
        s = random_pure(rng, 4)
        value = ble(s, (4,), config=cfg)
        reduced = partial_trace(to_density(s), keep=(1, 2, 3))
        assert value >= block_entanglement(reduced, hub=1) - 1e-6


def test_measured_mixed_and_pure_routes_agree(light_config):
    s = dicke(4, 2)
    pure_val = rle(s, 2, config=light_config)
    mixed_val = rle(to_density(s), 2, config=light_config)
    assert pure_val == pytest.approx(mixed_val, abs=1e-7)
