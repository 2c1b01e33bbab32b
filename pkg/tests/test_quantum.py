import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from octoewl.algebra import quat_mul
from octoewl.errors import InvalidStrategyError, MeasurementError
from octoewl.ewl import canonical_eta
from octoewl.quantum import (
    MixedQuantumStrategy,
    SU2Strategy,
    haar_coefficients,
    haar_sample,
    measure_in_basis,
    su2_matrix,
    su2_to_quaternion,
    tensor,
)


def random_su2(rng):
    return SU2Strategy.from_coefficients(*haar_coefficients(rng))


def test_su2_matrix_presets():
    np.testing.assert_array_equal(su2_matrix(SU2Strategy(1, 0)), np.eye(2))
    eta = canonical_eta(3)
    np.testing.assert_allclose(su2_matrix(SU2Strategy(0, eta)), [[0, eta], [-np.conj(eta), 0]])


def test_su2_determinant_is_one():
    rng = np.random.default_rng(0)
    for _ in range(50):
        assert abs(np.linalg.det(su2_matrix(random_su2(rng))) - 1) <= 1e-12


def test_non_unit_strategy_rejected():
    with pytest.raises(InvalidStrategyError):
        SU2Strategy(1.0, 0.1)


def test_quaternion_correspondence():
    assert su2_to_quaternion(SU2Strategy(1, 0)).to_array().tolist() == [1, 0, 0, 0]
    assert su2_to_quaternion(SU2Strategy(1j, 0)).to_array().tolist() == [0, 1, 0, 0]


def test_quaternion_map_is_a_homomorphism():
    rng = np.random.default_rng(1)
    for _ in range(100):
        s, t = random_su2(rng), random_su2(rng)
        m = su2_matrix(s) @ su2_matrix(t)
        product = SU2Strategy(m[0, 0], m[0, 1])
        expected = quat_mul(su2_to_quaternion(s), su2_to_quaternion(t))
        np.testing.assert_allclose(su2_to_quaternion(product).to_array(), expected.to_array(), atol=1e-10)


def test_tensor_identity_and_flip_column():
    np.testing.assert_array_equal(tensor([np.eye(2)] * 3), np.eye(8))
    eta = canonical_eta(2)
    f = su2_matrix(SU2Strategy(0, eta))
    out = tensor([f, np.eye(2)]) @ np.array([1, 0, 0, 0], dtype=complex)
    np.testing.assert_allclose(out, [0, 0, -np.conj(eta), 0], atol=1e-15)


def test_tensor_mixed_product():
    rng = np.random.default_rng(2)
    us = [su2_matrix(random_su2(rng)) for _ in range(3)]
    vs = [rng.standard_normal(2) + 1j * rng.standard_normal(2) for _ in range(3)]
    lhs = tensor(us) @ np.kron(np.kron(vs[0], vs[1]), vs[2])
    rhs = np.kron(np.kron(us[0] @ vs[0], us[1] @ vs[1]), us[2] @ vs[2])
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_tensor_arity():
    with pytest.raises(ValueError):
        tensor([np.eye(2)])


def test_measurement_two_term_superposition():
    alpha, beta = 0.6 + 0.3j, -1.1j
    psi = np.array([alpha, 0, 0, beta])
    total = abs(alpha) ** 2 + abs(beta) ** 2
    probs = measure_in_basis(psi, np.eye(4))
    np.testing.assert_allclose(probs, [abs(alpha) ** 2 / total, 0, 0, abs(beta) ** 2 / total], atol=1e-15)


def test_measurement_point_mass_and_scaling():
    basis = np.linalg.qr(np.random.default_rng(3).standard_normal((4, 4)))[0].T.astype(complex)
    np.testing.assert_allclose(measure_in_basis(basis[3], basis), [0, 0, 0, 1], atol=1e-12)
    psi = np.array([0.2, 1j, -0.5, 0.1])
    np.testing.assert_allclose(measure_in_basis(7j * psi, basis), measure_in_basis(psi, basis), atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 2 * np.pi), min_size=4, max_size=4), st.floats(0.1, 10))
def test_measurement_is_basis_phase_invariant(phases, scale):
    rng = np.random.default_rng(4)
    basis = np.linalg.qr(rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))[0].T
    psi = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    rephased = basis * (scale * np.exp(1j * np.array(phases)))[:, None]
    p = measure_in_basis(psi, rephased)
    assert abs(p.sum() - 1) <= 1e-12
    np.testing.assert_allclose(p, measure_in_basis(psi, basis), atol=1e-12)


def test_measurement_errors():
    with pytest.raises(MeasurementError):
        measure_in_basis(np.array([1, 0]), [np.array([1, 0]), np.array([1, 1])])
    with pytest.raises(MeasurementError):
        measure_in_basis(np.zeros(2), np.eye(2))


def test_haar_moments():
    rng = np.random.default_rng(12345)
    c = haar_coefficients(rng, 100_000)
    assert np.all(np.abs((c**2).sum(axis=1) - 1) <= 1e-12)
    assert abs(c[:, 0].mean()) <= 4 / np.sqrt(100_000)
    sq = c[:, 0] ** 2
    assert abs(sq.mean() - 0.25) <= 3 * sq.std() / np.sqrt(len(sq))


def test_haar_sample_is_unit_strategy():
    rng = np.random.default_rng(0)
    s = haar_sample(rng)
    assert abs(abs(s.A) ** 2 + abs(s.B) ** 2 - 1) <= 1e-12


def test_mixed_strategy_validation():
    n = SU2Strategy.identity()
    with pytest.raises(ValueError):
        MixedQuantumStrategy.mixture([(0.5, n), (0.4, n)])
    with pytest.raises(ValueError):
        MixedQuantumStrategy.mixture([(-0.5, n), (1.5, n)])
    assert MixedQuantumStrategy.haar_uniform().haar
