#!/usr/bin/env python3
"""Tests for the dense linear-algebra layer."""

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bd_states import t_to_matrix, to_density_matrix
from core_linalg import (
    IDENTITY_2,
    IDENTITY_4,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    as_density_matrix,
    hermitian_eigen,
    hs_distance,
    hs_inner,
    partial_transpose_b,
    psd_sqrt,
    tensor_product,
)
from exceptions import DomainError, InputError

ENTRIES = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


class TestTensorProduct:
    def test_identity(self):
        assert np.array_equal(tensor_product(IDENTITY_2, IDENTITY_2), IDENTITY_4)

    def test_sigma_z(self):
        assert np.array_equal(tensor_product(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))

    def test_sigma_y_is_antidiagonal(self):
        expected = np.fliplr(np.diag([-1, 1, 1, -1])).astype(complex)
        assert np.allclose(tensor_product(SIGMA_Y, SIGMA_Y), expected)

    def test_rejects_wrong_dimension(self):
        with pytest.raises(InputError):
            tensor_product(IDENTITY_4, IDENTITY_2)


class TestHermitianEigen:
    def test_diagonal_sorted_descending(self):
        values, _ = hermitian_eigen(np.diag([1.0, 2.0, 3.0, 4.0]))
        assert values == pytest.approx([4.0, 3.0, 2.0, 1.0])

    def test_singlet_projector(self, singlet_matrix):
        values, _ = hermitian_eigen(singlet_matrix)
        assert values == pytest.approx([1.0, 0.0, 0.0, 0.0], abs=1e-12)

    def test_bd_eigenvalues_are_probabilities(self):
        values, _ = hermitian_eigen(t_to_matrix((-0.6, -0.6, -0.6)))
        assert values == pytest.approx([0.7, 0.1, 0.1, 0.1], abs=1e-12)

    def test_rejects_non_hermitian(self):
        with pytest.raises(InputError):
            hermitian_eigen(np.array([[0, 1], [0, 0]], dtype=complex))

    @seed(7)
    @settings(max_examples=50, deadline=None)
    @given(re=arrays(np.float64, (4, 4), elements=ENTRIES), im=arrays(np.float64, (4, 4), elements=ENTRIES))
    def test_reconstruction(self, re, im):
        g = re + 1j * im
        h = (g + g.conj().T) / 2
        values, vectors = hermitian_eigen(h)
        assert np.allclose((vectors * values) @ vectors.conj().T, h, atol=1e-9)
        assert np.all(np.diff(values) <= 1e-12)


class TestPsdSqrt:
    def test_identity(self):
        assert np.allclose(psd_sqrt(IDENTITY_4), IDENTITY_4)

    def test_diagonal(self):
        assert np.allclose(psd_sqrt(np.diag([4.0, 1.0, 0.0, 0.0])), np.diag([2.0, 1.0, 0.0, 0.0]))

    def test_bd_state_root_has_bell_weights(self, worked_state):
        rho = to_density_matrix(worked_state)
        root = psd_sqrt(rho)
        assert np.allclose(root @ root, rho, atol=1e-12)
        values, _ = hermitian_eigen(root)
        assert values == pytest.approx(np.sqrt([0.7, 0.1, 0.1, 0.1]), abs=1e-12)

    def test_clamps_rounding_noise(self):
        root = psd_sqrt(np.diag([1.0, -5e-9, 0.0, 0.0]))
        assert np.allclose(root, np.diag([1.0, 0.0, 0.0, 0.0]))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(DomainError):
            psd_sqrt(np.diag([1.0, -1e-3, 0.0, 0.0]))


class TestPartialTranspose:
    def test_maximally_mixed_invariant(self, maximally_mixed_matrix):
        assert np.allclose(partial_transpose_b(maximally_mixed_matrix), maximally_mixed_matrix)

    def test_singlet_has_negative_eigenvalue(self, singlet_matrix):
        values, _ = hermitian_eigen(partial_transpose_b(singlet_matrix))
        assert values == pytest.approx([0.5, 0.5, 0.5, -0.5], abs=1e-12)

    def test_octahedron_face_state_stays_psd(self):
        values, _ = hermitian_eigen(partial_transpose_b(t_to_matrix((-1 / 3, -1 / 3, -1 / 3))))
        assert values[-1] >= -1e-12

    def test_transposes_only_second_qubit(self):
        op = tensor_product(SIGMA_X, SIGMA_Y)
        assert np.allclose(partial_transpose_b(op), tensor_product(SIGMA_X, SIGMA_Y.T))

    def test_involution(self, rng):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.array_equal(partial_transpose_b(partial_transpose_b(g)), g)


class TestHilbertSchmidt:
    def test_identical_operands(self, worked_state):
        rho = to_density_matrix(worked_state)
        assert hs_distance(rho, rho) == 0.0

    def test_singlet_to_maximally_mixed(self, singlet_matrix, maximally_mixed_matrix):
        assert hs_distance(singlet_matrix, maximally_mixed_matrix) == pytest.approx(np.sqrt(3) / 2, abs=1e-12)

    def test_worked_state_to_face(self):
        d = hs_distance(t_to_matrix((-0.6, -0.6, -0.6)), t_to_matrix((-1 / 3, -1 / 3, -1 / 3)))
        assert d == pytest.approx(0.4 / np.sqrt(3), abs=1e-12)

    def test_inner_product_of_paulis(self):
        assert hs_inner(SIGMA_X, SIGMA_X) == pytest.approx(2.0)
        assert hs_inner(SIGMA_X, SIGMA_Z) == pytest.approx(0.0)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            hs_distance(IDENTITY_2, IDENTITY_4)


class TestDensityValidation:
    def test_accepts_bd_state(self, worked_state):
        as_density_matrix(to_density_matrix(worked_state))

    def test_rejects_bad_trace(self):
        with pytest.raises(InputError, match='trace'):
            as_density_matrix(IDENTITY_4)

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(InputError, match='negative eigenvalue'):
            as_density_matrix(np.diag([0.6, 0.6, -0.2, 0.0]))

    def test_rejects_non_hermitian(self):
        m = IDENTITY_4 / 4
        m[0, 1] = 0.1
        with pytest.raises(InputError, match='Hermitian'):
            as_density_matrix(m)
