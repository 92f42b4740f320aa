#!/usr/bin/env python3
"""
Dense 2x2 / 4x4 complex linear algebra used by every other module.

Basis convention: |uu>, |ud>, |du>, |dd> with subsystem A as the slow index.
"""

import logging
from typing import Tuple

import numpy as np

from exceptions import DomainError, InputError

logger = logging.getLogger(__name__)

ComplexMatrix = np.ndarray

# Numerical slack
HERMITIAN_TOL = 1e-10
DENSITY_HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_CLAMP_TOL = 1e-10
PSD_ERROR_TOL = 1e-8

IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def as_complex_matrix(m, dims: Tuple[int, ...] = (2, 4)) -> ComplexMatrix:
    """Coerce to a square complex array whose dimension is one of `dims`."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InputError(f"Expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] not in dims:
        raise InputError(f"Matrix dimension {arr.shape[0]} not in {dims}")
    if not np.all(np.isfinite(arr)):
        raise InputError("Matrix contains non-finite entries")
    return arr


def hermiticity_defect(m: ComplexMatrix) -> float:
    return float(np.linalg.norm(m - m.conj().T))


def as_density_matrix(m) -> ComplexMatrix:
    """
    Validate a two-qubit density matrix.

    Hermitian within 1e-12 (Hilbert-Schmidt norm of M - M^dagger), unit trace
    within 1e-12 and no eigenvalue below -1e-10.
    """
    rho = as_complex_matrix(m, dims=(4,))
    defect = hermiticity_defect(rho)
    if defect > DENSITY_HERMITIAN_TOL:
        raise InputError(f"Density matrix is not Hermitian (defect {defect:.3e})")
    trace = np.trace(rho)
    if abs(trace - 1.0) > TRACE_TOL:
        raise InputError(f"Density matrix trace is {trace.real:.15g}, expected 1")
    lowest = float(np.linalg.eigvalsh(rho)[0])
    if lowest < -PSD_CLAMP_TOL:
        raise InputError(f"Density matrix has negative eigenvalue {lowest:.3e}")
    return rho


def tensor_product(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    """Kronecker product of two single-qubit operators, A as the slow index."""
    a = as_complex_matrix(a, dims=(2,))
    b = as_complex_matrix(b, dims=(2,))
    return np.kron(a, b)


def hermitian_eigen(h: ComplexMatrix) -> Tuple[np.ndarray, ComplexMatrix]:
    """
    Eigen-decomposition of a Hermitian matrix.

    Returns eigenvalues sorted in descending order and the matching
    orthonormal eigenvectors as columns. No ordering is promised among
    degenerate eigenvalues.
    """
    h = as_complex_matrix(h)
    defect = hermiticity_defect(h)
    if defect > HERMITIAN_TOL:
        raise InputError(f"Matrix is not Hermitian (defect {defect:.3e})")
    values, vectors = np.linalg.eigh((h + h.conj().T) / 2)
    return values[::-1].copy(), vectors[:, ::-1].copy()


def psd_sqrt(m: ComplexMatrix) -> ComplexMatrix:
    """
    Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues down to -1e-8 are treated as rounding noise and clamped to
    zero; anything lower means the input is not PSD.
    """
    values, vectors = hermitian_eigen(m)
    lowest = float(values[-1])
    if lowest < -PSD_ERROR_TOL:
        raise DomainError(f"Matrix is not positive semidefinite (eigenvalue {lowest:.3e})")
    if lowest < -PSD_CLAMP_TOL:
        logger.warning("Clamping eigenvalue %.3e to zero before square root", lowest)
    roots = np.sqrt(np.clip(values, 0.0, None))
    root = (vectors * roots) @ vectors.conj().T
    return (root + root.conj().T) / 2


def partial_transpose_b(rho) -> ComplexMatrix:
    """Transpose on subsystem B (the fast index) of a two-qubit operator."""
    rho = as_complex_matrix(rho, dims=(4,))
    return rho.reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def hs_inner(a: ComplexMatrix, b: ComplexMatrix) -> complex:
    """Hilbert-Schmidt inner product tr(A^dagger B)."""
    return complex(np.vdot(a, b))


def hs_distance(a: ComplexMatrix, b: ComplexMatrix) -> float:
    """Hilbert-Schmidt distance sqrt(tr((A-B)^dagger (A-B)))."""
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape != b.shape:
        raise InputError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    diff = a - b
    return float(np.sqrt(max(0.0, hs_inner(diff, diff).real)))
