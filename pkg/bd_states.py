#!/usr/bin/env python3
"""
Bell-decomposable (BD) two-qubit states.

A BD state is rho = sum_i p_i |psi_i><psi_i| over the Bell basis
(phi+, phi-, psi+, psi-), or equivalently
rho = 1/4 (I + sum_i t_i sigma_i x sigma_i). Physical states fill a
tetrahedron in t-space whose vertices are the Bell states; the separable
ones fill the inscribed octahedron |t1| + |t2| + |t3| <= 1. The four
corners left over are the entangled cells, one per Bell state.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from core_linalg import PAULIS, ComplexMatrix, IDENTITY_4, as_complex_matrix, tensor_product
from exceptions import DomainError, InputError

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-12
BD_MATRIX_TOL = 1e-10

# Row i is the t-space vertex of Bell state i+1: t_j = sum_i p_i * BELL_SIGNS[i, j]
BELL_SIGNS = np.array([
    [1.0, -1.0, 1.0],
    [-1.0, 1.0, 1.0],
    [1.0, 1.0, -1.0],
    [-1.0, -1.0, -1.0],
])

BELL_NAMES = ('phi+', 'phi-', 'psi+', 'psi-')

_S = 1 / np.sqrt(2)
BELL_VECTORS = np.array([
    [_S, 0, 0, _S],
    [_S, 0, 0, -_S],
    [0, _S, _S, 0],
    [0, _S, -_S, 0],
], dtype=complex)

Permutation = Tuple[int, int, int, int]
IDENTITY_PERMUTATION: Permutation = (0, 1, 2, 3)


def _vector(values: Sequence[float], size: int, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.shape != (size,):
        raise InputError(f"{name} must have {size} components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite values")
    return arr


def positivity_inequalities(t: Sequence[float]) -> Dict[str, float]:
    """Residuals of the tetrahedron faces; all >= 0 for a physical state."""
    t1, t2, t3 = _vector(t, 3, 't')
    return {
        '1 + t1 - t2 + t3 >= 0': 1 + t1 - t2 + t3,
        '1 - t1 + t2 + t3 >= 0': 1 - t1 + t2 + t3,
        '1 + t1 + t2 - t3 >= 0': 1 + t1 + t2 - t3,
        '1 - t1 - t2 - t3 >= 0': 1 - t1 - t2 - t3,
    }


def ppt_inequalities(t: Sequence[float]) -> Dict[str, float]:
    """Residuals of the octahedron faces cut out by the PPT criterion."""
    t1, t2, t3 = _vector(t, 3, 't')
    return {
        '1 + t1 + t2 + t3 >= 0': 1 + t1 + t2 + t3,
        '1 - t1 - t2 + t3 >= 0': 1 - t1 - t2 + t3,
        '1 + t1 - t2 - t3 >= 0': 1 + t1 - t2 - t3,
        '1 - t1 + t2 - t3 >= 0': 1 - t1 + t2 - t3,
    }


def probs_to_t(p: Sequence[float]) -> np.ndarray:
    """t = p @ BELL_SIGNS: the correlation vector of a probability 4-vector."""
    p = _validate_probs(p)
    return p @ BELL_SIGNS


def t_to_probs(t: Sequence[float]) -> np.ndarray:
    """Invert the t-p map; t must lie in the positivity tetrahedron."""
    t = _vector(t, 3, 't')
    for name, residual in positivity_inequalities(t).items():
        if residual < -BOUNDARY_TOL:
            raise DomainError(f"Not a physical BD state: violates {name} (residual {residual:.3e})")
    return (1.0 + BELL_SIGNS @ t) / 4.0


def _validate_probs(p: Sequence[float]) -> np.ndarray:
    p = _vector(p, 4, 'p')
    for i, value in enumerate(p, start=1):
        if value < -BOUNDARY_TOL or value > 1 + BOUNDARY_TOL:
            raise InputError(f"p{i} = {value:.12g} outside [0, 1]")
    total = float(p.sum())
    if abs(total - 1.0) > BOUNDARY_TOL:
        raise InputError(f"Probabilities sum to {total:.12g}, expected 1")
    return p


@dataclass(frozen=True)
class BDState:
    """Bell-basis probabilities (p1..p4) of a BD state."""

    p: Tuple[float, float, float, float]

    def __post_init__(self):
        object.__setattr__(self, 'p', tuple(float(x) for x in _validate_probs(self.p)))

    @classmethod
    def from_probs(cls, p: Sequence[float]) -> 'BDState':
        return cls(tuple(p))

    @classmethod
    def from_t(cls, t: Sequence[float]) -> 'BDState':
        return cls(tuple(t_to_probs(t)))

    @property
    def probs(self) -> np.ndarray:
        return np.array(self.p)

    @property
    def t(self) -> np.ndarray:
        return self.probs @ BELL_SIGNS

    def __repr__(self) -> str:
        return 'BDState(p=(' + ', '.join(f'{x:.6g}' for x in self.p) + '))'


@dataclass(frozen=True)
class RegionLabel:
    """Separable, or the entangled cell around Bell vertex P_cell."""

    cell: Optional[int] = None

    def __post_init__(self):
        if self.cell is not None and self.cell not in (1, 2, 3, 4):
            raise InputError(f"Entangled cell index must be 1..4, got {self.cell}")

    @classmethod
    def separable(cls) -> 'RegionLabel':
        return cls(None)

    @classmethod
    def entangled(cls, cell: int) -> 'RegionLabel':
        return cls(cell)

    @property
    def is_separable(self) -> bool:
        return self.cell is None

    @property
    def label(self) -> str:
        return 'separable' if self.cell is None else f'cell_{self.cell}'

    def __str__(self) -> str:
        return self.label


def bell_projector(i: int) -> ComplexMatrix:
    """Rank-1 projector onto Bell state i (1 = phi+, 2 = phi-, 3 = psi+, 4 = psi-)."""
    if i not in (1, 2, 3, 4):
        raise InputError(f"Bell index must be 1..4, got {i}")
    v = BELL_VECTORS[i - 1]
    return np.outer(v, v.conj())


def t_to_matrix(t: Sequence[float]) -> ComplexMatrix:
    """Pauli expansion 1/4 (I + sum t_i sigma_i x sigma_i), no validation of t."""
    t = _vector(t, 3, 't')
    rho = IDENTITY_4.copy()
    for ti, sigma in zip(t, PAULIS):
        rho = rho + ti * tensor_product(sigma, sigma)
    return rho / 4


def to_density_matrix(s: BDState) -> ComplexMatrix:
    """4x4 matrix sum_i p_i |Bell_i><Bell_i| of a BD state."""
    return sum(pi * bell_projector(i) for i, pi in enumerate(s.p, start=1))


def bd_t_from_matrix(rho) -> Optional[np.ndarray]:
    """Correlation vector of `rho` if it is Bell-diagonal within 1e-10, else None."""
    rho = as_complex_matrix(rho, dims=(4,))
    t = np.array([np.trace(rho @ tensor_product(s, s)).real for s in PAULIS])
    if np.linalg.norm(rho - t_to_matrix(t)) > BD_MATRIX_TOL:
        return None
    return t


def classify_region(s: BDState) -> RegionLabel:
    """Separable iff every p_i <= 1/2 (+1e-12); otherwise the cell of the largest p_i."""
    p = s.probs
    if np.all(p <= 0.5 + BOUNDARY_TOL):
        return RegionLabel.separable()
    return RegionLabel.entangled(int(np.argmax(p)) + 1)


def is_separable_by_inequalities(t: Sequence[float], tol: float = BOUNDARY_TOL) -> bool:
    """True if t satisfies all eight tetrahedron and octahedron inequalities within tol."""
    residuals = list(positivity_inequalities(t).values()) + list(ppt_inequalities(t).values())
    return min(residuals) >= -tol


def apply_permutation(s: BDState, perm: Permutation) -> BDState:
    """Relabel probabilities: result.p[i] = s.p[perm[i]]."""
    return BDState(tuple(s.p[j] for j in perm))


def canonicalize_to_singlet(s: BDState) -> Tuple[BDState, Permutation]:
    """
    Move the largest probability into the singlet slot p4.

    The relabeling is a swap, so applying the returned permutation to the
    canonical state restores the input. If p4 already holds the maximum the
    identity is returned; otherwise the lowest-index maximum is swapped in.
    """
    p = s.probs
    if p[3] >= p.max():
        return s, IDENTITY_PERMUTATION
    k = int(np.argmax(p))
    perm = list(IDENTITY_PERMUTATION)
    perm[k], perm[3] = 3, k
    perm = tuple(perm)
    return apply_permutation(s, perm), perm


def werner_state(x: float) -> BDState:
    """Point t = (-x, -x, -x) on the segment from the maximally mixed state (x=0) to the singlet (x=1)."""
    if not 0.0 <= x <= 1.0:
        raise InputError(f"Werner parameter must be in [0, 1], got {x}")
    return BDState.from_t((-x, -x, -x))
