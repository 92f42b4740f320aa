#!/usr/bin/env python3
"""
Local filtering operations (LQCC) on two-qubit states.

A transformation is A x B = U_A f(mu, a, m) x U_B f(nu, b, n) with filters
f(mu, a, m) = mu (I + a m.sigma) and rho' = (A x B) rho (A x B)^dagger / t,
where t = tr((A x B) rho (A x B)^dagger) is the success weight.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from bd_states import BELL_SIGNS, BDState, classify_region, to_density_matrix
from core_linalg import (
    IDENTITY_2,
    PAULIS,
    ComplexMatrix,
    as_complex_matrix,
    as_density_matrix,
    tensor_product,
)
from exceptions import DomainError, InputError
from measures import SQRT3, hs_entanglement, nearest_separable_bd, spin_flip, tilde_distance

logger = logging.getLogger(__name__)

AXIS_TOL = 1e-12
UNITARY_TOL = 1e-12
RESTRICTION_TOL = 1e-12
MIN_NORMALIZATION = 1e-12

AXES = {
    'x': (1.0, 0.0, 0.0),
    'y': (0.0, 1.0, 0.0),
    'z': (0.0, 0.0, 1.0),
}


def pauli_dot(v: Sequence[float]) -> ComplexMatrix:
    """v . sigma for a real 3-vector."""
    return sum(float(vi) * s for vi, s in zip(v, PAULIS))


@dataclass(frozen=True)
class Filter:
    """Local filter mu (I + a m.sigma); invertible because |a| < 1."""

    mu: float = 1.0
    a: float = 0.0
    m: Tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        if m.shape != (3,) or not np.all(np.isfinite(m)):
            raise InputError(f"Filter axis must be a finite 3-vector, got {self.m!r}")
        if abs(np.linalg.norm(m) - 1.0) > AXIS_TOL:
            raise InputError(f"Filter axis must be a unit vector (norm {np.linalg.norm(m):.15g})")
        if not (math.isfinite(self.mu) and self.mu > 0):
            raise InputError(f"Filter scale mu must be positive, got {self.mu}")
        if not abs(self.a) < 1.0:
            raise InputError(f"Filter strength must satisfy |a| < 1 (non-invertible filter), got {self.a}")
        object.__setattr__(self, 'm', tuple(float(x) for x in m))

    def flipped(self) -> 'Filter':
        return replace(self, m=tuple(-x for x in self.m))

    @property
    def determinant(self) -> float:
        """mu^2 (1 - a^2)."""
        return self.mu ** 2 * (1.0 - self.a ** 2)


def filter_matrix(f: Filter) -> ComplexMatrix:
    """2x2 matrix mu (I + a m.sigma)."""
    return f.mu * (IDENTITY_2 + f.a * pauli_dot(f.m))


def filter_flip_identity_check(f: Filter) -> float:
    """Deviation of f(m) f(-m) from mu^2 (1 - a^2) I."""
    product = filter_matrix(f) @ filter_matrix(f.flipped())
    return float(np.linalg.norm(product - f.determinant * IDENTITY_2))


def local_unitary(axis: Sequence[float], angle: float) -> ComplexMatrix:
    """exp(-i angle/2 axis.sigma) for a unit axis."""
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if norm == 0:
        raise InputError("Rotation axis must be non-zero")
    axis = axis / norm
    return math.cos(angle / 2) * IDENTITY_2 - 1j * math.sin(angle / 2) * pauli_dot(axis)


def _as_unitary(u) -> ComplexMatrix:
    u = as_complex_matrix(u, dims=(2,))
    if np.linalg.norm(u.conj().T @ u - IDENTITY_2) > UNITARY_TOL:
        raise InputError("Local operation is not unitary")
    return u


@dataclass(frozen=True)
class LqccParams:
    """Filter and unitary on each side of one LQCC transformation."""

    filter_a: Filter = field(default_factory=Filter)
    filter_b: Filter = field(default_factory=Filter)
    unitary_a: np.ndarray = field(default_factory=lambda: IDENTITY_2.copy(), compare=False)
    unitary_b: np.ndarray = field(default_factory=lambda: IDENTITY_2.copy(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'unitary_a', _as_unitary(self.unitary_a))
        object.__setattr__(self, 'unitary_b', _as_unitary(self.unitary_b))

    @classmethod
    def identity(cls) -> 'LqccParams':
        return cls()

    @property
    def has_identity_unitaries(self) -> bool:
        return bool(np.linalg.norm(self.unitary_a - IDENTITY_2) <= UNITARY_TOL
                    and np.linalg.norm(self.unitary_b - IDENTITY_2) <= UNITARY_TOL)

    def filters_only(self) -> 'LqccParams':
        """Same filters with identity unitaries."""
        return LqccParams(self.filter_a, self.filter_b)

    def operator(self) -> ComplexMatrix:
        """U_A f_a x U_B f_b."""
        return tensor_product(self.unitary_a @ filter_matrix(self.filter_a),
                              self.unitary_b @ filter_matrix(self.filter_b))

    def flipped_operator(self) -> ComplexMatrix:
        """Same operator with both filter axes reversed; transports spin-flipped states."""
        return tensor_product(self.unitary_a @ filter_matrix(self.filter_a.flipped()),
                              self.unitary_b @ filter_matrix(self.filter_b.flipped()))

    @property
    def determinant_weight(self) -> float:
        """mu^2 nu^2 (1 - a^2)(1 - b^2)."""
        return self.filter_a.determinant * self.filter_b.determinant


class LqccOutcome(NamedTuple):
    rho_out: ComplexMatrix
    norm: float

    @property
    def unnormalized(self) -> ComplexMatrix:
        return self.rho_out * self.norm


def _transport(op: ComplexMatrix, rho: ComplexMatrix) -> ComplexMatrix:
    out = op @ rho @ op.conj().T
    return (out + out.conj().T) / 2


def apply_lqcc(rho, params: LqccParams) -> LqccOutcome:
    """Apply (A x B) rho (A x B)^dagger and normalize; the trace is returned as `norm`."""
    rho = as_density_matrix(rho)
    unnormalized = _transport(params.operator(), rho)
    norm = float(np.trace(unnormalized).real)
    if norm <= MIN_NORMALIZATION:
        raise DomainError(f"Filter annihilates state (normalization {norm:.3e})")
    rho_out = unnormalized / norm
    as_density_matrix(rho_out)
    return LqccOutcome(rho_out, norm)


def apply_lqcc_tilde(rho, params: LqccParams) -> ComplexMatrix:
    """
    Spin-flipped image of the transformed state.

    rho~ is carried by the flipped-axis filters and divided by the same
    normalization t as apply_lqcc, so the result equals
    spin_flip(unnormalized rho') / t.
    """
    rho = as_density_matrix(rho)
    norm = apply_lqcc(rho, params).norm
    # sigma_y U* sigma_y equals U up to a global phase, which cancels here
    return _transport(params.flipped_operator(), spin_flip(rho)) / norm


def normalization_factor(t: Sequence[float], params: LqccParams) -> float:
    """
    Closed-form success weight for a BD state:
    mu^2 nu^2 ((1 + a^2)(1 + b^2) + 4ab sum_i m_i t_i n_i).
    """
    if not params.has_identity_unitaries:
        raise InputError("Closed-form normalization needs identity unitaries; use apply_lqcc's trace")
    t = np.asarray(t, dtype=float)
    fa, fb = params.filter_a, params.filter_b
    cross = float(np.sum(np.asarray(fa.m) * t * np.asarray(fb.m)))
    return (fa.mu ** 2 * fb.mu ** 2
            * ((1 + fa.a ** 2) * (1 + fb.a ** 2) + 4 * fa.a * fb.a * cross))


def predict_concurrence_transform(c_in: float, t: Sequence[float], params: LqccParams) -> float:
    """C(rho') = mu^2 nu^2 (1 - a^2)(1 - b^2) / t(rho) * C(rho)."""
    if not -1e-12 <= c_in <= 1 + 1e-12:
        raise InputError(f"Concurrence must lie in [0, 1], got {c_in}")
    norm = normalization_factor(t, params)
    if norm <= MIN_NORMALIZATION:
        raise DomainError(f"Filter annihilates state (normalization {norm:.3e})")
    return params.determinant_weight / norm * c_in


def cell_twist(s: BDState) -> np.ndarray:
    """
    Direction from a state to its nearest separable state, up to scale.

    This is minus the t-space vertex of the state's cell: (1, 1, 1) for the
    singlet cell. Separable states get (1, 1, 1) as well.
    """
    region = classify_region(s)
    cell = 4 if region.is_separable else region.cell
    return -BELL_SIGNS[cell - 1]


def restriction_product(s: BDState, params: LqccParams) -> float:
    """
    Cross term whose vanishing makes t(rho) = t(rho_s).

    Equals a b sum_i m_i d_i n_i with d = cell_twist(s), i.e. a b (m . n) in
    the singlet cell. Separable states coincide with their nearest state: 0.
    """
    if classify_region(s).is_separable:
        return 0.0
    d = cell_twist(s)
    fa, fb = params.filter_a, params.filter_b
    return fa.a * fb.a * float(np.sum(np.asarray(fa.m) * d * np.asarray(fb.m)))


def restriction_holds(s: BDState, params: LqccParams) -> bool:
    """True if t(rho) = t(rho_s) for this state and filter pair."""
    return abs(restriction_product(s, params)) <= RESTRICTION_TOL


class EntanglementTransform(NamedTuple):
    e_out: float
    e_predicted: float


def restricted_entanglement_transform(s: BDState, params: LqccParams) -> EntanglementTransform:
    """
    Tilde-norm entanglement after a restricted LQCC step, measured and predicted.

    The measured value is sqrt(3) times the tilde distance between the
    transformed state and the transported nearest separable state (not a
    fresh minimization). The prediction scales E(rho) by the same factor as
    the concurrence law.
    """
    if not restriction_holds(s, params):
        raise InputError("Restricted LQCC condition not met (need ab = 0 or m.n = 0 in the state's cell)")
    norm = normalization_factor(s.t, params)
    if norm <= MIN_NORMALIZATION:
        raise DomainError(f"Filter annihilates state (normalization {norm:.3e})")
    rho_out = apply_lqcc(to_density_matrix(s), params).rho_out
    rho_s_out = apply_lqcc(to_density_matrix(nearest_separable_bd(s)), params).rho_out
    e_out = SQRT3 * tilde_distance(rho_out, rho_s_out)
    e_predicted = params.determinant_weight / norm * hs_entanglement(s)
    return EntanglementTransform(e_out, e_predicted)
