#!/usr/bin/env python3
"""
Entanglement measures for two-qubit states, with closed forms on BD states.

- Wootters concurrence via the spin-flipped state and the Hermitian chain
  R = sqrt(sqrt(rho) rho~ sqrt(rho)).
- Entanglement of formation from the concurrence (binary entropy, nats by default).
- Hilbert-Schmidt distance to the nearest separable BD state; on BD states
  sqrt(3) times that distance equals the concurrence.
- Tilde norm sqrt(tr(A A~)) and the distance/entanglement it generates.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from bd_states import (
    BDState,
    RegionLabel,
    apply_permutation,
    canonicalize_to_singlet,
    classify_region,
    to_density_matrix,
)
from core_linalg import (
    PSD_ERROR_TOL,
    SIGMA_Y,
    ComplexMatrix,
    as_complex_matrix,
    as_density_matrix,
    hermitian_eigen,
    psd_sqrt,
    tensor_product,
)
from exceptions import DomainError, InputError

logger = logging.getLogger(__name__)

SIGMA_YY = tensor_product(SIGMA_Y, SIGMA_Y)
SQRT3 = math.sqrt(3.0)

CONCURRENCE_SLACK = 1e-12
TILDE_CLAMP_TOL = 1e-10
TILDE_ERROR_TOL = 1e-8
ROOT_FLOOR = 1e-14


def spin_flip(rho) -> ComplexMatrix:
    """(sigma_y x sigma_y) rho* (sigma_y x sigma_y), conjugation in the computational basis."""
    rho = as_complex_matrix(rho, dims=(4,))
    return SIGMA_YY @ rho.conj() @ SIGMA_YY


def concurrence_from_squares(squares: Sequence[float]) -> float:
    """
    Concurrence from the eigenvalues of rho rho~ (the squared lambdas).

    For a unit-trace state these are at most 1, and rounding leaves noise of
    order 1e-16 where a rank-deficient state has exact zeros. Values at or
    below ROOT_FLOOR are zeroed before the square root.
    """
    squares = np.sort(np.asarray(squares, dtype=float))[::-1]
    lambdas = np.sqrt(np.where(squares > ROOT_FLOOR, squares, 0.0))
    c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]
    return float(min(1.0, max(0.0, c)))


def concurrence(rho) -> float:
    """
    Wootters concurrence max(0, l1 - l2 - l3 - l4).

    The l_i are the eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)), taken
    as square roots of the eigenvalues of the inner product.
    """
    rho = as_density_matrix(rho)
    root = psd_sqrt(rho)
    inner = root @ spin_flip(rho) @ root
    squares, _ = hermitian_eigen((inner + inner.conj().T) / 2)
    if squares[-1] < -PSD_ERROR_TOL:
        raise DomainError(f"sqrt(rho) rho~ sqrt(rho) is not positive semidefinite (eigenvalue {squares[-1]:.3e})")
    return concurrence_from_squares(squares)


def concurrence_bd(s: BDState) -> float:
    """Closed form max(0, 2 p4 - 1) on the singlet-canonical state."""
    canonical, _ = canonicalize_to_singlet(s)
    return max(0.0, 2.0 * canonical.p[3] - 1.0)


def binary_entropy(x: float, base: float = math.e) -> float:
    """H(x) = -x log x - (1-x) log(1-x) with 0 log 0 = 0."""
    h = 0.0
    for q in (x, 1.0 - x):
        if q > 0.0:
            h -= q * math.log(q)
    return h / math.log(base)


def entanglement_of_formation(c: float, log2: bool = False) -> float:
    """
    Entanglement of formation H(1/2 + 1/2 sqrt(1 - C^2)).

    Natural logarithms by default (maximum ln 2); `log2=True` gives ebits.
    """
    if not -CONCURRENCE_SLACK <= c <= 1.0 + CONCURRENCE_SLACK:
        raise InputError(f"Concurrence must lie in [0, 1], got {c}")
    c = min(1.0, max(0.0, c))
    x = 0.5 + 0.5 * math.sqrt(1.0 - c * c)
    return binary_entropy(x, base=2.0 if log2 else math.e)


def hs_distance_bd(t: Sequence[float], t_prime: Sequence[float]) -> float:
    """Hilbert-Schmidt distance of two BD states: 1/2 * Euclidean distance of their t-vectors."""
    diff = np.asarray(t, dtype=float) - np.asarray(t_prime, dtype=float)
    return 0.5 * float(np.linalg.norm(diff))


def nearest_separable_bd(s: BDState) -> BDState:
    """
    Closest separable BD state in Hilbert-Schmidt distance.

    In the singlet cell: p_i' = p_i + (p4 - 1/2)/3 for i < 4 and p4' = 1/2,
    i.e. t_i' = t_i - (1 + t1 + t2 + t3)/3, the orthogonal projection onto the
    octahedron face shared with the cell. Other cells are handled through
    the singlet relabeling. Separable inputs come back unchanged.
    """
    if classify_region(s).is_separable:
        return s
    canonical, perm = canonicalize_to_singlet(s)
    p = canonical.probs
    shift = (p[3] - 0.5) / 3.0
    projected = BDState((p[0] + shift, p[1] + shift, p[2] + shift, 0.5))
    return apply_permutation(projected, perm)


def hs_entanglement(s: BDState) -> float:
    """sqrt(3) times the H-S distance to the nearest separable state; equals the concurrence."""
    return SQRT3 * hs_distance_bd(s.t, nearest_separable_bd(s).t)


def tilde_norm(a) -> float:
    """sqrt(tr(A A~)); undefined when the trace is genuinely negative."""
    a = as_complex_matrix(a, dims=(4,))
    return _tilde_sqrt(float(np.trace(a @ spin_flip(a)).real))


def _tilde_sqrt(trace: float) -> float:
    if trace < -TILDE_ERROR_TOL:
        raise DomainError(f"Tilde distance undefined for this pair (trace {trace:.3e})")
    if trace < -TILDE_CLAMP_TOL:
        logger.warning("Clamping negative tilde trace %.3e to zero", trace)
    return math.sqrt(max(0.0, trace))


def tilde_distance(rho1, rho2) -> float:
    """sqrt(tr((rho1 - rho2)(rho1~ - rho2~))); reduces to the H-S distance on BD states."""
    rho1 = as_density_matrix(rho1)
    rho2 = as_density_matrix(rho2)
    return tilde_norm(rho1 - rho2)


def tilde_entanglement_bd(s: BDState) -> float:
    """sqrt(3) times the tilde distance to the nearest separable BD state."""
    rho = to_density_matrix(s)
    rho_s = to_density_matrix(nearest_separable_bd(s))
    return SQRT3 * tilde_distance(rho, rho_s)


@dataclass(frozen=True)
class MeasureReport:
    """Every quantity computed for one BD state."""

    p: Tuple[float, ...]
    t: Tuple[float, ...]
    region: RegionLabel
    concurrence: float
    eof_nats: float
    nearest_separable_p: Tuple[float, ...]
    nearest_separable_t: Tuple[float, ...]
    hs_distance_to_nearest: float
    hs_entanglement: float
    tilde_entanglement: float
    eof_bits: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'input': {'p': list(self.p), 't': list(self.t)},
            'region': self.region.label,
            'concurrence': self.concurrence,
            'eof_nats': self.eof_nats,
            'nearest_separable': {
                't': list(self.nearest_separable_t),
                'p': list(self.nearest_separable_p),
            },
            'hs_distance': self.hs_distance_to_nearest,
            'hs_entanglement': self.hs_entanglement,
            'tilde_entanglement': self.tilde_entanglement,
        }
        if self.eof_bits is not None:
            data['eof_bits'] = self.eof_bits
        return data


def measure_report(s: BDState, log2: bool = False) -> MeasureReport:
    """Compute every measure for one BD state."""
    c = concurrence_bd(s)
    nearest = nearest_separable_bd(s)
    distance = hs_distance_bd(s.t, nearest.t)
    report = MeasureReport(
        p=tuple(s.p),
        t=tuple(float(x) for x in s.t),
        region=classify_region(s),
        concurrence=c,
        eof_nats=entanglement_of_formation(c),
        nearest_separable_p=tuple(nearest.p),
        nearest_separable_t=tuple(float(x) for x in nearest.t),
        hs_distance_to_nearest=distance,
        hs_entanglement=SQRT3 * distance,
        tilde_entanglement=tilde_entanglement_bd(s),
        eof_bits=entanglement_of_formation(c, log2=True) if log2 else None,
    )
    logger.debug("Measured %r: region=%s C=%.6g", s, report.region, c)
    return report
