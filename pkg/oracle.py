#!/usr/bin/env python3
"""
Independent verification of the closed forms.

Random state and filter generators, an exhaustive grid search for the
nearest separable BD state, a second concurrence route through the
eigenvalues of rho rho~, and the invariant suite that ties every module
together into one machine-readable report.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from bd_states import (
    BDState,
    apply_permutation,
    canonicalize_to_singlet,
    classify_region,
    is_separable_by_inequalities,
    positivity_inequalities,
    ppt_inequalities,
    probs_to_t,
    t_to_probs,
    to_density_matrix,
)
from core_linalg import (
    ComplexMatrix,
    as_density_matrix,
    hermitian_eigen,
    hs_distance,
    partial_transpose_b,
    psd_sqrt,
)
from exceptions import BellEntanglementError, InputError, NumericalError
from lqcc import (
    Filter,
    LqccParams,
    apply_lqcc,
    apply_lqcc_tilde,
    cell_twist,
    filter_flip_identity_check,
    local_unitary,
    normalization_factor,
    predict_concurrence_transform,
    restricted_entanglement_transform,
)
from measures import (
    concurrence,
    concurrence_bd,
    concurrence_from_squares,
    entanglement_of_formation,
    hs_distance_bd,
    hs_entanglement,
    nearest_separable_bd,
    spin_flip,
    tilde_entanglement_bd,
)

logger = logging.getLogger(__name__)

IMAG_WARN_TOL = 1e-9
IMAG_ERROR_TOL = 1e-8
GRID_MEMBERSHIP_TOL = 1e-9
BOUNDARY_OFFSET = 1e-9
BOUNDARY_SAMPLES = 50


@dataclass(frozen=True)
class OracleConfig:
    """
    Settings for one suite run.

    `tolerance` of None keeps each check's own tolerance; a positive value
    replaces all of them.
    """

    seed: int = 0
    grid_step: float = 0.01
    sample_count: int = 1000
    tolerance: Optional[float] = None
    workers: int = 1

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise InputError(f"Seed must be an unsigned 64-bit integer, got {self.seed}")
        validate_grid_step(self.grid_step)
        if self.sample_count < 1:
            raise InputError(f"Sample count must be at least 1, got {self.sample_count}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise InputError(f"Tolerance must be positive, got {self.tolerance}")
        if self.workers < 1:
            raise InputError(f"Worker count must be at least 1, got {self.workers}")


def validate_grid_step(grid_step: float) -> int:
    """Return the number of grid cells across [-1, 1]."""
    if not 0 < grid_step <= 0.1:
        raise InputError(f"Grid step must lie in (0, 0.1], got {grid_step}")
    cells = 2.0 / grid_step
    if abs(cells - round(cells)) > 1e-9 * cells:
        raise InputError(f"Grid step {grid_step} does not divide 2 into whole cells")
    return int(round(cells))


# Samplers -----------------------------------------------------------------

def sample_bd(rng: np.random.Generator) -> BDState:
    """Uniform on the probability simplex (sorted-uniform spacings)."""
    cuts = np.sort(rng.random(3))
    return BDState(tuple(np.diff(np.concatenate(([0.0], cuts, [1.0])))))


def sample_entangled_bd(rng: np.random.Generator, cell: int) -> BDState:
    """Uniform on the entangled cell around Bell vertex `cell` (p_cell > 1/2)."""
    if cell not in (1, 2, 3, 4):
        raise InputError(f"Cell index must be 1..4, got {cell}")
    while True:
        p = 0.5 * sample_bd(rng).probs
        p[cell - 1] += 0.5
        s = BDState(tuple(p))
        region = classify_region(s)
        if region.cell == cell:
            return s


def sample_boundary_bd(rng: np.random.Generator, offset: float) -> BDState:
    """State at distance `offset` in p_cell from the PPT face of a random cell (positive = entangled side)."""
    cell = int(rng.integers(1, 5))
    while True:
        cuts = np.sort(rng.random(2))
        rest = 0.5 * np.diff(np.concatenate(([0.0], cuts, [1.0]))) - offset / 3.0
        if np.all(rest > 0):
            break
    return BDState(tuple(np.insert(rest, cell - 1, 0.5 + offset)))


def sample_general_state(rng: np.random.Generator) -> ComplexMatrix:
    """G G^dagger / tr with G a complex Gaussian 4x4 matrix."""
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def sample_unit_vector(rng: np.random.Generator) -> np.ndarray:
    """Uniform direction on the unit sphere."""
    while True:
        v = rng.normal(size=3)
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return v / norm


def sample_filter(rng: np.random.Generator, max_strength: float = 0.9) -> Filter:
    """Filter with random scale, strength |a| <= max_strength and axis."""
    return Filter(mu=float(rng.uniform(0.5, 1.5)),
                  a=float(rng.uniform(-max_strength, max_strength)),
                  m=tuple(sample_unit_vector(rng)))


def sample_unitary(rng: np.random.Generator) -> ComplexMatrix:
    """Local rotation about a random axis by a random angle."""
    return local_unitary(sample_unit_vector(rng), float(rng.uniform(0.0, 2 * math.pi)))


def sample_lqcc_params(rng: np.random.Generator, with_unitaries: bool = False) -> LqccParams:
    """Random filter pair, optionally with random local unitaries."""
    fa, fb = sample_filter(rng), sample_filter(rng)
    if not with_unitaries:
        return LqccParams(fa, fb)
    return LqccParams(fa, fb, sample_unitary(rng), sample_unitary(rng))


def sample_restricted_params(rng: np.random.Generator, s: BDState) -> LqccParams:
    """Filters with ab = 0 or with axes orthogonal in the state's cell metric."""
    fa, fb = sample_filter(rng), sample_filter(rng)
    branch = int(rng.integers(0, 3))
    if branch == 0:
        fa = Filter(fa.mu, 0.0, fa.m)
    elif branch == 1:
        fb = Filter(fb.mu, 0.0, fb.m)
    else:
        twisted = cell_twist(s) * np.asarray(fa.m)
        n = np.cross(twisted, sample_unit_vector(rng))
        while np.linalg.norm(n) < 1e-6:
            n = np.cross(twisted, sample_unit_vector(rng))
        fb = Filter(fb.mu, fb.a, tuple(n / np.linalg.norm(n)))
    return LqccParams(fa, fb)


def _mixed_states(rng: np.random.Generator, count: int) -> List[BDState]:
    """Alternate uniform samples with entangled samples cycling through the four cells."""
    states = []
    for i in range(count):
        if i % 2 == 0:
            states.append(sample_bd(rng))
        else:
            states.append(sample_entangled_bd(rng, (i // 2) % 4 + 1))
    return states


def _entangled_states(rng: np.random.Generator, count: int) -> List[BDState]:
    return [sample_entangled_bd(rng, i % 4 + 1) for i in range(count)]


# Oracles ------------------------------------------------------------------

def brute_force_nearest_separable(t: Sequence[float], grid_step: float,
                                  workers: int = 1) -> Tuple[np.ndarray, float]:
    """
    Exhaustive scan of the grid over [-1, 1]^3 restricted to the octahedron.

    Returns the grid point closest to `t` in Hilbert-Schmidt distance and
    that distance. The distance is 1/2-Lipschitz in t and every point of the
    octahedron has a grid point inside it within sqrt(3) * grid_step, so
    the result exceeds the true minimum by less than grid_step. Slices of
    constant t1 are scanned independently; ties resolve to the lowest grid
    index whatever the worker count.
    """
    t = np.asarray(t, dtype=float)
    t_to_probs(t)
    cells = validate_grid_step(grid_step)
    axis = np.linspace(-1.0, 1.0, cells + 1)
    t2, t3 = np.meshgrid(axis, axis, indexing='ij')
    l1 = np.abs(t2) + np.abs(t3)
    tail = (t2 - t[1]) ** 2 + (t3 - t[2]) ** 2

    def scan(i: int) -> Tuple[float, int, int]:
        inside = l1 <= 1.0 - abs(axis[i]) + GRID_MEMBERSHIP_TOL
        if not inside.any():
            return math.inf, i, -1
        d2 = np.where(inside, tail + (axis[i] - t[0]) ** 2, np.inf)
        j = int(np.argmin(d2))
        return float(d2.flat[j]), i, j

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(scan, range(cells + 1)))
    else:
        results = [scan(i) for i in range(cells + 1)]
    d2, i, j = min(results)
    best = np.array([axis[i], t2.flat[j], t3.flat[j]])
    logger.debug("Grid scan over %d slices: best %s", cells + 1, best)
    return best, 0.5 * math.sqrt(d2)


def concurrence_alt_route(rho) -> float:
    """
    Concurrence from the square roots of the eigenvalues of the non-Hermitian
    product rho rho~.
    """
    rho = as_density_matrix(rho)
    eigenvalues = np.linalg.eigvals(rho @ spin_flip(rho))
    worst_imag = float(np.max(np.abs(eigenvalues.imag)))
    if worst_imag > IMAG_ERROR_TOL:
        raise NumericalError(f"rho rho~ has eigenvalue with imaginary part {worst_imag:.3e}")
    if worst_imag > IMAG_WARN_TOL:
        logger.warning("rho rho~ eigenvalue imaginary part %.3e above %.0e", worst_imag, IMAG_WARN_TOL)
    return concurrence_from_squares(eigenvalues.real)


# Invariant suite ----------------------------------------------------------

@dataclass
class CheckRecord:
    name: str
    samples: int
    max_deviation: Optional[float]
    tolerance: float
    passed: bool
    enforced: bool = True
    error: Optional[str] = None


@dataclass
class SuiteReport:
    config: OracleConfig
    records: List[CheckRecord] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.records if r.enforced)

    @property
    def failures(self) -> List[CheckRecord]:
        return [r for r in self.records if r.enforced and not r.passed]

    def to_dict(self) -> Dict[str, Any]:
        checks = {}
        for r in self.records:
            entry = {
                'samples': r.samples,
                'max_deviation': r.max_deviation,
                'tolerance': r.tolerance,
                'pass': r.passed,
                'enforced': r.enforced,
            }
            if r.error:
                entry['error'] = r.error
            checks[r.name] = entry
        return {
            'config': asdict(self.config),
            'all_passed': self.all_passed,
            'checks': checks,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.records]).set_index('name')


CheckResult = Tuple[int, float]


@dataclass(frozen=True)
class _Check:
    name: str
    tolerance: float
    run: Callable[[np.random.Generator, OracleConfig], CheckResult]
    enforced: bool = True


def _lqcc_count(config: OracleConfig) -> int:
    return max(1, config.sample_count // 2)


def _check_eigen_reconstruction(rng, config):
    worst = 0.0
    for _ in range(config.sample_count):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        h = (g + g.conj().T) / 2
        values, vectors = hermitian_eigen(h)
        worst = max(worst, float(np.linalg.norm((vectors * values) @ vectors.conj().T - h)))
    return config.sample_count, worst


def _check_psd_sqrt_square(rng, config):
    worst = 0.0
    for _ in range(config.sample_count):
        m = sample_general_state(rng)
        root = psd_sqrt(m)
        worst = max(worst, float(np.linalg.norm(root @ root - m)))
    return config.sample_count, worst


def _check_partial_transpose_involution(rng, config):
    worst = 0.0
    for _ in range(config.sample_count):
        rho = sample_general_state(rng)
        worst = max(worst, float(np.max(np.abs(partial_transpose_b(partial_transpose_b(rho)) - rho))))
    return config.sample_count, worst


def _check_hs_triangle(rng, config):
    worst = 0.0
    for _ in range(config.sample_count):
        a, b, c = (sample_general_state(rng) for _ in range(3))
        excess = hs_distance(a, c) - hs_distance(a, b) - hs_distance(b, c)
        worst = max(worst, excess)
    return config.sample_count, worst


def _check_hs_euclidean_reduction(rng, config):
    worst = 0.0
    for _ in range(config.sample_count):
        s1, s2 = sample_bd(rng), sample_bd(rng)
        direct = hs_distance(to_density_matrix(s1), to_density_matrix(s2))
        worst = max(worst, abs(direct - hs_distance_bd(s1.t, s2.t)))
    return config.sample_count, worst


def _check_probs_t_round_trip(rng, config):
    worst = 0.0
    for _ in range(config.sample_count):
        p = sample_bd(rng).probs
        worst = max(worst, float(np.max(np.abs(t_to_probs(probs_to_t(p)) - p))))
    return config.sample_count, worst


def _check_ppt_matches_octahedron(rng, config):
    states = [sample_bd(rng) for _ in range(config.sample_count)]
    for k in range(BOUNDARY_SAMPLES):
        offset = BOUNDARY_OFFSET if k % 2 == 0 else -BOUNDARY_OFFSET
        states.append(sample_boundary_bd(rng, offset))
    mismatches = 0
    for s in states:
        lowest = hermitian_eigen(partial_transpose_b(to_density_matrix(s)))[0][-1]
        ppt = bool(lowest >= -1e-10)
        verdicts = {ppt, is_separable_by_inequalities(s.t), classify_region(s).is_separable}
        mismatches += len(verdicts) > 1
    return len(states), float(mismatches)


def _check_region_matches_concurrence(rng, config):
    mismatches = 0
    states = _mixed_states(rng, config.sample_count)
    for s in states:
        c = concurrence_bd(s)
        if classify_region(s).is_separable:
            mismatches += c > 1e-10
        else:
            mismatches += c <= 0.0
    return len(states), float(mismatches)


def _check_canonical_preserves_probabilities(rng, config):
    worst = 0.0
    states = _mixed_states(rng, config.sample_count)
    for s in states:
        canonical, perm = canonicalize_to_singlet(s)
        worst = max(worst, float(np.max(np.abs(np.sort(s.probs) - np.sort(canonical.probs)))))
        if canonical.p[3] != max(s.p) or apply_permutation(canonical, perm) != s:
            worst = max(worst, 1.0)
    return len(states), worst


def _check_concurrence_routes_agree(rng, config):
    worst = 0.0
    states = _mixed_states(rng, config.sample_count)
    for s in states:
        worst = max(worst, abs(concurrence(to_density_matrix(s)) - concurrence_bd(s)))
    return len(states), worst


def _check_spin_flip_fixed_point(rng, config):
    worst = 0.0
    for _ in range(config.sample_count):
        rho = to_density_matrix(sample_bd(rng))
        worst = max(worst, float(np.max(np.abs(spin_flip(rho) - rho))))
    return config.sample_count, worst


def _check_entanglement_chain(rng, config):
    worst = 0.0
    states = _entangled_states(rng, config.sample_count)
    for s in states:
        c = concurrence_bd(s)
        worst = max(worst, abs(hs_entanglement(s) - c), abs(tilde_entanglement_bd(s) - c))
    return len(states), worst


def _check_nearest_separable_feasible(rng, config):
    worst = 0.0
    states = _mixed_states(rng, config.sample_count)
    for s in states:
        t = nearest_separable_bd(s).t
        residuals = list(positivity_inequalities(t).values()) + list(ppt_inequalities(t).values())
        worst = max(worst, -min(residuals))
    return len(states), max(worst, 0.0)


def _check_nearest_separable_on_face(rng, config):
    worst = 0.0
    states = _entangled_states(rng, config.sample_count)
    for s in states:
        cell = classify_region(s).cell
        worst = max(worst, abs(nearest_separable_bd(s).p[cell - 1] - 0.5))
        canonical, _ = canonicalize_to_singlet(s)
        t = nearest_separable_bd(canonical).t
        worst = max(worst, abs(t.sum() + 1.0), float(np.max(t)), float(np.max(-1.0 - t)))
    return len(states), max(worst, 0.0)


def _check_eof_monotone(rng, config):
    grid = np.linspace(0.0, 1.0, 101)
    values = [entanglement_of_formation(float(c)) for c in grid]
    worst = max(0.0, max(a - b for a, b in zip(values, values[1:])))
    return len(grid), worst


def _check_concurrence_canonical_invariance(rng, config):
    worst = 0.0
    states = _mixed_states(rng, config.sample_count)
    for s in states:
        canonical, _ = canonicalize_to_singlet(s)
        worst = max(worst, abs(concurrence_bd(s) - concurrence_bd(canonical)))
    return len(states), worst


def _check_concurrence_lqcc_law(rng, config):
    worst = 0.0
    states = _mixed_states(rng, _lqcc_count(config))
    for s in states:
        params = sample_lqcc_params(rng)
        measured = concurrence(apply_lqcc(to_density_matrix(s), params).rho_out)
        predicted = predict_concurrence_transform(concurrence_bd(s), s.t, params)
        worst = max(worst, abs(measured - predicted))
    return len(states), worst


def _check_concurrence_lqcc_law_pure(rng, config):
    worst = 0.0
    count = _lqcc_count(config)
    for i in range(count):
        vertex = [0.0] * 4
        vertex[i % 4] = 1.0
        params = sample_lqcc_params(rng)
        measured = concurrence(apply_lqcc(to_density_matrix(BDState(tuple(vertex))), params).rho_out)
        worst = max(worst, abs(measured - predict_concurrence_transform(1.0, probs_to_t(vertex), params)))
    return count, worst


def _check_normalization_closed_form(rng, config):
    worst = 0.0
    states = _mixed_states(rng, _lqcc_count(config))
    for s in states:
        params = sample_lqcc_params(rng)
        direct = apply_lqcc(to_density_matrix(s), params).norm
        worst = max(worst, abs(normalization_factor(s.t, params) - direct))
    return len(states), worst


def _check_restricted_normalization_equal(rng, config):
    worst = 0.0
    states = _mixed_states(rng, _lqcc_count(config))
    for s in states:
        params = sample_restricted_params(rng, s)
        t_rho = normalization_factor(s.t, params)
        t_sep = normalization_factor(nearest_separable_bd(s).t, params)
        worst = max(worst, abs(t_rho - t_sep))
    return len(states), worst


def _check_restricted_entanglement_law(rng, config):
    worst = 0.0
    states = _mixed_states(rng, _lqcc_count(config))
    for s in states:
        e_out, e_predicted = restricted_entanglement_transform(s, sample_restricted_params(rng, s))
        worst = max(worst, abs(e_out - e_predicted))
    return len(states), worst


def _check_local_unitary_invariance(rng, config):
    worst = 0.0
    states = _mixed_states(rng, _lqcc_count(config))
    for s in states:
        params = LqccParams(unitary_a=sample_unitary(rng), unitary_b=sample_unitary(rng))
        rho = to_density_matrix(s)
        worst = max(worst, abs(concurrence(apply_lqcc(rho, params).rho_out) - concurrence(rho)))
    return len(states), worst


def _check_lqcc_output_valid(rng, config):
    worst = 0.0
    count = _lqcc_count(config)
    for i in range(count):
        rho = to_density_matrix(sample_bd(rng)) if i % 2 == 0 else sample_general_state(rng)
        out = apply_lqcc(rho, sample_lqcc_params(rng, with_unitaries=True)).rho_out
        lowest = float(np.linalg.eigvalsh(out)[0])
        worst = max(worst, abs(np.trace(out).real - 1.0), -lowest)
    return count, worst


def _check_filter_flip_identity(rng, config):
    count = _lqcc_count(config)
    worst = max(filter_flip_identity_check(sample_filter(rng)) for _ in range(count))
    return count, worst


def _check_tilde_transport(rng, config):
    worst = 0.0
    count = _lqcc_count(config)
    for _ in range(count):
        rho = to_density_matrix(sample_bd(rng))
        params = sample_lqcc_params(rng, with_unitaries=True)
        out = apply_lqcc(rho, params)
        direct = spin_flip(out.unnormalized) / out.norm
        worst = max(worst, float(np.linalg.norm(apply_lqcc_tilde(rho, params) - direct)))
    return count, worst


def _check_brute_force_nearest(rng, config):
    worst = 0.0
    states = _entangled_states(rng, min(100, config.sample_count))
    for s in states:
        _, d_grid = brute_force_nearest_separable(s.t, config.grid_step)
        d_closed = hs_distance_bd(s.t, nearest_separable_bd(s).t)
        worst = max(worst, abs(d_grid - d_closed))
    return len(states), worst


def _check_alt_route_bd(rng, config):
    worst = 0.0
    states = _mixed_states(rng, config.sample_count)
    for s in states:
        worst = max(worst, abs(concurrence_alt_route(to_density_matrix(s)) - concurrence_bd(s)))
    return len(states), worst


def _check_alt_route_general(rng, config):
    worst = 0.0
    count = max(1, config.sample_count // 5)
    for _ in range(count):
        rho = sample_general_state(rng)
        worst = max(worst, abs(concurrence_alt_route(rho) - concurrence(rho)))
    return count, worst


def _check_tilde_trace_nonnegative_general(rng, config):
    worst = 0.0
    violations = 0
    count = max(1, config.sample_count // 5)
    for _ in range(count):
        r1, r2 = sample_general_state(rng), sample_general_state(rng)
        trace = float(np.trace((r1 - r2) @ (spin_flip(r1) - spin_flip(r2))).real)
        if trace < 0:
            violations += 1
            worst = max(worst, -trace)
    if violations:
        logger.warning("Tilde trace negative on %d of %d general pairs", violations, count)
    return count, worst


CHECKS: Tuple[_Check, ...] = (
    _Check('eigen_reconstruction', 1e-9, _check_eigen_reconstruction),
    _Check('psd_sqrt_square', 1e-9, _check_psd_sqrt_square),
    _Check('partial_transpose_involution', 0.0, _check_partial_transpose_involution),
    _Check('hs_triangle_inequality', 1e-10, _check_hs_triangle),
    _Check('hs_euclidean_reduction', 1e-10, _check_hs_euclidean_reduction),
    _Check('probs_t_round_trip', 1e-12, _check_probs_t_round_trip),
    _Check('ppt_matches_octahedron', 0.0, _check_ppt_matches_octahedron),
    _Check('region_matches_concurrence', 0.0, _check_region_matches_concurrence),
    _Check('canonicalization_preserves_probabilities', 0.0, _check_canonical_preserves_probabilities),
    _Check('concurrence_routes_agree', 1e-9, _check_concurrence_routes_agree),
    _Check('spin_flip_fixed_point', 1e-12, _check_spin_flip_fixed_point),
    _Check('entanglement_chain', 1e-10, _check_entanglement_chain),
    _Check('nearest_separable_feasible', 1e-10, _check_nearest_separable_feasible),
    _Check('nearest_separable_on_face', 1e-12, _check_nearest_separable_on_face),
    _Check('eof_monotone', 0.0, _check_eof_monotone),
    _Check('concurrence_canonical_invariance', 0.0, _check_concurrence_canonical_invariance),
    _Check('concurrence_lqcc_law', 1e-9, _check_concurrence_lqcc_law),
    _Check('concurrence_lqcc_law_pure', 1e-9, _check_concurrence_lqcc_law_pure),
    _Check('normalization_closed_form', 1e-12, _check_normalization_closed_form),
    _Check('restricted_normalization_equal', 1e-12, _check_restricted_normalization_equal),
    _Check('restricted_entanglement_law', 1e-8, _check_restricted_entanglement_law),
    _Check('local_unitary_invariance', 1e-10, _check_local_unitary_invariance),
    _Check('lqcc_output_valid', 1e-10, _check_lqcc_output_valid),
    _Check('filter_flip_identity', 1e-12, _check_filter_flip_identity),
    _Check('tilde_transport_consistency', 1e-10, _check_tilde_transport),
    _Check('brute_force_nearest_separable', math.nan, _check_brute_force_nearest),
    _Check('concurrence_alt_route_bd', 1e-8, _check_alt_route_bd),
    _Check('concurrence_alt_route_general', 1e-8, _check_alt_route_general),
    _Check('tilde_trace_nonnegative_general', 1e-8, _check_tilde_trace_nonnegative_general, enforced=False),
)


def _run_check(index: int, check: _Check, config: OracleConfig) -> CheckRecord:
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, index]))
    tolerance = check.tolerance
    if math.isnan(tolerance):
        # Lipschitz bound of the grid oracle scales with the step
        tolerance = config.grid_step
    if config.tolerance is not None:
        tolerance = config.tolerance
    try:
        samples, deviation = check.run(rng, config)
    except BellEntanglementError as e:
        logger.error("Check %s raised: %s", check.name, e)
        return CheckRecord(check.name, 0, None, tolerance, False, check.enforced, str(e))
    deviation = float(deviation)
    passed = deviation <= tolerance
    logger.info("Check %s: %d samples, max deviation %.3e (tolerance %.1e) %s",
                check.name, samples, deviation, tolerance, 'ok' if passed else 'FAILED')
    return CheckRecord(check.name, samples, deviation, tolerance, passed, check.enforced)


def run_invariant_suite(config: OracleConfig) -> SuiteReport:
    """
    Run every invariant check and collect the results.

    Each check draws from its own seed stream derived from (seed, check
    index), so the report does not depend on the worker count. Failures are
    recorded, never raised.
    """
    logger.info("Running %d checks with %r", len(CHECKS), config)
    jobs = list(enumerate(CHECKS))
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(lambda job: _run_check(job[0], job[1], config), jobs))
    else:
        records = [_run_check(i, check, config) for i, check in jobs]
    report = SuiteReport(config, records)
    if not report.all_passed:
        logger.warning("%d checks failed: %s", len(report.failures),
                       ', '.join(r.name for r in report.failures))
    return report
