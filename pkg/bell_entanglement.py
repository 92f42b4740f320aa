#!/usr/bin/env python3
"""
Entanglement measures for Bell-decomposable two-qubit states.
Command-line front end: measure, nearest, lqcc, geometry and verify.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from bd_states import (
    BELL_NAMES,
    BOUNDARY_TOL,
    BDState,
    bd_t_from_matrix,
    classify_region,
    positivity_inequalities,
    probs_to_t,
    t_to_probs,
    to_density_matrix,
    werner_state,
)
from config import Settings, configure_logging
from exceptions import BellEntanglementError, InputError
from input_validation import InputValidator
from lqcc import (
    Filter,
    LqccParams,
    apply_lqcc,
    local_unitary,
    predict_concurrence_transform,
    restricted_entanglement_transform,
    restriction_holds,
)
from measures import MeasureReport, concurrence, concurrence_bd, measure_report
from oracle import OracleConfig, run_invariant_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_DOMAIN_ERROR = 3

JSON_DIGITS = 12
CSV_FLOAT_FORMAT = '%.6g'
GEOMETRY_COLUMNS = ['t1', 't2', 't3', 'region', 'concurrence']


def round_sig(value: Any, digits: int = JSON_DIGITS) -> Any:
    """Round every float inside nested lists/dicts to `digits` significant digits."""
    if isinstance(value, dict):
        return {k: round_sig(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_sig(v, digits) for v in value]
    if isinstance(value, (float, np.floating)):
        return float(f'{float(value):.{digits}g}') + 0.0
    return value


def round_state(p: Sequence[float], digits: int = JSON_DIGITS) -> Dict[str, List[float]]:
    """
    Rounded p and t that stay a valid, mutually consistent pair.

    The rounding residual of p goes into its largest entry so the sum stays
    within 1e-12 of one, and t is derived from the rounded p.
    """
    rounded = [round_sig(x, digits) for x in p]
    k = int(np.argmax(rounded))
    rounded[k] = round_sig(rounded[k] + 1.0 - sum(rounded), digits)
    return {'p': rounded, 't': round_sig(probs_to_t(rounded).tolist(), digits)}


def round_state_blocks(data: Dict[str, Any]) -> Dict[str, Any]:
    """Apply round_state to every top-level block that carries a probability vector."""
    out = dict(data)
    for key, block in data.items():
        if isinstance(block, dict) and len(block.get('p', ())) == 4:
            out[key] = {**block, **round_state(block['p'])}
    return out


def _fmt(values: Sequence[float]) -> str:
    return '(' + ', '.join(f'{v:.6g}' for v in values) + ')'


class ReportFormatter:
    """Render command results as JSON or text."""

    @staticmethod
    def format_json(data: Dict[str, Any]) -> str:
        return json.dumps(round_sig(round_state_blocks(data)), indent=2)

    @staticmethod
    def format_measure_text(report: MeasureReport) -> str:
        lines = []
        lines.append("Bell-decomposable state")
        lines.append(f"  p = {_fmt(report.p)}")
        lines.append(f"  t = {_fmt(report.t)}")
        if report.region.is_separable:
            lines.append("  region: separable (inside the octahedron)")
        else:
            cell = report.region.cell
            lines.append(f"  region: {report.region.label} (entangled, around Bell state {BELL_NAMES[cell - 1]})")
        lines.append(f"  concurrence: {report.concurrence:.10g}")
        lines.append(f"  entanglement of formation: {report.eof_nats:.10g} nats")
        if report.eof_bits is not None:
            lines.append(f"  entanglement of formation: {report.eof_bits:.10g} bits")
        lines.append(ReportFormatter._nearest_lines(report))
        lines.append(f"  H-S entanglement: {report.hs_entanglement:.10g}")
        lines.append(f"  tilde-norm entanglement: {report.tilde_entanglement:.10g}")
        return '\n'.join(lines)

    @staticmethod
    def _nearest_lines(report: MeasureReport) -> str:
        return '\n'.join([
            "  nearest separable state:",
            f"    t' = {_fmt(report.nearest_separable_t)}",
            f"    p' = {_fmt(report.nearest_separable_p)}",
            f"  H-S distance to nearest: {report.hs_distance_to_nearest:.10g}",
        ])

    @staticmethod
    def format_nearest_text(report: MeasureReport) -> str:
        return '\n'.join([
            f"  t = {_fmt(report.t)}  region: {report.region.label}",
            ReportFormatter._nearest_lines(report),
        ])

    @staticmethod
    def format_lqcc_text(data: Dict[str, Any]) -> str:
        lines = []
        lines.append("LQCC transformation")
        lines.append(f"  input t = {_fmt(data['input']['t'])}")
        output = data['output']
        if output['bell_diagonal']:
            lines.append(f"  output t = {_fmt(output['t'])}")
        else:
            lines.append("  output is not Bell-diagonal; density matrix (re, im):")
            for row in output['matrix']:
                lines.append('    ' + '  '.join(f'{re:+.6f}{im:+.6f}i' for re, im in row))
        lines.append(f"  normalization t(rho): {data['normalization']:.10g}")
        c = data['concurrence']
        lines.append(f"  concurrence: input {c['input']:.10g}, measured {c['measured']:.10g}, "
                     f"predicted {c['predicted']:.10g}")
        lines.append(f"  restricted condition t(rho) = t(rho_s): {'met' if data['restricted'] else 'not met'}")
        if 'entanglement' in data:
            e = data['entanglement']
            lines.append(f"  tilde entanglement: measured {e['measured']:.10g}, predicted {e['predicted']:.10g}")
        return '\n'.join(lines)

    @staticmethod
    def format_suite_text(report) -> str:
        frame = report.to_frame()[['samples', 'max_deviation', 'tolerance', 'passed', 'enforced']]
        status = 'all checks passed' if report.all_passed else f"{len(report.failures)} checks FAILED"
        return frame.to_string() + f"\n\n{status}"


class GeometryExporter:
    """Plottable samples of the BD tetrahedron."""

    @staticmethod
    def _row(t: Sequence[float]) -> Dict[str, Any]:
        s = BDState.from_t(t)
        return {
            't1': float(t[0]), 't2': float(t[1]), 't3': float(t[2]),
            'region': classify_region(s).label,
            'concurrence': concurrence_bd(s),
        }

    @staticmethod
    def region_grid(n: int, plane: Optional[Tuple[int, float]] = None) -> pd.DataFrame:
        """Grid of n points per axis over [-1, 1]^3 (or a plane), kept inside the tetrahedron."""
        axis = np.linspace(-1.0, 1.0, n)
        if plane is None:
            mesh = np.meshgrid(axis, axis, axis, indexing='ij')
        else:
            index, offset = plane
            free = [np.linspace(-1.0, 1.0, n)] * 2
            a, b = np.meshgrid(*free, indexing='ij')
            mesh = [a, b]
            mesh.insert(index, np.full_like(a, offset))
        points = np.stack([m.ravel() for m in mesh], axis=1)
        rows = [GeometryExporter._row(t) for t in points
                if min(positivity_inequalities(t).values()) >= -BOUNDARY_TOL]
        if not rows:
            logger.warning("Grid does not intersect the tetrahedron; emitting header only")
        return pd.DataFrame(rows, columns=GEOMETRY_COLUMNS)

    @staticmethod
    def werner_line(n: int) -> pd.DataFrame:
        """Segment from the maximally mixed state (x=0) to the singlet (x=1): t = (-x, -x, -x)."""
        rows = []
        for x in np.linspace(0.0, 1.0, n):
            s = werner_state(float(x))
            rows.append({
                't1': -x, 't2': -x, 't3': -x,
                'region': classify_region(s).label,
                'concurrence': concurrence_bd(s),
            })
        return pd.DataFrame(rows, columns=GEOMETRY_COLUMNS)

    @staticmethod
    def to_csv(frame: pd.DataFrame) -> str:
        frame = frame.copy()
        numeric = [c for c in GEOMETRY_COLUMNS if c != 'region']
        frame[numeric] = frame[numeric].astype(float) + 0.0
        return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')


def cmd_measure(state: BDState, as_json: bool = False, log2: bool = False) -> str:
    report = measure_report(state, log2=log2)
    if as_json:
        return ReportFormatter.format_json(report.to_dict())
    return ReportFormatter.format_measure_text(report)


def cmd_nearest(state: BDState, as_json: bool = False) -> str:
    report = measure_report(state)
    if as_json:
        full = report.to_dict()
        keys = ('input', 'region', 'nearest_separable', 'hs_distance')
        return ReportFormatter.format_json({k: full[k] for k in keys})
    return ReportFormatter.format_nearest_text(report)


def lqcc_report(state: BDState, params: LqccParams) -> Dict[str, Any]:
    """
    Transform a BD state and compare measured quantities with the laws.

    Predictions use the filter part of `params`: local unitaries change
    neither the normalization nor the concurrence.
    """
    rho = to_density_matrix(state)
    outcome = apply_lqcc(rho, params)
    c_in = concurrence_bd(state)
    filters = params.filters_only()

    t_out = bd_t_from_matrix(outcome.rho_out)
    if t_out is not None:
        output = {'bell_diagonal': True, 't': t_out.tolist(), 'p': t_to_probs(t_out).tolist()}
    else:
        output = {'bell_diagonal': False,
                  'matrix': [[[z.real, z.imag] for z in row] for row in outcome.rho_out]}

    data = {
        'input': {'p': list(state.p), 't': state.t.tolist()},
        'params': {
            'a': {'mu': params.filter_a.mu, 'a': params.filter_a.a, 'm': list(params.filter_a.m)},
            'b': {'nu': params.filter_b.mu, 'b': params.filter_b.a, 'n': list(params.filter_b.m)},
            'identity_unitaries': params.has_identity_unitaries,
        },
        'output': output,
        'normalization': outcome.norm,
        'concurrence': {
            'input': c_in,
            'measured': concurrence(outcome.rho_out),
            'predicted': predict_concurrence_transform(c_in, state.t, filters),
        },
        'restricted': restriction_holds(state, params),
    }
    if data['restricted']:
        e_out, e_predicted = restricted_entanglement_transform(state, filters)
        data['entanglement'] = {'measured': e_out, 'predicted': e_predicted, 'kind': 'transported'}
    return data


def cmd_lqcc(state: BDState, params: LqccParams, as_json: bool = False) -> str:
    data = lqcc_report(state, params)
    if as_json:
        return ReportFormatter.format_json(data)
    return ReportFormatter.format_lqcc_text(data)


def cmd_geometry(grid: int, plane: Optional[Tuple[int, float]] = None, werner: bool = False) -> str:
    grid = InputValidator.validate_grid(grid)
    frame = GeometryExporter.werner_line(grid) if werner else GeometryExporter.region_grid(grid, plane)
    logger.info("Geometry export: %d rows", len(frame))
    return GeometryExporter.to_csv(frame)


def cmd_verify(config: OracleConfig, as_text: bool = False) -> Tuple[str, int]:
    report = run_invariant_suite(config)
    status = EXIT_OK if report.all_passed else EXIT_VERIFICATION_FAILED
    if as_text:
        return ReportFormatter.format_suite_text(report), status
    return report.to_json(), status


def _params_from_args(args: argparse.Namespace) -> LqccParams:
    filter_a = Filter(args.mu, args.a, InputValidator.parse_axis(args.m))
    filter_b = Filter(args.nu, args.b, InputValidator.parse_axis(args.n))
    unitary_a = local_unitary(InputValidator.parse_axis(args.ua), args.ua_angle)
    unitary_b = local_unitary(InputValidator.parse_axis(args.ub), args.ub_angle)
    return LqccParams(filter_a, filter_b, unitary_a, unitary_b)


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--p', type=str, help='Bell-basis probabilities p1,p2,p3,p4')
    group.add_argument('--t', type=str, help='Correlation vector t1,t2,t3')


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description='Entanglement measures and LQCC laws for Bell-decomposable two-qubit states'
    )
    parser.add_argument('--log-level', type=str, default=settings.log_level,
                        help=f'Logging level (default: {settings.log_level})')
    sub = parser.add_subparsers(dest='command', required=True)

    measure = sub.add_parser('measure', help='All measures for one state')
    _add_state_flags(measure)
    measure.add_argument('--json', action='store_true', help='Emit JSON')
    measure.add_argument('--log2', action='store_true', help='Also report entanglement of formation in bits')

    nearest = sub.add_parser('nearest', help='Nearest separable state only')
    _add_state_flags(nearest)
    nearest.add_argument('--json', action='store_true', help='Emit JSON')

    lqcc = sub.add_parser('lqcc', help='Apply a local filtering operation')
    _add_state_flags(lqcc)
    lqcc.add_argument('--mu', type=float, default=1.0, help='A-side filter scale (default: 1)')
    lqcc.add_argument('--a', type=float, default=0.0, help='A-side filter strength, |a| < 1 (default: 0)')
    lqcc.add_argument('--m', type=str, default='z', help='A-side filter axis: x, y, z or ux,uy,uz (default: z)')
    lqcc.add_argument('--nu', type=float, default=1.0, help='B-side filter scale (default: 1)')
    lqcc.add_argument('--b', type=float, default=0.0, help='B-side filter strength, |b| < 1 (default: 0)')
    lqcc.add_argument('--n', type=str, default='z', help='B-side filter axis (default: z)')
    lqcc.add_argument('--ua', type=str, default='z', help='A-side rotation axis (default: z)')
    lqcc.add_argument('--ua-angle', type=float, default=0.0, help='A-side rotation angle in radians (default: 0)')
    lqcc.add_argument('--ub', type=str, default='z', help='B-side rotation axis (default: z)')
    lqcc.add_argument('--ub-angle', type=float, default=0.0, help='B-side rotation angle in radians (default: 0)')
    lqcc.add_argument('--json', action='store_true', help='Emit JSON')

    geometry = sub.add_parser('geometry', help='CSV samples of the state tetrahedron')
    geometry.add_argument('--grid', type=int, default=11, help='Points per axis (default: 11)')
    geometry.add_argument('--plane', type=str, default=None, help='Restrict to a plane, e.g. t3=0')
    geometry.add_argument('--werner', action='store_true', help='Emit the Werner line t = (-x, -x, -x)')
    geometry.add_argument('-o', '--output', type=str, default=None, help='Write CSV to this file')

    verify = sub.add_parser('verify', help='Run the invariant suite')
    verify.add_argument('--seed', type=int, default=settings.seed, help=f'Seed (default: {settings.seed})')
    verify.add_argument('--samples', type=int, default=settings.samples,
                        help=f'Samples per check (default: {settings.samples})')
    verify.add_argument('--grid-step', type=float, default=settings.grid_step,
                        help=f'Grid oracle step (default: {settings.grid_step})')
    verify.add_argument('--tolerance', type=float, default=None,
                        help='Override every check tolerance')
    verify.add_argument('--workers', type=int, default=settings.workers,
                        help=f'Worker threads (default: {settings.workers})')
    verify.add_argument('--text', action='store_true', help='Emit a table instead of JSON')
    return parser


def run(args: argparse.Namespace) -> int:
    if args.command == 'measure':
        state = InputValidator.parse_state(args.p, args.t)
        print(cmd_measure(state, as_json=args.json, log2=args.log2))
    elif args.command == 'nearest':
        state = InputValidator.parse_state(args.p, args.t)
        print(cmd_nearest(state, as_json=args.json))
    elif args.command == 'lqcc':
        state = InputValidator.parse_state(args.p, args.t)
        print(cmd_lqcc(state, _params_from_args(args), as_json=args.json))
    elif args.command == 'geometry':
        plane = InputValidator.parse_plane(args.plane) if args.plane else None
        csv = cmd_geometry(args.grid, plane=plane, werner=args.werner)
        if args.output:
            Path(args.output).write_text(csv, encoding='utf-8')
            logger.info("Geometry saved to: %s", args.output)
        else:
            sys.stdout.write(csv)
    elif args.command == 'verify':
        config = OracleConfig(seed=args.seed, grid_step=args.grid_step, sample_count=args.samples,
                              tolerance=args.tolerance, workers=args.workers)
        output, status = cmd_verify(config, as_text=args.text)
        print(output)
        return status
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    try:
        settings = Settings()
    except InputError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    args = build_parser(settings).parse_args(argv)
    if not isinstance(logging.getLevelName(args.log_level.upper()), int):
        print(f"Error: unknown log level {args.log_level!r}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    configure_logging(args.log_level)
    try:
        return run(args)
    except InputError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except BellEntanglementError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DOMAIN_ERROR


if __name__ == '__main__':
    sys.exit(main())
