#!/usr/bin/env python3
"""
Example usage of the Bell-decomposable entanglement toolkit
Demonstrates how to use the modules programmatically.
"""

from bd_states import BDState, to_density_matrix, werner_state
from exceptions import BellEntanglementError
from lqcc import AXES, Filter, LqccParams, apply_lqcc, predict_concurrence_transform, restricted_entanglement_transform
from measures import concurrence, measure_report
from oracle import OracleConfig, run_invariant_suite


def example_usage():
    """Example of measuring, filtering and verifying programmatically."""

    # Step 1: Measure a state
    print("Measuring p = (0.1, 0.1, 0.1, 0.7)...")
    state = BDState((0.1, 0.1, 0.1, 0.7))
    report = measure_report(state, log2=True)
    print(f"Region: {report.region}")
    print(f"Concurrence: {report.concurrence:.6f}")
    print(f"Entanglement of formation: {report.eof_nats:.6f} nats ({report.eof_bits:.6f} bits)")
    print(f"Nearest separable t: {report.nearest_separable_t}")

    # Step 2: Apply a local filter on one side
    print("\nFiltering with a = 0.5 along x on side A...")
    params = LqccParams(Filter(1.0, 0.5, AXES['x']), Filter())
    try:
        outcome = apply_lqcc(to_density_matrix(state), params)
        predicted = predict_concurrence_transform(report.concurrence, state.t, params)
        e_out, e_predicted = restricted_entanglement_transform(state, params)

        print(f"Success weight: {outcome.norm:.6f}")
        print(f"Concurrence after filtering: {concurrence(outcome.rho_out):.6f} (predicted {predicted:.6f})")
        print(f"Tilde entanglement after filtering: {e_out:.6f} (predicted {e_predicted:.6f})")
    except BellEntanglementError as e:
        print(f"\nError: {e}")

    # Step 3: Walk the Werner line
    print("\n" + "=" * 50)
    print("WERNER LINE")
    print("=" * 50)
    for x in (0.0, 0.25, 1 / 3, 0.5, 0.75, 1.0):
        print(f"x = {x:.3f}: C = {measure_report(werner_state(x)).concurrence:.4f}")

    # Step 4: Quick verification run
    print("\nRunning a small invariant suite...")
    suite = run_invariant_suite(OracleConfig(sample_count=20, grid_step=0.05))
    print(f"{len(suite.records)} checks, {'all passed' if suite.all_passed else 'FAILURES'}")
    for record in suite.failures:
        print(f"  {record.name}: {record.max_deviation} > {record.tolerance}")


if __name__ == '__main__':
    example_usage()
