"""Shor's algorithm on a built-in statevector simulator.

Two interchangeable order-finding circuits: the full 2n+3-qubit form
with one recycled control qubit, and a reduced 2n+1-qubit form that
splits the run into 2n separate sub-circuits. Includes transpilation to
the basis {cx, id, rz, sx, x} with depth accounting, plus experiment
drivers for success-probability sweeps and phase histograms.
"""

from .circuit import (CSWAP, CX, H, ID, PHASE, RZ, SWAP, SX, X, CapacityError,
                      CircuitSpec, GateOp, Measure, Reset, invert_fragment)
from .classical import (Convergent, FactorOutcome, RetryReason, ScreenResult,
                        convergents, extract_factors, factor_from_phase,
                        feasible_a, gcd, is_prime, mod_inv, mod_pow,
                        multiplicative_order, recover_order, screen,
                        trial_division)
from .arithmetic import (ArithParams, RegisterLayout, build_cmult, build_iqft,
                         build_mod_add, build_phi_add, build_qft,
                         build_unitary_block_original,
                         build_unitary_block_reduced, original_layout,
                         reduced_layout)
from .driver import (FactorResult, IterationOutcome, PhaseSample,
                     build_original_circuit, build_reduced_subcircuit,
                     exact_phase_distribution, factor, feedback_angle,
                     phase_sample, run_original, run_reduced, single_iteration)
from .experiments import (PhaseHistogram, SweepCell, collect_phases,
                          depth_report, mean_success, phases_csv, run_sweep,
                          sweep_csv, sweep_details)
from .simulator import (MAX_QUBITS, MeasurementRecord, QuantumState,
                        apply_gate, derive_seed, measure, new_state, reset,
                        run, states_equal)
from .transpile import (BASIS_KINDS, DepthReport, circuit_depth, decompose,
                        depth_model, transpile)

__all__ = [name for name in dir() if not name.startswith("_")]
