"""Feedback control of a single qubit with variable-strength measurements.

A dephasing channel hits one of two non-orthogonal signal states; a
tunable-strength measurement followed by a conditional rotation steers it
back.  This package provides the exact density-matrix evaluation of that
loop, its closed-form optima, brute-force and Monte-Carlo cross-checks, a
two-photon model of the postselected gate that realises the measurement,
and simulated count-based state tomography.
"""

__version__ = "0.1.0"

from .channels import KrausPair, MeasurementOutcome, dephase, kraus_pair, measure, sample_outcome
from .photonic import (IDEAL_PPBS, MEASURED_PPBS, GateOutcome, MeterState, ModelPoint,
                       PostselectedGate, Ppbs, experimental_model_curve, gate_measurement,
                       ppbs_conditional)
from .protocol import (MAX_IMPROVEMENT_POINT, OPERATING_POINT, ProtocolParams, ProtocolResult,
                       avg_fidelity_analytic, avg_fidelity_opt, chi_opt, correction_unitary,
                       degenerate_corner, eta_opt, fidelity_dn, fidelity_h, run_protocol_exact,
                       run_protocol_mc, scheme_params)
from .qubit import (BlochVector, ValidationError, apply_unitary, bloch, density_from_bloch,
                    fidelity, make_input_state, rotation_y, to_density, validate_density,
                    validate_pure, validate_unitary)
from .sweep import (BruteForceOptimum, CrossoverPoint, GridSpec, ImprovementMax, SweepCell,
                    brute_force_protocol_opt, crossover_curve, crossover_p_closed_form,
                    find_max_improvement, sweep)
from .tomography import (CountRecord, MeasurementSetting, ReconstructedState,
                         ReconstructionError, expectation_counts, fidelity_with_error,
                         linear_inversion, mix_ensemble_counts, simulate_counts)

__all__ = [name for name in dir() if not name.startswith("_")]
