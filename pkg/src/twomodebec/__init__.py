"""Simulator and analysis toolkit for two Josephson-coupled bosonic modes.

Exact evolution by per-block diagonalization, a closed-form propagator
for balanced collisions, coherent-state cat construction and
decomposition, Husimi phase-space maps, and single-mode phase damping.
"""

from .analytic import (AnalyticAmplitudes, amplitudes_at,
                       evolved_state_analytic, transformed_hamiltonian_check)
from .dephasing import DampingParams, kerr_drifted_gcs, phase_damp, purity_series
from .evolution import (BlockHamiltonian, BlockSpectrum, ConvergenceError,
                        build_block, diagonalize_block, evolve)
from .gcs import (CatDecomposition, GcsState, RationalPhase,
                  cat_coefficients, cat_reconstruct, cat_size,
                  detect_rational_phase, gcs_from_vacuum_start,
                  purification_initial_condition, purification_times)
from .husimi import HusimiGrid, count_packets, husimi
from .model import (CoherentPair, DerivedParams, ModelParams,
                    ResourceLimitError, TwoModeState, coherent_product,
                    derive_params, estimate_formation_time)
from .observables import (ClosedFormRecord, ModeDiagnostics,
                          SingleModeDensity, closed_form_record,
                          diagnostics, reduce_mode_a, reduce_mode_b)

__version__ = "0.1.0"
