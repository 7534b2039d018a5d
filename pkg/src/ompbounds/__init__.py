"""Greedy sparse recovery with signal-dependent performance bounds.

The package has three layers: numerical kernels and signal generators
(:mod:`ompbounds.numerics`, :mod:`ompbounds.signals`), the recovery
algorithm and the closed-form bounds (:mod:`ompbounds.recovery`,
:mod:`ompbounds.phi`, :mod:`ompbounds.bounds`), and the Monte Carlo
experiment runner plus CLI (:mod:`ompbounds.experiments`,
:mod:`ompbounds.cli`).
"""

__version__ = "0.1.0"

from .bounds import (
    BaselineMeasurement,
    MeasurementBoundQuery,
    RecoveryBoundQuery,
    asymptotic_measurement_bound,
    baseline_measurement_bound,
    baseline_measurement_bound_alt,
    baseline_probability_bound,
    beta_exponent,
    decaying_measurement_bound,
    measurement_bound,
    recovery_probability_bound,
)
from .experiments import (
    ExperimentConfig,
    ExperimentSummary,
    TABLE_CASES,
    gaussian_phi_probability_curve,
    preset_config,
    ratio_experiment,
    run_experiment,
    run_trial,
    wilson_halfwidth,
)
from .numerics import (
    IncrementalQR,
    LeastSquaresSolution,
    RankDeficiencyError,
    SensingMatrix,
    gaussian_matrix,
    least_squares,
    min_singular_value,
    split_seed,
)
from .phi import (
    PhiFunction,
    cauchy_schwarz,
    gaussian_phi_probability,
    gaussian_piecewise,
    phi_eval,
    phi_partial_sum,
    ratio_probability_bound,
    strongly_decaying,
)
from .recovery import DiagnosticTrace, RecoveryResult, adjudicate, omp_run, selection_diagnostic
from .signals import PhiCheckResult, SparseSignal, check_phi_inequality, generate_signal, l1l2_ratio
