"""Parallel-in-time solving of linear ODE systems with sequence acceleration.

The package solves y' = Ay + Bu on a sliced time window with a Parareal
iteration whose fine propagator is refined each sweep, then extrapolates
the resulting per-slice iterate sequences with the epsilon algorithm. A
small simulated-annealing loop calibrates the exponent of an auxiliary
coupling series against a bootstrapped fine reference.
"""
from .accel import (
    AccelSpec,
    AuxParams,
    EpsilonTable,
    accelerate_with_aux,
    aux_series_term,
    epsilon_table,
    s_epsilon,
    shanks,
    terms_needed,
    vector_accelerate,
)
from .errors import (
    AlignmentError,
    ConfigError,
    DegenerateDenominatorError,
    DimensionError,
    InsufficientTermsError,
    NonFiniteError,
    NumericsError,
    PitaError,
    ScheduleError,
    SingularMatrixError,
    StabilityError,
)
from .model import LTISystem, OmegaSeries, TimeGrid, Trajectory, slice_boundaries
from .omega_study import SubdivisionSet, build_all_omega_series, build_omega_series, build_psi
from .optimize import (
    AnnealConfig,
    CalibrationResult,
    anneal_q,
    bootstrap_reference,
    check_label_spacing,
    objective,
    periodic_refresh,
    propagate_calibration,
)
from .parareal import (
    CLASSIC,
    SEMI_EXPLICIT,
    DeltaSchedule,
    PararealConfig,
    PararealResult,
    classic_parareal,
    coarse_g,
    extrapolated_solution,
    fine_f,
    semi_explicit_parareal,
)
from .propagators import (
    EXPLICIT,
    IMPLICIT,
    closed_form_explicit,
    exact_solution,
    explicit_euler_propagate,
    explicit_euler_step,
    implicit_euler_propagate,
    implicit_euler_step,
    propagate,
    stability_radius,
    step_count,
)

__version__ = "0.1.0"

__all__ = [
    "AccelSpec", "AuxParams", "EpsilonTable", "accelerate_with_aux",
    "aux_series_term", "epsilon_table", "s_epsilon", "shanks",
    "terms_needed", "vector_accelerate",
    "AlignmentError", "ConfigError", "DegenerateDenominatorError",
    "DimensionError", "InsufficientTermsError", "NonFiniteError",
    "NumericsError", "PitaError", "ScheduleError", "SingularMatrixError",
    "StabilityError",
    "LTISystem", "OmegaSeries", "TimeGrid", "Trajectory", "slice_boundaries",
    "SubdivisionSet", "build_all_omega_series", "build_omega_series", "build_psi",
    "AnnealConfig", "CalibrationResult", "anneal_q", "bootstrap_reference",
    "check_label_spacing", "objective", "periodic_refresh", "propagate_calibration",
    "CLASSIC", "SEMI_EXPLICIT", "DeltaSchedule", "PararealConfig",
    "PararealResult", "classic_parareal", "coarse_g", "extrapolated_solution",
    "fine_f", "semi_explicit_parareal",
    "EXPLICIT", "IMPLICIT", "closed_form_explicit", "exact_solution",
    "explicit_euler_propagate", "explicit_euler_step",
    "implicit_euler_propagate", "implicit_euler_step", "propagate",
    "stability_radius", "step_count",
]
