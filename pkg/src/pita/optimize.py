"""Calibration of the accelerator: bootstrap reference, objective, and
simulated annealing over the auxiliary damping exponent q.

The reference limit is manufactured by a very fine sequential run on the first
slice, so calibration never needs the analytic solution; studies may still swap
the exact value in as the reference.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .accel import AccelSpec, AuxParams, vector_accelerate
from .errors import ConfigError, ScheduleError, StabilityError
from .model import LTISystem, OmegaSeries
from .propagators import explicit_euler_propagate, stability_radius


@dataclass(frozen=True)
class AnnealConfig:
    q_min: float = 1e-10
    q_max: float = 1e2
    initial_temp: Optional[float] = None  # None: objective at the starting point
    cooling: float = 0.95
    steps: int = 2000
    proposal_scale: float = 0.5  # in log10 units
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.q_min < self.q_max:
            raise ConfigError(f"need 0 < q_min < q_max, got ({self.q_min}, {self.q_max})")
        if not 0 < self.cooling < 1:
            raise ConfigError(f"cooling must be in (0, 1), got {self.cooling}")
        if self.steps < 1:
            raise ConfigError(f"steps must be >= 1, got {self.steps}")
        if self.initial_temp is not None and not self.initial_temp > 0:
            raise ConfigError(f"initial_temp must be positive, got {self.initial_temp}")
        if not self.proposal_scale > 0:
            raise ConfigError(f"proposal_scale must be positive, got {self.proposal_scale}")


@dataclass(frozen=True)
class CalibrationResult:
    q_opt: float
    objective_at_opt: float
    reference_limit: np.ndarray
    evaluations: int


def bootstrap_reference(sys: LTISystem, t1: float, h_tiny: float) -> np.ndarray:
    """Sequential explicit Euler endpoint at t1 with a very small step."""
    if stability_radius(sys, h_tiny) >= 1.0:
        raise StabilityError(
            f"h={h_tiny} is outside the explicit stability region for this system"
        )
    return explicit_euler_propagate(sys, sys.y0, 0.0, t1, h_tiny).endpoint


def check_label_spacing(omega: OmegaSeries, low: float, high: float):
    """Consecutive label spacing must stay strictly inside (low, high)."""
    for a, b in zip(omega.labels, omega.labels[1:]):
        if not low < abs(b - a) < high:
            raise ScheduleError(
                f"series label spacing {abs(b - a)} outside ({low}, {high})"
            )


def _spec_with_q(base_spec: AccelSpec, q: float, rho: float) -> AccelSpec:
    aux = base_spec.aux
    if aux is None:
        aux = AuxParams(offset=0.0, q=q)
    else:
        aux = replace(aux, q=q)
    return replace(base_spec, aux=aux, rho=rho)


def objective(
    q: float,
    omega1: OmegaSeries,
    reference: np.ndarray,
    rho: float,
    base_spec: AccelSpec,
) -> float:
    """Euclidean distance between the aux-coupled extrapolant of the series and
    the reference limit."""
    if not q > 0:
        raise ConfigError(f"q must be positive, got {q}")
    accelerated = vector_accelerate(_spec_with_q(base_spec, q, rho), omega1.terms)
    return float(np.linalg.norm(accelerated - np.asarray(reference, dtype=float)))


def anneal_q(
    omega1: OmegaSeries,
    reference: np.ndarray,
    rho: float,
    acfg: AnnealConfig,
    base_spec: AccelSpec,
) -> CalibrationResult:
    """Simulated annealing in log10(q): Gaussian proposals, Metropolis
    acceptance with temperature initial_temp * cooling^i, best-so-far tracking.
    Deterministic for a fixed seed.
    """
    if base_spec.delta_bounds is not None:
        check_label_spacing(omega1, *base_spec.delta_bounds)
    lo, hi = math.log10(acfg.q_min), math.log10(acfg.q_max)
    x = 0.5 * (lo + hi)  # geometric midpoint of the admissible range
    fx = objective(10.0 ** x, omega1, reference, rho, base_spec)
    evals = 1
    best_x, best_f = x, fx
    temp = acfg.initial_temp if acfg.initial_temp is not None else max(fx, 1e-300)
    rng = np.random.default_rng(acfg.seed)
    for _ in range(acfg.steps):
        xp = float(np.clip(x + acfg.proposal_scale * rng.standard_normal(), lo, hi))
        fp = objective(10.0 ** xp, omega1, reference, rho, base_spec)
        evals += 1
        if fp < fx or rng.random() < math.exp(-(fp - fx) / max(temp, 1e-300)):
            x, fx = xp, fp
            if fx < best_f:
                best_x, best_f = x, fx
        temp *= acfg.cooling
    return CalibrationResult(
        q_opt=10.0 ** best_x,
        objective_at_opt=best_f,
        reference_limit=np.asarray(reference, dtype=float),
        evaluations=evals,
    )


def propagate_calibration(result: CalibrationResult, spec: AccelSpec) -> AccelSpec:
    """Freeze the calibrated q into the spec used for all remaining series."""
    aux = spec.aux
    if aux is None:
        aux = AuxParams(offset=0.0, q=result.q_opt)
    else:
        aux = replace(aux, q=result.q_opt)
    return replace(spec, aux=aux)


def periodic_refresh(interval: int, n_slices: int) -> list:
    """1-based slice indices at which calibration is re-run; q is held between."""
    if interval < 1:
        raise ConfigError(f"refresh interval must be >= 1, got {interval}")
    return list(range(1, n_slices + 1, interval))
