"""Parareal predictor-corrector solvers.

Classic mode alternates a cheap sequential coarse propagator with accurate fine
solves done independently per slice:

    U_{j+1}^{k} = G(U_j^{k}) + F(U_j^{k-1}) - G(U_j^{k-1}).

The semi-explicit variant seeds with a backward-Euler sweep, subtracts that
implicit prediction only on the first correction, then runs fully explicit
corrections while refining the fine step each iteration. The per-slice history
of corrected values forms a series whose limit is extrapolated by the
acceleration machinery.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _parallel
from .accel import AccelSpec, terms_needed, vector_accelerate
from .errors import ConfigError, InsufficientTermsError, ScheduleError
from .model import LTISystem, OmegaSeries, TimeGrid, slice_boundaries
from .propagators import EXPLICIT, IMPLICIT, propagate, step_count

CLASSIC = "classic"
SEMI_EXPLICIT = "semi-explicit"


@dataclass(frozen=True)
class DeltaSchedule:
    """Per-iteration subdivision factors delta_k = base + (k-1)*step.

    The spacing of consecutive factors must stay strictly inside (low, high);
    with a constant increment that reduces to low < step < high, checked here.
    The factors label the series terms and the calibration step validates the
    same bounds on whatever series it is given.
    """

    base: float = 100.0
    step: float = 1.0
    low: float = 0.5
    high: float = 1.5

    def __post_init__(self):
        if not 0 < self.low < self.high:
            raise ScheduleError(f"need 0 < low < high, got ({self.low}, {self.high})")
        if not self.low < abs(self.step) < self.high:
            raise ScheduleError(
                f"schedule increment {self.step} outside the admissible range "
                f"({self.low}, {self.high})"
            )
        if self.base < 1:
            raise ScheduleError(f"base subdivision must be >= 1, got {self.base}")

    def value(self, k: int) -> float:
        return self.base + (k - 1) * self.step


@dataclass(frozen=True)
class PararealConfig:
    grid: TimeGrid
    iterations: int = 8
    mode: str = SEMI_EXPLICIT
    schedule: DeltaSchedule = field(default_factory=DeltaSchedule)
    coarse_substeps: int = 1
    fine_step: Optional[float] = None  # classic mode only
    classic_coarse_kind: str = IMPLICIT
    workers: int = 1

    def __post_init__(self):
        if self.iterations < 2:
            raise ConfigError(f"need at least 2 iterations, got {self.iterations}")
        if self.mode not in (CLASSIC, SEMI_EXPLICIT):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.coarse_substeps < 1:
            raise ConfigError(f"coarse_substeps must be >= 1, got {self.coarse_substeps}")
        if self.mode == CLASSIC:
            if self.fine_step is None:
                raise ConfigError("classic mode needs fine_step")
            if not self.fine_step < self.coarse_step:
                raise ConfigError(
                    f"classic mode needs fine_step < coarse step "
                    f"({self.fine_step} >= {self.coarse_step})"
                )
            if self.classic_coarse_kind not in (EXPLICIT, IMPLICIT):
                raise ConfigError(f"unknown propagator kind {self.classic_coarse_kind!r}")

    @property
    def coarse_step(self) -> float:
        return self.grid.slice_len / self.coarse_substeps


@dataclass
class PararealResult:
    """Iterates are indexed [k][j]: value at boundary j after iteration k
    (k = 0 is the seed sweep). omega_per_slice[j-1] collects the corrected
    values of boundary j from iteration 2 onward."""

    boundaries: np.ndarray
    iterates: list
    omega_per_slice: list
    final_solution: Optional[list] = None


def coarse_g(kind: str, sys: LTISystem, t0: float, t1: float, u: np.ndarray, h: float):
    """Coarse endpoint over one slice; h may subdivide the slice."""
    return propagate(kind, sys, u, t0, t1, h).endpoint


def fine_f(sys: LTISystem, t0: float, t1: float, u: np.ndarray, h_fine: float):
    """Accurate explicit endpoint over one slice."""
    step_count(t1 - t0, h_fine)
    return propagate(EXPLICIT, sys, u, t0, t1, h_fine).endpoint


def _seed_sweep(sys: LTISystem, bounds: np.ndarray, h: float) -> list:
    u = [np.asarray(sys.y0, dtype=float)]
    for j in range(len(bounds) - 1):
        u.append(coarse_g(IMPLICIT, sys, bounds[j], bounds[j + 1], u[j], h))
    return u


def classic_parareal(sys: LTISystem, cfg: PararealConfig) -> PararealResult:
    if cfg.mode != CLASSIC:
        raise ConfigError(f"classic_parareal called with mode {cfg.mode!r}")
    bounds = slice_boundaries(cfg.grid)
    n = cfg.grid.n_slices
    hg = cfg.coarse_step
    kind = cfg.classic_coarse_kind
    iterates = [_seed_sweep(sys, bounds, hg)]
    for k in range(1, cfg.iterations + 1):
        prev = iterates[-1]
        fine = _parallel.keyed_map(
            lambda j: fine_f(sys, bounds[j], bounds[j + 1], prev[j], cfg.fine_step),
            range(n),
            cfg.workers,
        )
        cur = [prev[0]]
        for j in range(n):
            g_new = coarse_g(kind, sys, bounds[j], bounds[j + 1], cur[j], hg)
            g_old = coarse_g(kind, sys, bounds[j], bounds[j + 1], prev[j], hg)
            cur.append(g_new + fine[j] - g_old)
        iterates.append(cur)
    omegas = _collect_omegas(bounds, iterates, labels=list(range(2, cfg.iterations + 1)))
    return PararealResult(bounds, iterates, omegas)


def semi_explicit_parareal(sys: LTISystem, cfg: PararealConfig) -> PararealResult:
    if cfg.mode != SEMI_EXPLICIT:
        raise ConfigError(f"semi_explicit_parareal called with mode {cfg.mode!r}")
    bounds = slice_boundaries(cfg.grid)
    n = cfg.grid.n_slices
    hg = cfg.coarse_step
    iterates = [_seed_sweep(sys, bounds, hg)]
    labels = []
    for k in range(1, cfg.iterations + 1):
        delta_k = cfg.schedule.value(k)
        substeps = delta_k * cfg.coarse_substeps  # fine steps per slice
        if abs(substeps - round(substeps)) > 1e-9:
            raise ScheduleError(
                f"delta={delta_k} at iteration {k} does not subdivide a slice "
                f"into whole fine steps"
            )
        h_fine = cfg.grid.slice_len / round(substeps)
        realized = hg / h_fine
        if k >= 2:
            labels.append(realized)
        prev = iterates[-1]
        # the subtracted prediction switches from implicit to explicit after
        # the first correction
        old_kind = IMPLICIT if k == 1 else EXPLICIT
        fine = _parallel.keyed_map(
            lambda j: fine_f(sys, bounds[j], bounds[j + 1], prev[j], h_fine),
            range(n),
            cfg.workers,
        )
        cur = [prev[0]]
        for j in range(n):
            g_new = coarse_g(EXPLICIT, sys, bounds[j], bounds[j + 1], cur[j], hg)
            g_old = coarse_g(old_kind, sys, bounds[j], bounds[j + 1], prev[j], hg)
            cur.append(g_new + fine[j] - g_old)
        iterates.append(cur)
    for a, b in zip(labels, labels[1:]):
        if not cfg.schedule.low < abs(b - a) < cfg.schedule.high:
            raise ScheduleError(
                f"realized subdivision spacing {abs(b - a)} outside "
                f"({cfg.schedule.low}, {cfg.schedule.high})"
            )
    omegas = _collect_omegas(bounds, iterates, labels)
    return PararealResult(bounds, iterates, omegas)


def _collect_omegas(bounds: np.ndarray, iterates: list, labels: list) -> list:
    out = []
    for j in range(1, len(bounds)):
        out.append(
            OmegaSeries(
                anchor_time=float(bounds[j]),
                terms=tuple(iterates[k][j] for k in range(2, len(iterates))),
                labels=tuple(labels),
            )
        )
    return out


def extrapolated_solution(result: PararealResult, spec: AccelSpec) -> list:
    """Accelerate every per-slice series; fills result.final_solution."""
    need = terms_needed(spec.k, spec.n)
    for idx, om in enumerate(result.omega_per_slice):
        if len(om) < need:
            raise InsufficientTermsError(
                f"slice {idx + 1} holds {len(om)} terms, order k={spec.k} with "
                f"n={spec.n} needs {need}; run more iterations"
            )
    solution = [vector_accelerate(spec, om.terms) for om in result.omega_per_slice]
    result.final_solution = solution
    return solution
