"""Step-refinement study for a single sequential solver.

One trajectory is computed per subdivision factor delta (step h0/delta) and
sampled back onto the coarse instants k0*h0. Collecting, at a fixed instant,
the values from every trajectory gives a series whose limit in delta estimates
the true solution there.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _parallel
from .errors import AlignmentError, ConfigError
from .model import LTISystem, OmegaSeries, Trajectory
from .propagators import explicit_euler_propagate, step_count


@dataclass(frozen=True)
class SubdivisionSet:
    """Reference step h0 and the integer subdivision factors to study."""

    h0: float
    deltas: tuple

    def __post_init__(self):
        if not self.h0 > 0:
            raise ConfigError(f"h0 must be positive, got {self.h0}")
        deltas = tuple(self.deltas)
        if any(int(d) != d or d < 1 for d in deltas):
            raise ConfigError("subdivision factors must be positive integers")
        deltas = tuple(int(d) for d in deltas)
        if deltas[0] != 1:
            raise ConfigError("the first subdivision factor must be 1 (the reference step)")
        if any(b <= a for a, b in zip(deltas, deltas[1:])):
            raise ConfigError("subdivision factors must be strictly increasing")
        object.__setattr__(self, "deltas", deltas)


def build_psi(sys: LTISystem, h0: float, delta: int, tf: float) -> Trajectory:
    """Explicit Euler with step h0/delta over [0, tf], downsampled to the coarse instants.

    Full fine trajectories are never stored: each coarse sub-interval is
    propagated and only its endpoint retained.
    """
    if int(delta) != delta or delta < 1:
        raise ConfigError(f"subdivision factor must be a positive integer, got {delta}")
    n_coarse = step_count(tf, h0)
    h = h0 / int(delta)
    y = sys.y0
    states = np.empty((n_coarse + 1, sys.dim))
    states[0] = y
    for k0 in range(n_coarse):
        y = explicit_euler_propagate(sys, y, k0 * h0, (k0 + 1) * h0, h).endpoint
        states[k0 + 1] = y
    times = h0 * np.arange(n_coarse + 1)
    times[-1] = tf
    return Trajectory(times, states)


def build_omega_series(
    sys: LTISystem, sub: SubdivisionSet, k0: int, tf: float, workers: int = 1
) -> OmegaSeries:
    """Series of the values at instant k0*h0, one term per subdivision factor."""
    n_coarse = step_count(tf, sub.h0)
    if not 1 <= k0 <= n_coarse:
        raise AlignmentError(f"instant index k0={k0} outside 1..{n_coarse}")
    psis = _parallel.keyed_map(
        lambda d: build_psi(sys, sub.h0, d, tf), sub.deltas, workers
    )
    return OmegaSeries(
        anchor_time=k0 * sub.h0,
        terms=tuple(psis[d].states[k0] for d in sub.deltas),
        labels=sub.deltas,
    )


def build_all_omega_series(
    sys: LTISystem, sub: SubdivisionSet, tf: float, workers: int = 1
) -> list:
    """All instants' series from a single pass over the trajectories."""
    n_coarse = step_count(tf, sub.h0)
    psis = _parallel.keyed_map(
        lambda d: build_psi(sys, sub.h0, d, tf), sub.deltas, workers
    )
    return [
        OmegaSeries(
            anchor_time=k0 * sub.h0,
            terms=tuple(psis[d].states[k0] for d in sub.deltas),
            labels=sub.deltas,
        )
        for k0 in range(1, n_coarse + 1)
    ]


def omega_error_curve(series: OmegaSeries, exact: np.ndarray) -> np.ndarray:
    """Euclidean error of each term against the exact value at the anchor."""
    exact = np.asarray(exact, dtype=float)
    if exact.shape != series.terms[0].shape:
        raise ConfigError("exact value dimension does not match the series")
    return np.array([float(np.linalg.norm(t - exact)) for t in series.terms])
