"""Core domain types shared by every other module.

The library works on constant-coefficient linear systems

    y'(t) = A y(t) + B u,    y(0) = y0,

with A, B and the input u all time-invariant.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DimensionError


def _as_matrix(x) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(x, dtype=float))
    return arr


def _as_vector(x) -> np.ndarray:
    return np.atleast_1d(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class LTISystem:
    """Constant matrices A (d x d), B (d x m), constant input u (m,), initial state y0 (d,)."""

    A: np.ndarray
    B: np.ndarray
    u: np.ndarray
    y0: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "A", _as_matrix(self.A))
        object.__setattr__(self, "B", _as_matrix(self.B))
        object.__setattr__(self, "u", _as_vector(self.u))
        object.__setattr__(self, "y0", _as_vector(self.y0))
        validate_system(self)

    @property
    def dim(self) -> int:
        return self.A.shape[0]

    @property
    def drift(self) -> np.ndarray:
        """The constant forcing term B @ u."""
        return self.B @ self.u


def validate_system(sys: LTISystem) -> LTISystem:
    """Check shapes and finiteness; returns the system unchanged when valid."""
    d = sys.A.shape[0]
    if sys.A.shape != (d, d):
        raise DimensionError(f"A must be square, got {sys.A.shape}")
    if sys.B.shape[0] != d:
        raise DimensionError(f"B has {sys.B.shape[0]} rows, expected {d}")
    if sys.u.shape != (sys.B.shape[1],):
        raise DimensionError(
            f"u has length {sys.u.shape[0]}, expected {sys.B.shape[1]} (columns of B)"
        )
    if sys.y0.shape != (d,):
        raise DimensionError(f"y0 has length {sys.y0.shape[0]}, expected {d}")
    for name in ("A", "B", "u", "y0"):
        if not np.isfinite(getattr(sys, name)).all():
            raise ConfigError(f"non-finite entry in {name}")
    return sys


@dataclass(frozen=True)
class TimeGrid:
    """Uniform decomposition of [t0, tf] into n_slices slices."""

    t0: float
    tf: float
    n_slices: int

    def __post_init__(self):
        if not self.tf > self.t0:
            raise ConfigError(f"tf must exceed t0, got t0={self.t0}, tf={self.tf}")
        if self.n_slices < 1:
            raise ConfigError(f"n_slices must be >= 1, got {self.n_slices}")

    @property
    def slice_len(self) -> float:
        return (self.tf - self.t0) / self.n_slices


def slice_boundaries(grid: TimeGrid) -> np.ndarray:
    """The n_slices+1 boundaries; the last one is tf exactly, not an accumulated sum."""
    h = grid.slice_len
    b = grid.t0 + h * np.arange(grid.n_slices + 1)
    b[-1] = grid.tf
    return b


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # shape (len(times), d)

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "states", np.asarray(self.states, dtype=float))
        if len(self.times) != len(self.states):
            raise DimensionError("times and states lengths differ")
        if len(self.times) > 1 and not np.all(np.diff(self.times) > 0):
            raise ConfigError("trajectory times must be strictly increasing")

    @property
    def endpoint(self) -> np.ndarray:
        return self.states[-1]


@dataclass(frozen=True)
class OmegaSeries:
    """Successive approximations of the solution at a single time point.

    ``labels[i]`` records what produced ``terms[i]``: the subdivision factor in a
    step-refinement study, or the iteration index in an iterative solve.
    """

    anchor_time: float
    terms: tuple = field(default_factory=tuple)
    labels: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(np.asarray(t, dtype=float) for t in self.terms))
        object.__setattr__(self, "labels", tuple(float(x) for x in self.labels))
        if len(self.terms) != len(self.labels):
            raise DimensionError("terms and labels lengths differ")
        if len(self.terms) == 0:
            raise ConfigError("an omega series needs at least one term")
        d = self.terms[0].shape
        if any(t.shape != d for t in self.terms):
            raise DimensionError("omega series terms have mixed dimensions")
        if len(self.labels) > 1 and not all(
            b > a for a, b in zip(self.labels, self.labels[1:])
        ):
            raise ConfigError("omega series labels must be strictly increasing")

    def __len__(self) -> int:
        return len(self.terms)
