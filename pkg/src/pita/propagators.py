"""Euler propagators, an exact matrix-exponential reference, and a stability probe.

All propagation here is fixed-step: a time span must hold an integral number of
steps, because downstream series constructions compare values at identical time
instants and no interpolation is performed anywhere.
"""
from __future__ import annotations

import warnings

import numpy as np
import scipy.linalg

from .errors import AlignmentError, NonFiniteError, SingularMatrixError
from .model import LTISystem, Trajectory

EXPLICIT = "explicit"
IMPLICIT = "implicit"


def step_count(span: float, h: float) -> int:
    """Number of steps of size h in span; raises unless span/h is integral (1e-9 relative)."""
    if h <= 0:
        raise AlignmentError(f"step must be positive, got {h}")
    ratio = span / h
    n = int(round(ratio))
    if n < 1 or abs(ratio - n) > 1e-9 * max(1.0, abs(ratio)):
        raise AlignmentError(f"span {span} is not an integral number of steps of {h}")
    return n


def explicit_euler_step(sys: LTISystem, y: np.ndarray, h: float) -> np.ndarray:
    """One forward Euler step: (I + hA) y + h B u."""
    out = y + h * (sys.A @ y + sys.drift)
    if not np.isfinite(out).all():
        raise NonFiniteError(f"explicit Euler step of size {h} produced a non-finite value")
    return out


def implicit_euler_step(sys: LTISystem, y: np.ndarray, h: float) -> np.ndarray:
    """One backward Euler step: solve (I - hA) z = y + h B u."""
    lu = _implicit_factor(sys, h)
    return scipy.linalg.lu_solve(lu, y + h * sys.drift)


def _implicit_factor(sys: LTISystem, h: float):
    d = sys.dim
    m = np.eye(d) - h * sys.A
    with warnings.catch_warnings():
        # singularity is detected below and raised as an error
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu = scipy.linalg.lu_factor(m, check_finite=False)
    det = abs(float(np.prod(np.diag(lu[0]))))
    scale = max(1.0, float(np.linalg.norm(m, np.inf)) ** d)
    if det <= 1e-12 * scale:
        raise SingularMatrixError(f"I - hA is singular at h={h}")
    return lu


def explicit_euler_propagate(
    sys: LTISystem, y_start: np.ndarray, t_start: float, t_end: float, h: float
) -> Trajectory:
    n = step_count(t_end - t_start, h)
    states = np.empty((n + 1, sys.dim))
    states[0] = y_start
    y = np.asarray(y_start, dtype=float)
    a, c = sys.A, sys.drift
    # overflow is detected after the loop; keep numpy quiet in the meantime
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n):
            y = y + h * (a @ y + c)
            states[i + 1] = y
    _check_finite(states, t_start, h, "explicit")
    times = t_start + h * np.arange(n + 1)
    times[-1] = t_end
    return Trajectory(times, states)


def implicit_euler_propagate(
    sys: LTISystem, y_start: np.ndarray, t_start: float, t_end: float, h: float
) -> Trajectory:
    n = step_count(t_end - t_start, h)
    lu = _implicit_factor(sys, h)  # A is constant: factor once, reuse every step
    states = np.empty((n + 1, sys.dim))
    states[0] = y_start
    y = np.asarray(y_start, dtype=float)
    load = h * sys.drift
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n):
            y = scipy.linalg.lu_solve(lu, y + load)
            states[i + 1] = y
    _check_finite(states, t_start, h, "implicit")
    times = t_start + h * np.arange(n + 1)
    times[-1] = t_end
    return Trajectory(times, states)


def _check_finite(states: np.ndarray, t_start: float, h: float, kind: str):
    if np.isfinite(states).all():
        return
    bad = int(np.argmin(np.isfinite(states).all(axis=1)))
    raise NonFiniteError(
        f"{kind} Euler propagation diverged at step {bad} (t = {t_start + bad * h:g})"
    )


def closed_form_explicit(sys: LTISystem, y_start: np.ndarray, k0: int, h: float) -> np.ndarray:
    """Endpoint after k0 explicit steps, by the closed form

        (I + hA)^k0 y + sum_{j=0}^{k0-1} (I + hA)^j h B u,

    accumulated with a running matrix power. Deliberately a different code path
    from the step loop so the two can cross-check each other.
    """
    if k0 < 0:
        raise AlignmentError(f"step count must be non-negative, got {k0}")
    d = sys.dim
    m = np.eye(d) + h * sys.A
    load = h * sys.drift
    acc = np.zeros(d)
    power = np.eye(d)
    for _ in range(k0):
        acc = acc + power @ load
        power = power @ m
    out = power @ np.asarray(y_start, dtype=float) + acc
    if not np.isfinite(out).all():
        raise NonFiniteError(f"closed-form explicit Euler overflowed at k0={k0}, h={h}")
    return out


def exact_solution(sys: LTISystem, t: float) -> np.ndarray:
    """Reference solution e^{At} y0 + int_0^t e^{A(t-s)} B u ds.

    Computed with one matrix exponential of the augmented block matrix
    [[A, Bu], [0, 0]], so A need not be invertible.
    """
    d = sys.dim
    aug = np.zeros((d + 1, d + 1))
    aug[:d, :d] = sys.A
    aug[:d, d] = sys.drift
    z0 = np.append(sys.y0, 1.0)
    return (scipy.linalg.expm(aug * t) @ z0)[:d]


def propagate(
    kind: str, sys: LTISystem, y_start: np.ndarray, t_start: float, t_end: float, h: float
) -> Trajectory:
    if kind == EXPLICIT:
        return explicit_euler_propagate(sys, y_start, t_start, t_end, h)
    if kind == IMPLICIT:
        return implicit_euler_propagate(sys, y_start, t_start, t_end, h)
    raise ValueError(f"unknown propagator kind {kind!r}")


def stability_radius(sys: LTISystem, h: float) -> float:
    """Spectral radius of the forward Euler amplification matrix I + hA."""
    return float(np.abs(np.linalg.eigvals(np.eye(sys.dim) + h * sys.A)).max())
