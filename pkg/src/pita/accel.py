"""Sequence acceleration: Shanks transform, Wynn's epsilon algorithm, and the
auxiliary-series coupling used to condition the extrapolation.

The epsilon recursion is applied to scalars; vector sequences are accelerated
componentwise.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateDenominatorError, DimensionError, InsufficientTermsError

DEFAULT_GUARD = 1e-12


@dataclass(frozen=True)
class AuxParams:
    """Alternating auxiliary series added termwise before extrapolation.

    Term n is ``offset + (-1)^n * n / (n+1)^q`` by default. With ``summed=True``
    the damped terms are accumulated instead:
    ``offset + sum_{j=0}^{n-1} (-1)^(j+1) / (j+2)^q``, which converges for q > 0.
    """

    offset: float = 0.0
    q: float = 1.0
    summed: bool = False

    def __post_init__(self):
        if not self.q > 0:
            raise ValueError(f"q must be positive, got {self.q}")
        if not np.isfinite(self.offset):
            raise ValueError("offset must be finite")


@dataclass(frozen=True)
class AccelSpec:
    """One extrapolation: order k (even), start index n, coupling scale rho,
    optional auxiliary series, and the small-denominator guard threshold.

    ``delta_bounds``, when set, gives the (low, high) admissible spacing between
    consecutive labels of the series being accelerated; it is validated once by
    the calibration step, not here.
    """

    k: int = 4
    n: int = 2
    rho: float = 1.0
    aux: Optional[AuxParams] = None
    guard: float = DEFAULT_GUARD
    delta_bounds: Optional[tuple] = None

    def __post_init__(self):
        terms_needed(self.k, self.n)  # validates k even, n >= 0
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")


def terms_needed(k: int, n: int) -> int:
    """Sequence length consumed by the order-k extrapolant starting at index n."""
    if k < 0 or k % 2 != 0:
        raise ValueError(f"the extrapolation order k must be even and non-negative, got {k}")
    if n < 0:
        raise ValueError(f"the start index n must be non-negative, got {n}")
    return n + k + 1


def shanks(s0: float, s1: float, s2: float, guard: float = DEFAULT_GUARD) -> float:
    """(s0*s2 - s1^2) / (s0 + s2 - 2*s1); exact on S_n = L + a r^n."""
    denom = s0 + s2 - 2.0 * s1
    if abs(denom) <= guard * max(1.0, abs(s0), abs(s1), abs(s2)):
        raise DegenerateDenominatorError(
            "Shanks denominator vanishes (sequence locally arithmetic)"
        )
    return (s0 * s2 - s1 * s1) / denom


@dataclass(frozen=True)
class EpsilonTable:
    """Triangular table of the epsilon recursion.

    ``columns[c]`` holds eps_c^(0) ... eps_c^(len-1-c); even columns are the
    extrapolants, odd columns are auxiliary. ``guarded[c]`` flags entries that
    were produced by the small-denominator guard.
    """

    columns: tuple
    guarded: tuple

    def entry(self, k: int, n: int) -> float:
        return self.columns[k][n]


def epsilon_table(seq: Sequence[float], guard: float = DEFAULT_GUARD) -> EpsilonTable:
    """Build the table with eps_{-1} = 0, eps_0 = S, and

        eps_{k+1}^(n) = eps_{k-1}^(n+1) + 1 / (eps_k^(n+1) - eps_k^(n)).

    When the difference falls below guard*(1+|eps_k^(n)|) the entry is copied
    from eps_{k-1}^(n+1) and flagged; a sequence that has already converged is
    a success, not an error.
    """
    first = [float(x) for x in seq]
    if len(first) < 1:
        raise InsufficientTermsError("epsilon table needs at least one term")
    columns = [first]
    flags = [[False] * len(first)]
    older = [0.0] * (len(first) + 1)  # the eps_{k-1} column, seeded with eps_{-1} = 0
    while len(columns[-1]) > 1:
        prev = columns[-1]
        new = []
        new_flags = []
        for i in range(len(prev) - 1):
            diff = prev[i + 1] - prev[i]
            if abs(diff) <= guard * (1.0 + abs(prev[i])):
                new.append(older[i + 1])
                new_flags.append(True)
            else:
                new.append(older[i + 1] + 1.0 / diff)
                new_flags.append(False)
        older = prev
        columns.append(new)
        flags.append(new_flags)
    return EpsilonTable(tuple(tuple(c) for c in columns), tuple(tuple(f) for f in flags))


def s_epsilon(spec: AccelSpec, seq: Sequence[float]) -> float:
    """The order-k extrapolant starting at index n: entry eps_k^(n) of the table."""
    need = terms_needed(spec.k, spec.n)
    if len(seq) < need:
        raise InsufficientTermsError(
            f"order k={spec.k} starting at n={spec.n} needs {need} terms, got {len(seq)}"
        )
    return epsilon_table(seq, spec.guard).entry(spec.k, spec.n)


def aux_series_term(p: AuxParams, n: int) -> float:
    if n < 0:
        raise ValueError(f"series index must be non-negative, got {n}")
    if not p.summed:
        return p.offset + (-1.0) ** n * n / (n + 1.0) ** p.q
    acc = p.offset
    for j in range(n):
        acc += (-1.0) ** (j + 1) / (j + 2.0) ** p.q
    return acc


def _aux_sequence(p: Optional[AuxParams], length: int) -> list:
    if p is None:
        return [0.0] * length
    return [aux_series_term(p, i) for i in range(length)]


def accelerate_with_aux(spec: AccelSpec, omega: Sequence[float]) -> float:
    """Extrapolate through the coupled sequence C_n = rho*omega_n + aux_n.

    Returns (eps-limit of C - eps-limit of aux) / rho. With no auxiliary series
    configured the coupling degenerates to plain s_epsilon.
    """
    m = len(omega)
    aux = _aux_sequence(spec.aux, m)
    coupled = [spec.rho * float(omega[i]) + aux[i] for i in range(m)]
    limit_coupled = s_epsilon(spec, coupled)
    limit_aux = s_epsilon(spec, aux)
    return (limit_coupled - limit_aux) / spec.rho


def vector_accelerate(spec: AccelSpec, seq_of_vectors: Sequence[np.ndarray]) -> np.ndarray:
    """Accelerate a vector-valued sequence independently per component."""
    vectors = [np.atleast_1d(np.asarray(v, dtype=float)) for v in seq_of_vectors]
    if any(v.shape != vectors[0].shape or v.ndim != 1 for v in vectors):
        raise DimensionError("expected a sequence of equally sized vectors")
    arr = np.asarray(vectors)
    need = terms_needed(spec.k, spec.n)
    if arr.shape[0] < need:
        raise InsufficientTermsError(
            f"order k={spec.k} starting at n={spec.n} needs {need} terms, got {arr.shape[0]}"
        )
    if spec.aux is not None:
        return np.array([accelerate_with_aux(spec, arr[:, c]) for c in range(arr.shape[1])])
    return np.array([s_epsilon(spec, arr[:, c]) for c in range(arr.shape[1])])
