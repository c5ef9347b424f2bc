import numpy as np
import pytest

from pita import ConfigError, DimensionError, LTISystem, OmegaSeries, TimeGrid
from pita.model import slice_boundaries


def test_system_coerces_and_exposes_dim(sys2x2):
    assert sys2x2.dim == 2
    assert sys2x2.A.dtype == float
    assert np.allclose(sys2x2.drift, [0.0, 10.0])


def test_system_rejects_mismatched_shapes():
    with pytest.raises(DimensionError):
        LTISystem(A=[[1.0, 0.0]], B=[[1.0]], u=[1.0], y0=[1.0])
    with pytest.raises(DimensionError):
        LTISystem(A=[[1.0]], B=[[1.0, 0.0]], u=[1.0], y0=[1.0])
    with pytest.raises(DimensionError):
        LTISystem(A=[[1.0]], B=[[1.0]], u=[1.0], y0=[1.0, 2.0])


def test_system_rejects_non_finite():
    with pytest.raises(ConfigError):
        LTISystem(A=[[np.nan]], B=[[1.0]], u=[1.0], y0=[1.0])


def test_grid_validation():
    with pytest.raises(ConfigError):
        TimeGrid(t0=1.0, tf=1.0, n_slices=4)
    with pytest.raises(ConfigError):
        TimeGrid(t0=0.0, tf=1.0, n_slices=0)


def test_slice_boundaries_hit_endpoints_exactly():
    grid = TimeGrid(t0=0.0, tf=0.9, n_slices=9)
    b = slice_boundaries(grid)
    assert len(b) == 10
    assert b[0] == 0.0
    assert b[-1] == 0.9  # exact, not 9 * 0.1 accumulated
    assert np.allclose(np.diff(b), 0.1)


def test_omega_series_invariants():
    terms = tuple(np.array([float(k)]) for k in range(4))
    om = OmegaSeries(anchor_time=0.1, terms=terms,
                     labels=(100.0, 101.0, 102.0, 103.0))
    assert len(om) == 4

    with pytest.raises(DimensionError):
        OmegaSeries(anchor_time=0.1, terms=terms, labels=(1.0, 2.0, 3.0))
    with pytest.raises(ConfigError):
        OmegaSeries(anchor_time=0.1, terms=terms,
                    labels=(100.0, 99.0, 102.0, 103.0))
    with pytest.raises(ConfigError):
        OmegaSeries(anchor_time=0.1, terms=(), labels=())
