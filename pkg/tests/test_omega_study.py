import numpy as np
import pytest

from pita import (
    ConfigError,
    SubdivisionSet,
    build_all_omega_series,
    build_omega_series,
    build_psi,
    exact_solution,
    explicit_euler_propagate,
)


def test_subdivision_set_validation():
    SubdivisionSet(h0=0.1, deltas=(1, 2, 4))
    with pytest.raises(ConfigError):
        SubdivisionSet(h0=0.1, deltas=(2, 4))     # must start at 1
    with pytest.raises(ConfigError):
        SubdivisionSet(h0=0.1, deltas=(1, 4, 2))  # must increase
    with pytest.raises(ConfigError):
        SubdivisionSet(h0=0.0, deltas=(1, 2))


def test_psi_samples_match_direct_fine_run(sys2x2):
    """A psi trajectory is the fine solution downsampled to coarse instants."""
    h0, delta, tf = 0.1, 8, 0.5
    psi = build_psi(sys2x2, h0, delta, tf)
    fine = explicit_euler_propagate(sys2x2, sys2x2.y0, 0.0, tf, h0 / delta)
    assert len(psi.times) == 6
    for k0 in range(6):
        assert np.allclose(psi.states[k0], fine.states[k0 * delta], atol=1e-13)


def test_omega_series_error_decreases_with_delta(sys2x2):
    sub = SubdivisionSet(h0=0.1, deltas=(1, 2, 4, 8, 16, 32))
    series = build_omega_series(sys2x2, sub, k0=5, tf=0.5)
    exact = exact_solution(sys2x2, 0.5)
    errs = [np.linalg.norm(term - exact) for term in series.terms]
    assert all(a > b for a, b in zip(errs, errs[1:]))
    # refinement is first order: doubling delta roughly halves the error
    tail_ratios = [a / b for a, b in zip(errs[2:], errs[3:])]
    assert all(1.6 <= r <= 2.4 for r in tail_ratios)


def test_omega_series_labels_are_the_deltas(sys2x2):
    sub = SubdivisionSet(h0=0.1, deltas=(1, 2, 4))
    series = build_omega_series(sys2x2, sub, k0=2, tf=0.3)
    assert series.labels == (1.0, 2.0, 4.0)
    assert series.anchor_time == pytest.approx(0.2)


def test_build_all_is_thread_invariant(sys2x2):
    sub = SubdivisionSet(h0=0.1, deltas=(1, 2, 4, 8))
    seq = build_all_omega_series(sys2x2, sub, tf=0.4, workers=1)
    par = build_all_omega_series(sys2x2, sub, tf=0.4, workers=4)
    assert len(seq) == len(par) == 4
    for a, b in zip(seq, par):
        assert a.anchor_time == b.anchor_time
        for ta, tb in zip(a.terms, b.terms):
            assert np.array_equal(ta, tb)
