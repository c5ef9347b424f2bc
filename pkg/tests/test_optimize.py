"""Calibration of the auxiliary damping exponent.

The planted-optimum fixture builds a series whose alternating transient
mirrors the auxiliary form, so the coupled objective has one deep minimum
at a known exponent; annealing has to find it.
"""
from dataclasses import replace

import numpy as np
import pytest

from pita import (
    AccelSpec,
    AnnealConfig,
    AuxParams,
    ConfigError,
    OmegaSeries,
    ScheduleError,
    StabilityError,
    anneal_q,
    bootstrap_reference,
    check_label_spacing,
    exact_solution,
    objective,
    periodic_refresh,
    propagate_calibration,
    vector_accelerate,
)

Q_STAR = 2.0


@pytest.fixture
def planted():
    terms = tuple(
        np.array([2.0 + (-1.0) ** n * n / (n + 1.0)]) for n in range(7)
    )
    om = OmegaSeries(anchor_time=0.0, terms=terms,
                     labels=tuple(100.0 + i for i in range(7)))
    spec = AccelSpec(k=4, n=2, rho=1.0, aux=AuxParams(offset=0.0, q=1.0))
    ref = vector_accelerate(replace(spec, aux=AuxParams(offset=0.0, q=Q_STAR)),
                            om.terms)
    return om, ref, spec


def test_anneal_config_validation():
    with pytest.raises(ConfigError):
        AnnealConfig(q_min=1.0, q_max=0.5)
    with pytest.raises(ConfigError):
        AnnealConfig(cooling=1.5)
    with pytest.raises(ConfigError):
        AnnealConfig(steps=0)
    with pytest.raises(ConfigError):
        AnnealConfig(proposal_scale=0.0)


def test_objective_is_zero_at_the_planted_exponent(planted):
    om, ref, spec = planted
    assert objective(Q_STAR, om, ref, 1.0, spec) == pytest.approx(0.0, abs=1e-15)
    assert objective(1.0, om, ref, 1.0, spec) > 1e-5
    with pytest.raises(ConfigError):
        objective(-1.0, om, ref, 1.0, spec)


def test_planted_exponent_is_the_grid_minimum(planted):
    om, ref, spec = planted
    qs = np.logspace(-10, 2, 121)
    vals = [objective(float(q), om, ref, 1.0, spec) for q in qs]
    off_funnel = min(v for q, v in zip(qs, vals) if abs(q - Q_STAR) > 0.2)
    assert off_funnel > 1e-5  # nothing off the funnel competes with the root


def test_anneal_recovers_planted_exponent(planted):
    om, ref, spec = planted
    cal = anneal_q(om, ref, 1.0, AnnealConfig(seed=0), spec)
    assert abs(cal.q_opt - Q_STAR) / Q_STAR <= 0.1
    assert cal.objective_at_opt < 1e-5
    assert cal.evaluations == 2001


def test_anneal_is_deterministic(planted):
    om, ref, spec = planted
    a = anneal_q(om, ref, 1.0, AnnealConfig(seed=5), spec)
    b = anneal_q(om, ref, 1.0, AnnealConfig(seed=5), spec)
    assert a.q_opt == b.q_opt
    assert a.objective_at_opt == b.objective_at_opt


def test_anneal_never_worse_than_start(planted):
    om, ref, spec = planted
    lo, hi = 1e-10, 1e2
    q0 = 10.0 ** (0.5 * (np.log10(lo) + np.log10(hi)))
    f0 = objective(q0, om, ref, 1.0, spec)
    for seed in range(20):
        cal = anneal_q(om, ref, 1.0, AnnealConfig(seed=seed, steps=200), spec)
        assert cal.objective_at_opt <= f0


def test_anneal_checks_label_spacing(planted):
    om, ref, spec = planted
    wide = OmegaSeries(anchor_time=0.0, terms=om.terms,
                       labels=tuple(100.0 + 2.0 * i for i in range(7)))
    bounded = replace(spec, delta_bounds=(0.5, 1.5))
    with pytest.raises(ScheduleError):
        anneal_q(wide, ref, 1.0, AnnealConfig(seed=0, steps=5), bounded)


def test_check_label_spacing():
    terms = tuple(np.zeros(1) for _ in range(3))
    om = OmegaSeries(anchor_time=0.0, terms=terms, labels=(1.0, 2.0, 3.0))
    check_label_spacing(om, 0.5, 1.5)
    with pytest.raises(ScheduleError):
        check_label_spacing(om, 1.5, 2.5)


def test_bootstrap_reference_accuracy(sys2x2):
    ref = bootstrap_reference(sys2x2, 0.1, 1e-5)
    assert np.linalg.norm(ref - exact_solution(sys2x2, 0.1)) < 1e-4


def test_bootstrap_reference_rejects_unstable_step(sys2x2):
    with pytest.raises(StabilityError):
        bootstrap_reference(sys2x2, 1.0, 1.0)


def test_propagate_calibration_carries_q(planted):
    om, ref, spec = planted
    cal = anneal_q(om, ref, 1.0, AnnealConfig(seed=0), spec)
    spec_out = propagate_calibration(cal, spec)
    assert spec_out.aux.q == cal.q_opt
    assert spec_out.k == spec.k and spec_out.rho == spec.rho

    bare = AccelSpec(k=4, n=2, rho=1.0, aux=None)
    spec_from_none = propagate_calibration(cal, bare)
    assert spec_from_none.aux is not None
    assert spec_from_none.aux.q == cal.q_opt


def test_periodic_refresh_schedules():
    assert periodic_refresh(9, 9) == [1]
    assert periodic_refresh(1, 4) == [1, 2, 3, 4]
    assert periodic_refresh(3, 9) == [1, 4, 7]
    with pytest.raises(ConfigError):
        periodic_refresh(0, 9)
