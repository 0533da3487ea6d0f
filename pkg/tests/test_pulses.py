"""Tests for detuning profiles, switch functions and the parameter bundle."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bicavity.pulses import (
    DEFAULT_DELTA,
    DEFAULT_OMEGA,
    TWO_PI,
    DetuningProfile,
    ExperimentParams,
    InvalidParamsError,
    SwitchFunctions,
    detuning_at,
    normalize_lambda,
    switch_at,
)


def test_default_constants():
    p = ExperimentParams()
    assert p.omega == pytest.approx(TWO_PI * 0.047)
    assert p.delta == pytest.approx(TWO_PI * 0.1283)
    assert p.model == "stepwise"


@pytest.mark.parametrize("bad", [dict(omega=0.0), dict(delta=-1.0), dict(t_switch=-0.1), dict(ode_step=0.0)])
def test_invalid_scalars_rejected(bad):
    with pytest.raises(InvalidParamsError):
        ExperimentParams(**bad)


def test_switch_window_must_fit_inside_the_resonant_segment():
    limit = math.pi / DEFAULT_OMEGA
    with pytest.raises(InvalidParamsError):
        ExperimentParams(t_switch=limit)
    ExperimentParams(t_switch=0.99 * limit)   # just inside: fine


@pytest.mark.parametrize("bad", [dict(model="x"), dict(profile_shape="x"), dict(switch_shape="x")])
def test_unknown_selectors_rejected(bad):
    with pytest.raises(InvalidParamsError):
        ExperimentParams(**bad)


@pytest.mark.parametrize("shape", ["linear", "raised_cosine"])
def test_detuning_boundary_values(shape):
    prof = DetuningProfile(shape, 0.0, 2.0, DEFAULT_DELTA)
    assert detuning_at(prof, -0.5) == 0.0
    assert detuning_at(prof, 0.0) == 0.0
    assert detuning_at(prof, 1.0) == pytest.approx(-0.5 * DEFAULT_DELTA)
    assert detuning_at(prof, 2.0) == pytest.approx(-DEFAULT_DELTA)
    assert detuning_at(prof, 5.0) == pytest.approx(-TWO_PI * 0.1283)


@pytest.mark.parametrize("shape", ["linear", "raised_cosine"])
def test_detuning_monotone_and_continuous(shape):
    prof = DetuningProfile(shape, 0.0, 1.0, DEFAULT_DELTA)
    grid = np.linspace(-0.2, 1.2, 400)
    vals = np.array([detuning_at(prof, t) for t in grid])
    assert np.all(np.diff(vals) <= 1e-12)
    assert np.max(np.abs(np.diff(vals))) < 0.02 * DEFAULT_DELTA


def test_raised_cosine_edges_have_zero_slope():
    prof = DetuningProfile("raised_cosine", 0.0, 1.0, DEFAULT_DELTA)
    h = 1e-6
    assert abs(detuning_at(prof, h) - detuning_at(prof, 0.0)) / h < 1e-4
    assert abs(detuning_at(prof, 1.0) - detuning_at(prof, 1.0 - h)) / h < 1e-4


def test_zero_width_profile_is_an_instantaneous_jump():
    prof = DetuningProfile("raised_cosine", 1.0, 0.0, DEFAULT_DELTA)
    assert detuning_at(prof, 0.999) == 0.0
    assert detuning_at(prof, 1.001) == pytest.approx(-DEFAULT_DELTA)


@given(st.floats(min_value=-1.0, max_value=3.0))
@settings(max_examples=200, deadline=None)
def test_shrinking_window_approaches_the_step_profile(t):
    step = DetuningProfile("raised_cosine", 1.0, 0.0, DEFAULT_DELTA)
    narrow = DetuningProfile("raised_cosine", 1.0, 1e-7, DEFAULT_DELTA)
    if abs(t - 1.0) > 1e-6:   # away from the jump instant
        assert detuning_at(narrow, t) == pytest.approx(detuning_at(step, t), abs=1e-12)


@pytest.mark.parametrize("shape", ["linear", "raised_cosine"])
@pytest.mark.parametrize("span", [(0.0, 2.0), (0.3, 1.1), (-1.0, 3.5), (1.7, 1.9)])
def test_detuning_integral_matches_quadrature(shape, span):
    prof = DetuningProfile(shape, 0.0, 2.0, DEFAULT_DELTA)
    a, b = span
    grid = np.linspace(a, b, 20001)
    vals = np.array([detuning_at(prof, t) for t in grid])
    expected = np.trapezoid(vals, grid)
    assert prof.integral(a, b) == pytest.approx(expected, abs=1e-9)


def test_detuning_integral_reversed_span_changes_sign():
    prof = DetuningProfile("raised_cosine", 0.0, 1.0, DEFAULT_DELTA)
    assert prof.integral(1.0, 0.2) == pytest.approx(-prof.integral(0.2, 1.0))


def test_switch_boundary_values():
    f = SwitchFunctions("raised_cosine", 0.0, 1.0)
    assert switch_at(f, -1.0) == (1.0, 0.0)
    assert switch_at(f, 2.0) == (0.0, 1.0)
    f1, f2 = switch_at(f, 0.5)
    assert f1 == pytest.approx(0.5)
    assert f2 == pytest.approx(0.5)
    assert f1 * f2 == pytest.approx(0.25)


def test_step_switch_is_a_theta_function():
    f = SwitchFunctions("step", 0.0, 1.0)
    assert switch_at(f, 0.25) == (1.0, 0.0)
    assert switch_at(f, 0.75) == (0.0, 1.0)


@given(st.floats(min_value=-0.5, max_value=1.5))
@settings(max_examples=200, deadline=None)
def test_switch_functions_sum_to_one_and_stay_bounded(t):
    for shape in ("step", "raised_cosine"):
        f1, f2 = switch_at(SwitchFunctions(shape, 0.0, 1.0), t)
        assert f1 + f2 == 1.0
        assert 0.0 <= f1 <= 1.0
        assert f1 * f2 <= 0.25 + 1e-15


def test_overlap_peaks_only_at_the_midpoint():
    f = SwitchFunctions("raised_cosine", 0.0, 1.0)
    grid = np.linspace(0.0, 1.0, 1001)
    prod = np.array([math.prod(switch_at(f, t)) for t in grid])
    assert np.argmax(prod) == 500
    assert prod.max() == pytest.approx(0.25)


def test_normalize_lambda_default_shapes():
    lam = normalize_lambda(DEFAULT_OMEGA, SwitchFunctions("raised_cosine", 0.0, 1.0))
    assert lam == pytest.approx(4.0 * DEFAULT_OMEGA)
    # |lambda| ~ 1.2e6 rad/s, of the order of 1 MHz
    assert lam == pytest.approx(8.0 * math.pi * 0.047)
    assert 1.0 < lam < 1.4


def test_normalize_lambda_scales_with_the_peak_overlap():
    class HalfOverlap:
        window_start = 0.0
        window_width = 1.0

        def values(self, t):
            # synthetic pair with max product 1/2 (not a complementary pair)
            return (math.sqrt(0.5), math.sqrt(0.5)) if 0.4 < t < 0.6 else (1.0, 0.0)

    assert normalize_lambda(DEFAULT_OMEGA, HalfOverlap()) == pytest.approx(2.0 * DEFAULT_OMEGA)


def test_normalize_lambda_rejects_degenerate_windows():
    with pytest.raises(InvalidParamsError, match="no overlap window"):
        normalize_lambda(DEFAULT_OMEGA, SwitchFunctions("raised_cosine", 0.0, 0.0))


def test_params_resolve_lambda_automatically():
    p = ExperimentParams(model="channel", t_switch=0.33)
    assert p.resolved_lambda() == pytest.approx(4.0 * DEFAULT_OMEGA)
    q = ExperimentParams(model="channel", t_switch=0.33, lambda_coupling=0.5)
    assert q.resolved_lambda() == 0.5
