import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from coopres.numerics import IntegrationError, StepControl, Trajectory, integrate, mat_vec


def harmonic(t, y):
    return np.array([y[1], -y[0]])


def test_harmonic_oscillator_matches_closed_form():
    traj = integrate(harmonic, [1.0, 0.0], (0.0, 20.0), StepControl(rtol=1e-11, atol=1e-13), sample_every=0.1)
    assert np.allclose(traj.states[:, 0], np.cos(traj.times), atol=1e-9)
    assert np.allclose(traj.states[:, 1], -np.sin(traj.times), atol=1e-9)
    assert traj.times[-1] == 20.0


def test_uniform_grid_and_endpoint():
    traj = integrate(harmonic, [1.0, 0.0], (0.0, 1.0), sample_every=0.25)
    assert np.allclose(traj.times, [0, 0.25, 0.5, 0.75, 1.0])


def test_dense_output_accurate_between_steps():
    # coarse steps, fine output: samples between steps must stay accurate
    traj = integrate(harmonic, [1.0, 0.0], (0.0, 30.0), StepControl(rtol=1e-12, atol=1e-14), sample_every=0.01)
    assert np.max(np.abs(traj.states[:, 0] - np.cos(traj.times))) < 1e-7


def test_complex_state_preserved():
    lam = 0.3 + 2.0j
    traj = integrate(lambda t, y: lam * y, np.array([1.0 + 0j]), (0.0, 3.0), StepControl(rtol=1e-12, atol=1e-14))
    assert traj.states.dtype == complex
    assert abs(traj.final[0] - np.exp(lam * 3.0)) < 1e-9 * abs(np.exp(lam * 3.0))


def test_rk4_fixed_step_fourth_order():
    errs = []
    for h in (0.1, 0.05):
        traj = integrate(harmonic, [1.0, 0.0], (0.0, 2.0), StepControl(fixed_step=h))
        errs.append(abs(traj.final[0] - math.cos(2.0)))
    assert 12 < errs[0] / errs[1] < 20


def test_rk4_is_bitwise_reproducible():
    a = integrate(harmonic, [1.0, 0.0], (0.0, 5.0), StepControl(fixed_step=0.01), sample_every=0.1)
    b = integrate(harmonic, [1.0, 0.0], (0.0, 5.0), StepControl(fixed_step=0.01), sample_every=0.1)
    assert np.array_equal(a.states, b.states)


def test_agrees_with_scipy_on_nonlinear_problem():
    def vdp(t, y):
        return np.array([y[1], 2.0 * (1 - y[0] ** 2) * y[1] - y[0]])

    ours = integrate(vdp, [2.0, 0.0], (0.0, 10.0), StepControl(rtol=1e-11, atol=1e-13))
    ref = solve_ivp(vdp, (0.0, 10.0), [2.0, 0.0], method="DOP853", rtol=1e-12, atol=1e-14)
    assert np.allclose(ours.final, ref.y[:, -1], atol=1e-8)


def test_every_step_recording_has_increasing_times():
    traj = integrate(harmonic, [1.0, 0.0], (0.0, 5.0))
    assert np.all(np.diff(traj.times) > 0)
    assert traj.stats.steps == len(traj) - 1
    assert traj.stats.rhs_evals > traj.stats.steps


def test_nonfinite_rhs_raises_with_last_state():
    def blowup(t, y):
        return np.array([np.inf if t > 0.5 else 1.0])

    with pytest.raises(IntegrationError) as info:
        integrate(blowup, [0.0], (0.0, 1.0), StepControl(fixed_step=0.1))
    assert info.value.y is not None and np.all(np.isfinite(info.value.y))


def test_finite_time_blowup_underflows():
    with pytest.raises(IntegrationError):
        integrate(lambda t, y: y**2, [1.0], (0.0, 2.0))


@pytest.mark.parametrize("span", [(1.0, 1.0), (2.0, 1.0)])
def test_bad_span_rejected(span):
    with pytest.raises(ValueError):
        integrate(harmonic, [1.0, 0.0], span)


def test_step_control_validation():
    with pytest.raises(ValueError):
        StepControl(rtol=0)
    with pytest.raises(ValueError):
        StepControl(fixed_step=-1)
    with pytest.raises(ValueError):
        integrate(harmonic, [1.0, 0.0], (0, 1), sample_every=0)


def test_trajectory_shape_check():
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0]), np.array([[1.0]]))


def test_mat_vec_shape_check():
    assert np.allclose(mat_vec(np.eye(2), np.array([1.0, 2.0])), [1.0, 2.0])
    with pytest.raises(ValueError):
        mat_vec(np.eye(2), np.ones(3))


@settings(max_examples=30, deadline=None)
@given(
    re=st.floats(-1.0, 0.5),
    im=st.floats(-5.0, 5.0),
    t1=st.floats(0.1, 4.0),
)
def test_linear_scalar_ode_property(re, im, t1):
    lam = complex(re, im)
    traj = integrate(lambda t, y: lam * y, np.array([1.0 + 0j]), (0.0, t1), StepControl(rtol=1e-11, atol=1e-13))
    exact = np.exp(lam * t1)
    assert abs(traj.final[0] - exact) <= 1e-8 * max(1.0, abs(exact))
