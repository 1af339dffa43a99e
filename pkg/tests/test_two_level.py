import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from coopres.numerics import StepControl
from coopres.two_level import (
    MIRRORED,
    DriveSpec,
    SimConfig,
    TwoLevelState,
    analytic_state,
    conserved_energy,
    max_field,
    oscillator_frequency,
    phase_theta,
    pure_coherence,
    purity_defect,
    rhs_closed_system,
    simulate,
    weak_field_population,
)

TIGHT = StepControl(rtol=1e-11, atol=1e-13)


def short_cfg(**kw):
    base = dict(drive=DriveSpec(0.01, 1.0), t_end=50.0, sample_every=None, step=TIGHT)
    base.update(kw)
    return SimConfig(**base)


# --- right-hand side --------------------------------------------------------

def test_rhs_ground_state_no_field_is_fixed_point():
    cfg = short_cfg(drive=DriveSpec(0.0, 1.0))
    d = rhs_closed_system(0.0, TwoLevelState(0.0, 0j), 0j, cfg)
    assert np.allclose(d, 0)


def test_rhs_hand_values():
    # W = omega_s + Omega_0 cos(0) = 0.2 + 0.1
    cfg = short_cfg(drive=DriveSpec(0.1, 2.0))
    state = TwoLevelState(0.25, 0.1 + 0.3j)
    d = rhs_closed_system(0.0, state, 0.2 + 0j, cfg)
    w = 0.3
    assert d[0] == pytest.approx(2 * w * 0.3)
    assert d[1] == pytest.approx(1j * 0.5 * w)
    assert d[2] == pytest.approx(1j * (0.1 + 0.3j))


def test_rhs_half_inversion_freezes_coherence():
    cfg = short_cfg()
    d = rhs_closed_system(0.3, TwoLevelState(0.5, 0.5j), 0.4 + 0j, cfg)
    assert d[1] == 0


def test_alternative_convention_is_mirror_image():
    base = dict(initial_rho_aa=0.1, initial_rho_ab=0.3j, t_end=200.0, sample_every=1.0)
    a = simulate(short_cfg(**base))
    b = simulate(short_cfg(**{**base, "initial_rho_ab": -0.3j}, sign_convention=MIRRORED))
    assert np.allclose(a.states[:, 0], b.states[:, 0], atol=1e-9)
    assert np.allclose(a.states[:, 1], -b.states[:, 1], atol=1e-9)
    assert np.allclose(a.states[:, 2], b.states[:, 2], atol=1e-9)


def test_matches_scipy_reference():
    cfg = short_cfg(t_end=100.0)
    ours = simulate(cfg)

    def f(t, y):
        raa, rab, os_ = y[0], y[1] + 1j * y[2], y[3] + 1j * y[4]
        w = os_ + 0.01 * math.cos(t)
        draa = 2 * (np.conj(w) * rab).imag
        drab = 1j * (1 - 2 * raa) * w
        dos = 1j * rab
        return [draa, drab.real, drab.imag, dos.real, dos.imag]

    y0 = cfg.y0
    ref = solve_ivp(f, (0, 100.0), [y0[0].real, y0[1].real, y0[1].imag, 0, 0], method="DOP853", rtol=1e-12, atol=1e-14)
    end = ref.y[:, -1]
    assert np.allclose(ours.final, [end[0], end[1] + 1j * end[2], end[3] + 1j * end[4]], atol=1e-8)


# --- invariants ---------------------------------------------------------------

def test_purity_conserved_under_drive():
    traj = simulate(short_cfg(t_end=500.0))
    pd = purity_defect(traj.states[:, 0], traj.states[:, 1])
    assert np.max(np.abs(pd - pd[0])) < 1e-9


def test_energy_conserved_without_drive():
    traj = simulate(short_cfg(drive=DriveSpec(0.0, 1.0), t_end=500.0))
    e = conserved_energy(traj.states[:, 0], traj.states[:, 2])
    assert np.max(np.abs(e - e[0])) < 1e-9


def test_zero_seed_zero_drive_stays_put():
    cfg = short_cfg(drive=DriveSpec(0.0, 1.0), initial_rho_ab=0j, sample_every=1.0)
    traj = simulate(cfg)
    assert np.all(traj.states == traj.states[0])


def test_population_and_density_bounds_hold():
    traj = simulate(short_cfg(drive=DriveSpec(0.05, 1.0), t_end=300.0))
    raa = traj.states[:, 0].real
    assert raa.min() > -1e-9 and raa.max() < 1 + 1e-9
    assert np.all(np.abs(traj.states[:, 1]) ** 2 <= raa * (1 - raa) + 1e-9)


@settings(max_examples=15, deadline=None)
@given(
    rho=st.floats(0.0, 1.0),
    w0=st.floats(0.0, 0.2),
    nu=st.floats(0.3, 2.0),
    phase=st.floats(0.0, 2 * math.pi),
)
def test_purity_conserved_property(rho, w0, nu, phase):
    cfg = short_cfg(drive=DriveSpec(w0, nu, phase), initial_rho_aa=rho, t_end=40.0)
    traj = simulate(cfg)
    pd = purity_defect(traj.states[:, 0], traj.states[:, 1])
    assert np.max(np.abs(pd - pd[0])) < 1e-9


@settings(max_examples=15, deadline=None)
@given(rho=st.floats(0.0, 1.0), re=st.floats(-0.5, 0.5), im=st.floats(-0.5, 0.5))
def test_energy_conserved_property(rho, re, im):
    cfg = short_cfg(drive=DriveSpec(0.0, 1.0), initial_rho_aa=rho, initial_omega_s=complex(re, im), t_end=40.0)
    traj = simulate(cfg)
    e = conserved_energy(traj.states[:, 0], traj.states[:, 2])
    assert np.max(np.abs(e - e[0])) < 1e-9


# --- closed forms -------------------------------------------------------------

def test_phase_theta_drive_only():
    drive = DriveSpec(0.01, 1.0)
    assert phase_theta(0.0, drive) == 0.0
    t = 1.3
    assert phase_theta(t, drive) == pytest.approx(0.01 * math.sin(t))


def test_phase_theta_with_field_history():
    drive = DriveSpec(0.0, 1.0)
    assert phase_theta(2.0, drive, lambda s: 0.5) == pytest.approx(1.0, rel=1e-12)


def test_analytic_state_examples():
    s = analytic_state(0.0)
    assert s.rho_aa == 0 and s.rho_ab == 0
    s = analytic_state(math.pi / 4)
    assert s.rho_aa == pytest.approx(0.5)
    assert s.rho_ab == pytest.approx(0.5j)
    assert abs(analytic_state(0.37).purity_defect) < 1e-15


def test_theta_parametrisation_without_field():
    eps, nu = 0.01, 1.0
    cfg = short_cfg(drive=DriveSpec(eps * nu, nu), initial_rho_aa=0.0, initial_rho_ab=0j,
                    t_end=10 * 2 * math.pi / nu, sample_every=0.05, field_feedback=False)
    traj = simulate(cfg)
    theta = eps * np.sin(nu * traj.times)
    assert np.max(np.abs(traj.states[:, 0] - np.sin(theta) ** 2)) < 1e-6
    assert np.max(np.abs(traj.states[:, 1] - 0.5j * np.sin(2 * theta))) < 1e-6


def test_weak_field_population_matches_small_angle():
    t = np.linspace(0, 20, 200)
    eps = 0.01
    exact = np.sin(eps * np.sin(t)) ** 2
    assert np.max(np.abs(weak_field_population(t, eps, 1.0) - exact)) < eps**4
    assert weak_field_population(0.0, eps, 1.0) == 0


@pytest.mark.parametrize(
    "rho,kind,rate",
    [(0.0, "oscillatory", 1.0), (0.5, "marginal", 0.0), (1.0, "growing", 1.0), (0.1, "oscillatory", math.sqrt(0.8))],
)
def test_oscillator_frequency(rho, kind, rate):
    reg = oscillator_frequency(rho, 1.0)
    assert reg.kind == kind
    assert reg.rate == pytest.approx(rate)


def test_oscillator_frequency_rejects_bad_population():
    with pytest.raises(ValueError):
        oscillator_frequency(1.5, 1.0)


def test_frozen_population_field_oscillates_at_predicted_rate():
    # near the ground state the field oscillates at Omega_a sqrt(1 - 2 rho_aa)
    cfg = short_cfg(drive=DriveSpec(0.0, 1.0), initial_rho_aa=0.0, initial_rho_ab=0j, initial_omega_s=1e-4,
                    t_end=60.0, sample_every=0.01)
    traj = simulate(cfg)
    sig = traj.states[:, 2].real
    crossings = np.nonzero(np.diff(np.sign(sig)))[0]
    period = 2 * np.mean(np.diff(traj.times[crossings]))
    assert period == pytest.approx(2 * math.pi, rel=1e-3)


# --- configuration --------------------------------------------------------------

def test_default_seed_is_pure():
    cfg = SimConfig(drive=DriveSpec(0.01, 1.0))
    assert cfg.rho_ab0 == pytest.approx(0.3j)
    assert abs(purity_defect(cfg.initial_rho_aa, cfg.rho_ab0)) < 1e-15
    assert pure_coherence(0.0) == 0


@pytest.mark.parametrize(
    "kw",
    [
        {"initial_rho_aa": 1.2},
        {"initial_rho_ab": 0.9},
        {"cooperative_freq": 0.0},
        {"t_end": -1.0},
        {"sign_convention": "other"},
    ],
)
def test_config_validation(kw):
    with pytest.raises(ValueError):
        SimConfig(drive=DriveSpec(0.01, 1.0), **kw)


def test_drive_validation():
    with pytest.raises(ValueError):
        DriveSpec(0.01, 0.0)
    with pytest.raises(ValueError):
        DriveSpec(-0.1, 1.0)
    assert DriveSpec(0.02, 2.0).epsilon == pytest.approx(0.01)


def test_max_field_window():
    cfg = short_cfg(t_end=200.0, sample_every=1.0)
    traj = simulate(cfg)
    assert max_field(traj, 100.0) <= max_field(traj)


def test_units_scale_with_cooperative_frequency():
    # doubling every rate and halving time gives the same trajectory
    a = simulate(short_cfg(t_end=100.0, sample_every=10.0))
    b = simulate(short_cfg(drive=DriveSpec(0.02, 2.0), cooperative_freq=2.0, t_end=50.0, sample_every=5.0))
    assert np.allclose(a.states[:, 0], b.states[:, 0], atol=1e-8)
    assert np.allclose(a.states[:, 2] * 2, b.states[:, 2], atol=1e-8)
