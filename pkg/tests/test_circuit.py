import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coopres.circuit import (
    C_LIGHT,
    EPS0,
    HBAR,
    HBAR_CGS,
    K_B,
    MU0,
    MU_B,
    CoilSpec,
    SampleSpec,
    biot_savart_field,
    circuit_response,
    coil_field,
    cooperative_frequency_optical,
    cooperative_frequency_rf,
    dipole_emf,
    geometry_integral,
    lc_energy,
    loop_inductance,
    nmr_estimate,
    reference_coil,
    reference_sample,
    svea_consistency_check,
    svea_envelopes,
    unit_audit,
)

UNIT = CoilSpec(1.0, 1.0, 1.0)


# --- geometry and fields ------------------------------------------------------------------

def test_geometry_integral_unit_loop():
    j = geometry_integral(UNIT)
    assert j == pytest.approx([0, 0, 2 * math.pi])


def test_geometry_integral_scaling():
    a = geometry_integral(CoilSpec(0.02, 1e-8, 1e-9))
    b = geometry_integral(CoilSpec(0.04, 1e-8, 1e-9))
    assert b[2] == pytest.approx(a[2] / 2)
    assert geometry_integral(CoilSpec(0.02, 1e-8, 1e-9, turns=3))[2] == pytest.approx(3 * a[2])


@settings(max_examples=15, deadline=None)
@given(a=st.floats(1e-3, 1.0), turns=st.integers(1, 5), current=st.floats(-10, 10))
def test_biot_savart_matches_geometry_integral(a, turns, current):
    coil = CoilSpec(a, 1e-7, 1e-9, turns)
    direct = biot_savart_field(coil, current)
    assert direct == pytest.approx(coil_field(coil, current), rel=1e-10, abs=1e-18)
    assert coil_field(coil, current)[2] == pytest.approx(MU0 * current * turns / (2 * a), rel=1e-12)


@pytest.mark.parametrize("z", [0.005, 0.01, 0.05])
def test_biot_savart_on_axis(z):
    coil = CoilSpec(0.01, 1e-8, 1e-9)
    b = biot_savart_field(coil, 2.0, (0, 0, z))
    expected = MU0 * 2.0 * 0.01**2 / (2 * (0.01**2 + z**2) ** 1.5)
    assert b[2] == pytest.approx(expected, rel=1e-10)
    assert abs(b[0]) < 1e-12 * expected and abs(b[1]) < 1e-12 * expected


def test_loop_inductance_default_coil():
    assert loop_inductance(0.01, 5e-4) == pytest.approx(3.864e-8, rel=1e-3)
    with pytest.raises(ValueError):
        loop_inductance(0.01, 0.02)


def test_coil_validation():
    with pytest.raises(ValueError):
        CoilSpec(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        CoilSpec(1.0, 1.0, 1.0, turns=0)
    assert reference_coil(2e9).omega_s == pytest.approx(2e9)


# --- induced EMF ---------------------------------------------------------------------------

def test_emf_perpendicular_moment_is_zero():
    assert dipole_emf(np.array([1.0, 0.5, 0.0]), 1.0, reference_coil(2e9)) == 0


def test_emf_value():
    coil = reference_coil(2e9)
    k = 2e9 / C_LIGHT
    v = dipole_emf(1e-20, k, coil)
    expected = -1j * MU0 * C_LIGHT * k / (4 * math.pi) * (2 * math.pi / 0.01) * 1e-20
    assert v == pytest.approx(expected, rel=1e-14)


def test_emf_is_linear():
    coil = reference_coil(2e9)
    base = dipole_emf(1e-20, 1.0, coil)
    assert dipole_emf(3e-20, 1.0, coil) == pytest.approx(3 * base)
    assert dipole_emf(1e-20, 2.0, coil) == pytest.approx(2 * base)
    assert dipole_emf(np.array([0, 0, 1e-20j]), 1.0, coil) == pytest.approx(1j * base)


def test_emf_warns_outside_near_zone():
    coil = reference_coil(2e9)
    with pytest.warns(RuntimeWarning):
        dipole_emf(1.0, 20.0, coil)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        dipole_emf(1.0, 1.0, coil)


# --- LC circuit -----------------------------------------------------------------------------

def test_undriven_oscillation_amplitude_constant():
    traj = circuit_response(UNIT, lambda t: 0.0, (0.0, 100.0), y0=(1.0, 0.0), samples=2000)
    i, q = traj.states[:, 0], traj.states[:, 1]
    assert np.max(np.abs(np.hypot(i, q) - 1)) < 1e-6
    assert i == pytest.approx(np.cos(traj.times), abs=1e-6)


def test_undriven_energy_conserved():
    coil = reference_coil(2e9)
    period = 2 * math.pi / coil.omega_s
    traj = circuit_response(coil, lambda t: 0.0, (0.0, 1000 * period), y0=(1e-3, 0.0), samples=5000)
    e = lc_energy(coil, traj.states[:, 0], traj.states[:, 1])
    assert np.max(np.abs(e / e[0] - 1)) < 1e-8


def test_resonant_drive_grows_linearly():
    v0 = 0.1
    traj = circuit_response(UNIT, lambda t: v0 * math.sin(t), (0.0, 200.0), samples=4000)
    t = traj.times
    assert traj.states[:, 0] == pytest.approx(v0 / 2 * t * np.sin(t), abs=1e-8)
    assert traj.states[:, 1] == pytest.approx(v0 / 2 * (np.sin(t) - t * np.cos(t)), abs=1e-8)


def test_step_drive_kinks_current():
    v0, ts = 0.5, 1.0
    traj = circuit_response(UNIT, lambda t: v0 if t >= ts else 0.0, (0.0, 20.0), samples=2000)
    t, i = traj.times, traj.states[:, 0]
    expected = np.where(t >= ts, v0 * np.sin(t - ts), 0.0)
    assert np.max(np.abs(i - expected)) < 1e-8
    # slope just after the step is V0 / L, zero before
    k = np.searchsorted(t, ts)
    assert (i[k + 1] - i[k]) / (t[k + 1] - t[k]) == pytest.approx(v0, rel=1e-2)
    assert i[k - 1] == 0


def test_damping_option():
    traj = circuit_response(UNIT, lambda t: 0.0, (0.0, 50.0), y0=(1.0, 0.0), q_factor=10.0, samples=500)
    e = lc_energy(UNIT, traj.states[:, 0], traj.states[:, 1])
    assert e[-1] == pytest.approx(e[0] * math.exp(-50.0 / 10.0), rel=0.05)
    with pytest.raises(ValueError):
        circuit_response(UNIT, lambda t: 0.0, (0.0, 1.0), q_factor=0.0)


# --- cooperative frequency -------------------------------------------------------------------

def test_rf_reference_value():
    coil = reference_coil(2e9)
    sample = reference_sample(coil, density_n=1e19)
    omega_a = cooperative_frequency_rf(coil, sample)
    assert 1e5 / 3 <= omega_a <= 3e5
    j = 2 * math.pi / coil.radius_a_s
    hand = math.sqrt(2e9 / (2 * HBAR * coil.inductance_l_s) * (MU0 * MU_B * j / (4 * math.pi)) ** 2 * sample.n_spins)
    assert omega_a == pytest.approx(hand, rel=1e-12)


def test_rf_scaling_and_zero_moment():
    coil = reference_coil(2e9)
    a = cooperative_frequency_rf(coil, reference_sample(coil, 1e19))
    b = cooperative_frequency_rf(coil, reference_sample(coil, 2e19))
    assert b == pytest.approx(math.sqrt(2) * a)
    assert cooperative_frequency_rf(coil, reference_sample(coil, 1e19, mu_ab=0.0)) == 0


POS = st.floats(0.5, 2.0)


@settings(max_examples=30, deadline=None)
@given(n=POS, mu=POS, w=POS, ind=POS, a=POS)
def test_rf_monotonicity(n, mu, w, ind, a):
    sample = SampleSpec(1e19, 1e-6, MU_B, 1e9)

    def rate(n=1.0, mu=1.0, w=1.0, ind=1.0, a=1.0):
        lval = 4e-8 * ind
        coil = CoilSpec(0.01 * a, lval, 1.0 / (lval * (1e9 * w) ** 2))
        s = SampleSpec(sample.density_n * n, sample.volume, MU_B * mu, 1e9)
        return cooperative_frequency_rf(coil, s)

    base = rate()
    for kw, up in (("n", True), ("mu", True), ("w", True), ("ind", False), ("a", False)):
        x = locals()[kw]
        if x == 1.0:
            continue
        other = rate(**{kw: x})
        assert (other > base) == ((x > 1.0) == up)


def test_optical_hand_value():
    w, p, n = 2e9, 9.274e-21, 1e13
    assert cooperative_frequency_optical(w, p, n) == pytest.approx(math.sqrt(2 * math.pi / HBAR_CGS * w * p * p * n), rel=1e-12)
    assert cooperative_frequency_optical(w, p, n) == pytest.approx(1.012e5, rel=1e-3)


def test_optical_unit_systems_agree():
    w, p_cgs, n_cgs = 3e15, 2.5e-18, 1e12
    p_si = p_cgs / (1000 * C_LIGHT)  # statC cm -> C m
    si = cooperative_frequency_optical(w, p_si, n_cgs * 1e6, gaussian=False)
    assert si == pytest.approx(cooperative_frequency_optical(w, p_cgs, n_cgs), rel=1e-9)
    assert si == pytest.approx(math.sqrt(w * p_si**2 * n_cgs * 1e6 / (2 * EPS0 * HBAR)), rel=1e-12)


def test_optical_scaling_and_zero():
    a = cooperative_frequency_optical(1e15, 1e-18, 1e12)
    assert cooperative_frequency_optical(1e15, 1e-18, 2e12) == pytest.approx(math.sqrt(2) * a)
    assert cooperative_frequency_optical(1e15, 0.0, 1e12) == 0
    with pytest.raises(ValueError):
        cooperative_frequency_optical(1e15, -1.0, 1e12)


# --- NMR estimate -------------------------------------------------------------------------------

def test_nmr_zero_splitting():
    est = nmr_estimate(1e29, 0.0, 300.0)
    assert est.delta_n_ab == 0 and est.omega_a_hint == 0


def test_nmr_temperature_scaling():
    de = HBAR * 2 * math.pi * 400e6
    a = nmr_estimate(1e29, de, 300.0)
    b = nmr_estimate(1e29, de, 600.0)
    assert b.delta_n_ab == pytest.approx(a.delta_n_ab / 2)
    assert a.delta_n_ab == pytest.approx(1e29 * de / (K_B * 300.0))
    assert a.omega_a_hint > 0


def test_nmr_warnings_and_errors():
    with pytest.warns(RuntimeWarning):
        nmr_estimate(1e29, K_B * 1.0, 1.0)
    with pytest.raises(ValueError):
        nmr_estimate(1e29, 1e-25, 0.0)


# --- envelope approximation ---------------------------------------------------------------------

def sample_for_ratio(coil, ratio):
    ref = reference_sample(coil, 1.0)
    rate = cooperative_frequency_rf(coil, ref)
    return reference_sample(coil, (ratio * coil.omega_s / rate) ** 2)


def test_svea_zero_coherence():
    tau, full, env = svea_envelopes(1e-3, 50.0, rho=lambda s: 0.0, drho=lambda s: 0.0)
    assert np.all(full == 0) and np.all(env == 0)
    coil = CoilSpec(0.01, 1.0, 1.0)
    rep = svea_consistency_check(coil, sample_for_ratio(coil, 1e-3), t_span=(0, 50.0), rho=lambda s: 0.0,
                                 drho=lambda s: 0.0)
    assert rep.max_deviation == 0


def test_svea_small_ratio_accurate():
    coil = CoilSpec(0.01, 1.0, 1.0)
    rep = svea_consistency_check(coil, sample_for_ratio(coil, 1e-3))
    assert rep.ratio == pytest.approx(1e-3)
    assert rep.max_deviation < 0.01 and rep.valid


def test_svea_large_ratio_flagged():
    coil = CoilSpec(0.01, 1.0, 1.0)
    rep = svea_consistency_check(coil, sample_for_ratio(coil, 0.3))
    assert not rep.valid and rep.max_deviation > 0.05


def test_svea_realistic_coil_truncated():
    coil = reference_coil(2e9)
    rep = svea_consistency_check(coil, reference_sample(coil), max_cycles=200)
    assert rep.truncated and rep.valid


def test_unit_audit_passes():
    audit = unit_audit()
    assert len(audit) >= 8
    assert all(e.ok for e in audit)
    assert any("without c" in e.stage for e in audit)
