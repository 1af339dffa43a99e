"""RF coupling chain between an oscillating spin magnetization and an LC pickup.

All quantities are SI.  The chain is:

* magnetic moment ``mu = mu_ab * N_spins * rho_ab`` at the coil centre;
* near-zone EMF ``V = -i (mu0 c k / 4 pi) mu . J`` where
  ``J = loop integral of dl x n / r^2`` (``|J| = 2 pi turns / a`` at the centre);
* circuit ``L dI/dt + q/C = V``;
* coil field ``B = (mu0 / 4 pi) I J``;
* field envelope ``dOmega_s/dt = -i Omega_a^2 rho_ab`` with
  ``Omega_a^2 = omega_s (mu0 mu_ab |J| / 4 pi)^2 N_spins / (2 hbar L)``.

The near-zone electric field of a magnetic dipole carries the vacuum
impedance ``mu0 c``; the factor ``c`` is kept here so that ``V`` is in volts
and ``Omega_a`` in rad/s.  :func:`unit_audit` checks every link.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math
import warnings

import numpy as np
from scipy import constants as const
from scipy import integrate as sp_integrate

from .numerics import StepControl, Trajectory, integrate

MU0 = const.mu_0
C_LIGHT = const.c
HBAR = const.hbar
K_B = const.k
EPS0 = const.epsilon_0
MU_B = const.physical_constants["Bohr magneton"][0]
MU_PROTON = const.physical_constants["proton mag. mom."][0]
HBAR_CGS = HBAR * 1e7  # erg s

__all__ = [
    "CoilSpec",
    "SampleSpec",
    "reference_coil",
    "reference_sample",
    "geometry_integral",
    "biot_savart_field",
    "coil_field",
    "dipole_emf",
    "circuit_response",
    "lc_energy",
    "cooperative_frequency_rf",
    "cooperative_frequency_optical",
    "NmrEstimate",
    "nmr_estimate",
    "SveaReport",
    "svea_envelopes",
    "svea_consistency_check",
    "AuditEntry",
    "unit_audit",
]


@dataclass(frozen=True)
class CoilSpec:
    radius_a_s: float
    inductance_l_s: float
    capacitance_c_s: float
    turns: int = 1

    def __post_init__(self):
        for name in ("radius_a_s", "inductance_l_s", "capacitance_c_s"):
            v = getattr(self, name)
            if not (v > 0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive and finite, got {v!r}")
        if int(self.turns) != self.turns or self.turns < 1:
            raise ValueError("turns must be a positive integer")

    @property
    def omega_s(self):
        return 1.0 / math.sqrt(self.inductance_l_s * self.capacitance_c_s)


@dataclass(frozen=True)
class SampleSpec:
    density_n: float  # spins per m^3
    volume: float  # m^3
    mu_ab: float  # J/T
    omega_ab: float  # rad/s

    def __post_init__(self):
        if self.density_n < 0 or self.volume <= 0 or self.mu_ab < 0 or self.omega_ab <= 0:
            raise ValueError("sample density and moment must be >= 0; volume and frequency > 0")

    @property
    def n_spins(self):
        return self.density_n * self.volume


def loop_inductance(radius, wire_radius):
    """Self-inductance of a thin circular loop, ``mu0 a (ln(8a/r_w) - 2)``."""
    if not 0 < wire_radius < radius:
        raise ValueError("need 0 < wire_radius < radius")
    return MU0 * radius * (math.log(8 * radius / wire_radius) - 2.0)


def reference_coil(omega, radius=0.01, wire_radius=5e-4):
    """Single-turn loop tuned to ``omega`` (rad/s); 1 cm radius, 0.5 mm wire by default."""
    ind = loop_inductance(radius, wire_radius)
    return CoilSpec(radius, ind, 1.0 / (ind * omega**2), 1)


def reference_sample(coil, density_n=1e19, mu_ab=MU_B, omega_ab=None):
    """Spins filling the sphere inscribed in the coil; tuned to the coil by default."""
    vol = 4.0 / 3.0 * math.pi * coil.radius_a_s**3
    return SampleSpec(density_n, vol, mu_ab, coil.omega_s if omega_ab is None else omega_ab)


def geometry_integral(coil):
    """``J`` at the coil centre, as a 3-vector along the coil axis (z), in 1/m."""
    return np.array([0.0, 0.0, 2.0 * math.pi * coil.turns / coil.radius_a_s])


def biot_savart_field(coil, current, point=(0.0, 0.0, 0.0)):
    """Field (tesla) of the coil at ``point`` by direct quadrature of Biot-Savart.

    The coil lies in the z = 0 plane, centred on the origin.
    """
    a = coil.radius_a_s
    p = np.asarray(point, dtype=float)

    def integrand(phi, comp):
        pos = np.array([a * math.cos(phi), a * math.sin(phi), 0.0])
        dl = np.array([-a * math.sin(phi), a * math.cos(phi), 0.0])
        r = p - pos
        return np.cross(dl, r)[comp] / np.linalg.norm(r) ** 3

    pref = MU0 / (4 * math.pi) * current * coil.turns
    return np.array(
        [pref * sp_integrate.quad(integrand, 0.0, 2 * math.pi, args=(c,), epsabs=1e-12 / a, epsrel=1e-13)[0] for c in range(3)]
    )


def coil_field(coil, current):
    """Centre field ``(mu0 / 4 pi) I J`` (tesla)."""
    return MU0 / (4 * math.pi) * current * geometry_integral(coil)


def _axis_component(mu):
    mu = np.asarray(mu, dtype=complex)
    if mu.ndim == 0:
        return complex(mu)
    if mu.shape != (3,):
        raise ValueError("moment must be a scalar (axial) or a 3-vector")
    return complex(mu[2])


def dipole_emf(mu_amplitude, k, coil):
    """EMF (volts) induced by a dipole of complex amplitude ``mu`` (A m^2) at the centre.

    A scalar ``mu`` is taken along the coil axis.  Warns when ``k a >= 0.1``
    because the near-zone form no longer holds.
    """
    if k * coil.radius_a_s >= 0.1:
        warnings.warn(f"k*a = {k * coil.radius_a_s:.3g} >= 0.1: outside the near-zone limit", RuntimeWarning)
    j = geometry_integral(coil)[2]
    return -1j * MU0 * C_LIGHT * k / (4 * math.pi) * _axis_component(mu_amplitude) * j


def circuit_response(coil, emf, t_span, y0=(0.0, 0.0), q_factor=None, step=None, samples=None):
    """Integrate ``L dI/dt + q/C + (L omega_s/Q) I = V(t)`` from ``y0 = (I, q)``.

    Works with the charge and current directly, so ``V`` need not be
    differentiable: a step in ``V`` leaves ``I`` continuous and kinks it.
    Internally time is scaled by ``omega_s`` and charge by ``omega_s``.
    ``samples`` gives the number of uniform output intervals (default:
    every accepted step).

    Returns a trajectory in seconds with columns ``(I, q)``.
    """
    w = coil.omega_s
    ind = coil.inductance_l_s
    if q_factor is not None and q_factor <= 0:
        raise ValueError("q_factor must be positive")
    damp = 0.0 if q_factor is None else 1.0 / q_factor

    def rhs(tau, u):
        # u = (omega q, I)
        return np.array((u[1], emf(tau / w) / (ind * w) - u[0] - damp * u[1]))

    i0, q0 = y0
    tau_span = (t_span[0] * w, t_span[1] * w)
    every = None if samples is None else (tau_span[1] - tau_span[0]) / samples
    traj = integrate(rhs, np.array([w * q0, i0], dtype=float), tau_span,
                     step or StepControl(rtol=1e-12, atol=1e-15), sample_every=every)
    states = np.column_stack((traj.states[:, 1], traj.states[:, 0] / w))
    return Trajectory(traj.times / w, states, traj.stats, time_unit="s")


def lc_energy(coil, current, charge):
    """``L I^2 / 2 + q^2 / 2C`` (joules)."""
    return 0.5 * coil.inductance_l_s * np.abs(current) ** 2 + 0.5 * np.abs(charge) ** 2 / coil.capacitance_c_s


def cooperative_frequency_rf(coil, sample):
    """Collective coupling rate ``Omega_a`` (rad/s) of the sample with the tuned coil."""
    j = geometry_integral(coil)[2]
    val = coil.omega_s / (2 * HBAR * coil.inductance_l_s) * (MU0 * sample.mu_ab * j / (4 * math.pi)) ** 2 * sample.n_spins
    return math.sqrt(val)


def cooperative_frequency_optical(omega_ab, dipole_wp, density_n, gaussian=True):
    """Optical ``Omega_a = sqrt((2 pi / hbar) omega ℘^2 N)``.

    With ``gaussian=True`` the inputs are CGS-Gaussian: ``dipole_wp`` in
    statC cm and ``density_n`` in cm^-3.  With ``gaussian=False`` they are SI
    (C m, m^-3) and the equivalent form ``omega ℘^2 N / (2 eps0 hbar)`` is used.
    An order-of-magnitude estimate: no local-field or degeneracy factors.
    """
    if min(omega_ab, dipole_wp, density_n) < 0:
        raise ValueError("inputs must be non-negative")
    if gaussian:
        return math.sqrt(2 * math.pi / HBAR_CGS * omega_ab * dipole_wp**2 * density_n)
    return math.sqrt(omega_ab * dipole_wp**2 * density_n / (2 * EPS0 * HBAR))


@dataclass(frozen=True)
class NmrEstimate:
    delta_n_ab: float  # m^-3
    polarization: float
    omega_ab: float
    omega_a_hint: float


def nmr_estimate(density_n0, delta_e, temperature, mu_ab=MU_PROTON, coil=None):
    """Thermal population difference and the cooperative rate it supports.

    ``delta_n_ab = N0 dE / kT`` (linearised Boltzmann).  The rate uses
    :func:`cooperative_frequency_rf` with the polarized density and a
    reference coil tuned to ``dE / hbar`` unless ``coil`` is given.
    Warns when ``dE / kT > 0.1``.
    """
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    if delta_e < 0 or density_n0 < 0:
        raise ValueError("density and energy splitting must be non-negative")
    x = delta_e / (K_B * temperature)
    if x > 0.1:
        warnings.warn(f"dE/kT = {x:.3g} > 0.1: linearised polarization is inaccurate", RuntimeWarning)
    dn = density_n0 * x
    omega = delta_e / HBAR
    if omega == 0:
        return NmrEstimate(dn, x, 0.0, 0.0)
    coil = coil or reference_coil(omega)
    hint = cooperative_frequency_rf(coil, reference_sample(coil, dn, mu_ab, omega))
    return NmrEstimate(dn, x, omega, hint)


@dataclass(frozen=True)
class SveaReport:
    ratio: float  # Omega_a / omega_s
    max_deviation: float
    valid: bool
    tau_end: float
    truncated: bool = False
    tau: np.ndarray = field(default=None, repr=False)
    full: np.ndarray = field(default=None, repr=False)
    envelope: np.ndarray = field(default=None, repr=False)


def svea_envelopes(ratio, tau_end, rho=None, drho=None, samples=2000, step=None):
    """Full and reduced field envelopes for a prescribed coherence ``rho(tau)``.

    Time ``tau = omega_s t``; field in units of ``Omega_a``; ``ratio = Omega_a/omega_s``.
    The full equation is ``phi'' + phi = -2 i r d/dtau[rho e^{-i tau}]``; its
    envelope ``phi e^{i tau}`` is compared with ``psi' = -i r rho``, both
    starting from zero field.  Default ``rho = cos(r tau)``.

    Returns ``(tau, full_envelope, reduced_envelope)``.
    """
    r = float(ratio)
    if rho is None:
        rho = lambda s: math.cos(r * s)  # noqa: E731
        drho = lambda s: -r * math.sin(r * s)  # noqa: E731
    elif drho is None:
        h = 1e-6
        drho = lambda s: (rho(s + h) - rho(s - h)) / (2 * h)  # noqa: E731
    step = step or StepControl(rtol=1e-11, atol=1e-14)
    cexp = np.exp

    def rhs(t, y):
        # y = (phi, phi', psi)
        src = -2j * r * (drho(t) - 1j * rho(t)) * cexp(-1j * t)
        return np.array((y[1], src - y[0], -1j * r * rho(t)))

    y0 = np.array([0.0, -1j * r * rho(0.0), 0.0], dtype=complex)
    traj = integrate(rhs, y0, (0.0, tau_end), step, sample_every=tau_end / samples)
    tau = traj.times
    return tau, traj.states[:, 0] * np.exp(1j * tau), traj.states[:, 2]


def _svea_report(ratio, tau_end, rho=None, drho=None, truncated=False, threshold=0.05):
    tau, full, env = svea_envelopes(ratio, tau_end, rho, drho)
    scale = float(np.max(np.abs(env)))
    dev = 0.0 if scale == 0 else float(np.max(np.abs(full - env)) / scale)
    if scale == 0 and np.max(np.abs(full)) > 0:
        dev = math.inf
    return SveaReport(ratio, dev, dev <= threshold, tau_end, truncated, tau, full, env)


def svea_consistency_check(coil, sample, t_span=None, rho=None, drho=None, max_cycles=2000, threshold=0.05):
    """Compare the full field equation with the first-order envelope equation.

    The ratio ``Omega_a / omega_s`` follows from the coil and sample.  The
    window defaults to a quarter envelope period ``pi / 2 Omega_a`` and is
    capped at ``max_cycles`` carrier periods (``truncated`` flags this).
    ``rho`` and ``drho`` are functions of the scaled time ``omega_s t``.
    """
    w = coil.omega_s
    ratio = cooperative_frequency_rf(coil, sample) / w
    if t_span is None:
        tau_end = math.pi / (2 * ratio) if ratio > 0 else 2 * math.pi * max_cycles
    else:
        tau_end = (t_span[1] - t_span[0]) * w
    cap = 2 * math.pi * max_cycles
    truncated = tau_end > cap
    return _svea_report(ratio, min(tau_end, cap), rho, drho, truncated, threshold)


@dataclass(frozen=True)
class AuditEntry:
    stage: str
    expression: str
    expected: str
    ok: bool


def unit_audit():
    """Dimensional check of each link of the chain, using sympy's SI units.

    Returns a list of :class:`AuditEntry`; all ``ok`` for this module's
    formulas.  A final informational entry records that dropping ``c`` from
    the EMF would leave it in V s/m rather than volts.
    """
    from sympy.physics import units as u
    from sympy.physics.units import convert_to

    base = [u.kilogram, u.meter, u.second, u.ampere]

    def same(expr, target):
        ratio = convert_to(expr / target, base)
        return not ratio.atoms(u.Quantity)

    mu0 = u.henry / u.meter
    moment = u.joule / u.tesla
    k = 1 / u.meter
    jgeo = 1 / u.meter
    c = u.meter / u.second
    hbar = u.joule * u.second
    ind = u.henry
    cap = u.farad
    omega = 1 / u.second
    a = u.meter

    emf = mu0 * c * k * moment * jgeo
    current = emf / (ind * omega)  # dI/dt = V / L
    charge = current / omega
    b_field = mu0 * current * jgeo
    omega_s_field = moment * b_field / hbar
    omega_a_sq = omega * (mu0 * moment * jgeo) ** 2 / (hbar * ind)
    omega_a_sq_loop = omega * mu0**2 * moment**2 / (hbar * ind * a**2)

    checks = [
        ("emf", emf, u.volt),
        ("circuit L dI/dt", ind * current * omega, u.volt),
        ("circuit q/C", charge / cap, u.volt),
        ("resonance 1/sqrt(LC)", 1 / (ind * cap) ** 0.5, omega),
        ("coil field", b_field, u.tesla),
        ("Rabi rate mu B / hbar", omega_s_field, omega),
        ("Omega_a^2", omega_a_sq, omega**2),
        ("Omega_a^2 single loop", omega_a_sq_loop, omega**2),
    ]
    out = [AuditEntry(name, str(convert_to(expr, base)), str(target), same(expr, target)) for name, expr, target in checks]
    without_c = mu0 * k * moment * jgeo
    out.append(AuditEntry("emf without c (reference)", str(convert_to(without_c, base)), "V s/m",
                          same(without_c, u.volt * u.second / u.meter)))
    return out
