"""Closed atom-field system for a two-level ensemble.

The ensemble is described by the excited-state population ``rho_aa``, the
coherence ``rho_ab`` and the slowly varying Rabi amplitude ``omega_s`` of the
field it radiates into the resonator.  A classical drive
``omega_0 * cos(nu*t + phase)`` adds to ``omega_s`` in the atomic equations.

With the canonical signs::

    d rho_aa / dt = 2 Im(conj(W) rho_ab)
    d rho_ab / dt = i (1 - 2 rho_aa) W
    d omega_s / dt = i Omega_a**2 rho_ab,        W = omega_s + drive(t)

``rho_aa + |omega_s|**2 / Omega_a**2`` is conserved when the drive is off, and
so is the purity defect ``rho_aa (1 - rho_aa) - |rho_ab|**2`` for any drive.
The alternative ``mirrored`` convention is the image of the canonical one
under ``rho_ab -> -rho_ab``; it has the same physics.

Simulations run in units of the cooperative frequency: ``tau = Omega_a t``
and every rate is divided by ``Omega_a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import math
from typing import Callable

import numpy as np
from scipy import integrate as sp_integrate

from .numerics import StepControl, integrate

__all__ = [
    "TwoLevelState",
    "DriveSpec",
    "SimConfig",
    "rhs_closed_system",
    "simulate",
    "phase_theta",
    "analytic_state",
    "weak_field_population",
    "OscillatorRegime",
    "oscillator_frequency",
    "conserved_energy",
    "purity_defect",
    "pure_coherence",
    "max_field",
]

CANONICAL = "canonical"
MIRRORED = "mirrored"
SIGN_CONVENTIONS = (CANONICAL, MIRRORED)


@dataclass(frozen=True)
class TwoLevelState:
    rho_aa: float
    rho_ab: complex

    @property
    def purity_defect(self):
        return purity_defect(self.rho_aa, self.rho_ab)


@dataclass(frozen=True)
class DriveSpec:
    """Classical drive ``omega_0 * cos(nu*t + phase)``."""

    omega_0: float
    nu: float
    phase: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("drive frequency nu must be positive")
        if self.omega_0 < 0:
            raise ValueError("drive amplitude omega_0 must be non-negative")

    def __call__(self, t):
        return self.omega_0 * math.cos(self.nu * t + self.phase)

    @property
    def epsilon(self):
        return self.omega_0 / self.nu


def pure_coherence(rho_aa):
    """Coherence ``i*sqrt(rho_aa(1-rho_aa))`` of the pure state with this population."""
    return 1j * math.sqrt(max(rho_aa * (1.0 - rho_aa), 0.0))


@dataclass(frozen=True)
class SimConfig:
    """Run configuration.

    All rates share the unit of ``cooperative_freq``; the default of 1.0
    makes times dimensionless (``tau = Omega_a t``).

    ``initial_rho_ab=None`` seeds the pure-state coherence
    ``i*sqrt(rho_aa(1-rho_aa))``; without a seed in either ``rho_ab`` or
    ``omega_s`` the undriven system sits at a fixed point.

    ``field_feedback=False`` freezes ``omega_s`` at zero in the atomic
    equations, leaving the atoms driven by the classical field alone.
    """

    drive: DriveSpec
    cooperative_freq: float = 1.0
    initial_rho_aa: float = 0.1
    initial_rho_ab: complex | None = None
    initial_omega_s: complex = 0.0
    t_end: float = 5000.0
    sample_every: float | None = 0.5
    step: StepControl = field(default_factory=StepControl)
    sign_convention: str = CANONICAL
    field_feedback: bool = True

    def __post_init__(self):
        if not self.cooperative_freq > 0:
            raise ValueError("cooperative_freq must be positive")
        if not 0.0 <= self.initial_rho_aa <= 1.0:
            raise ValueError("initial_rho_aa must lie in [0, 1]")
        if self.sign_convention not in SIGN_CONVENTIONS:
            raise ValueError(f"sign_convention must be one of {SIGN_CONVENTIONS}")
        if not self.t_end > 0:
            raise ValueError("t_end must be positive")
        rab = self.rho_ab0
        if abs(rab) ** 2 > self.initial_rho_aa * (1 - self.initial_rho_aa) + 1e-12:
            raise ValueError("|rho_ab|^2 exceeds rho_aa(1 - rho_aa): not a density matrix")

    @property
    def rho_ab0(self):
        if self.initial_rho_ab is None:
            return pure_coherence(self.initial_rho_aa)
        return complex(self.initial_rho_ab)

    @property
    def y0(self):
        return np.array([self.initial_rho_aa, self.rho_ab0, self.initial_omega_s], dtype=complex)

    def with_drive(self, **kw):
        return replace(self, drive=replace(self.drive, **kw))


def rhs_closed_system(t, state, omega_s, cfg):
    """Derivatives ``(d rho_aa, d rho_ab, d omega_s)`` at time ``t``.

    ``state`` is a :class:`TwoLevelState`; rates are in the units of
    ``cfg.cooperative_freq``.
    """
    y = np.array([state.rho_aa, state.rho_ab, omega_s], dtype=complex)
    return _make_rhs(cfg)(t, y)


def _make_rhs(cfg):
    oa2 = cfg.cooperative_freq**2
    w0, nu, ph = cfg.drive.omega_0, cfg.drive.nu, cfg.drive.phase
    sgn = 1.0 if cfg.sign_convention == CANONICAL else -1.0
    feedback = cfg.field_feedback
    cos = math.cos

    def rhs(t, y):
        raa = y[0].real
        rab = complex(y[1])
        os = complex(y[2]) if feedback else 0j
        w = os + w0 * cos(nu * t + ph)
        # 2 Im(conj(w) rab)
        draa = 2.0 * sgn * (w.real * rab.imag - w.imag * rab.real)
        drab = sgn * 1j * (1.0 - 2.0 * raa) * w
        dos = sgn * 1j * oa2 * rab if feedback else 0j
        return np.array((draa, drab, dos))

    return rhs


def simulate(cfg):
    """Integrate the closed system from ``cfg``'s initial state to ``cfg.t_end``.

    Returns a :class:`~coopres.numerics.Trajectory` whose state columns are
    ``(rho_aa, rho_ab, omega_s)``; ``rho_aa`` is stored as a complex number
    with zero imaginary part.
    """
    return integrate(
        _make_rhs(cfg),
        cfg.y0,
        (0.0, cfg.t_end),
        cfg.step,
        sample_every=cfg.sample_every,
    )


def phase_theta(t, drive, omega_s_history: Callable[[float], float] | None = None):
    """Accumulated phase ``int_0^t (omega_s + drive) dt'``.

    The drive part is integrated in closed form; ``omega_s_history`` (real
    part) is integrated by adaptive quadrature.
    """
    nu, ph = drive.nu, drive.phase
    theta = drive.omega_0 / nu * (math.sin(nu * t + ph) - math.sin(ph))
    if omega_s_history is not None and t != 0:
        val, _ = sp_integrate.quad(
            lambda s: float(np.real(omega_s_history(s))), 0.0, t, limit=2000, epsabs=1e-12, epsrel=1e-12
        )
        theta += val
    return theta


def analytic_state(theta):
    """Pure state ``(sin^2 theta, (i/2) sin 2theta)`` reached by rotation angle ``theta``."""
    return TwoLevelState(math.sin(theta) ** 2, 0.5j * math.sin(2 * theta))


def weak_field_population(t, epsilon, nu):
    """Small-angle population ``(epsilon^2/2)(1 - cos 2 nu t)`` under drive only."""
    return 0.5 * epsilon**2 * (1.0 - np.cos(2.0 * nu * np.asarray(t)))


@dataclass(frozen=True)
class OscillatorRegime:
    """``kind`` is ``"oscillatory"``, ``"growing"`` or ``"marginal"``."""

    kind: str
    rate: float


def oscillator_frequency(rho_aa_frozen, omega_a):
    """Field dynamics for a frozen population.

    Below half inversion the field oscillates at ``Omega_a sqrt(1 - 2 rho_aa)``;
    above it grows at ``Omega_a sqrt(2 rho_aa - 1)``.
    """
    if not 0.0 <= rho_aa_frozen <= 1.0:
        raise ValueError("rho_aa must lie in [0, 1]")
    k = 1.0 - 2.0 * rho_aa_frozen
    if k > 0:
        return OscillatorRegime("oscillatory", omega_a * math.sqrt(k))
    if k < 0:
        return OscillatorRegime("growing", omega_a * math.sqrt(-k))
    return OscillatorRegime("marginal", 0.0)


def conserved_energy(state, omega_s, omega_a=1.0):
    """``rho_aa + |omega_s|^2 / omega_a^2``; accepts scalars or arrays."""
    rho_aa = state.rho_aa if isinstance(state, TwoLevelState) else state
    return np.real(rho_aa) + np.abs(omega_s) ** 2 / omega_a**2


def purity_defect(rho_aa, rho_ab):
    rho_aa = np.real(rho_aa)
    return rho_aa * (1.0 - rho_aa) - np.abs(rho_ab) ** 2


def max_field(traj, t_max=None):
    """Window maximum of ``|omega_s|`` (the saturation level)."""
    os = np.abs(traj.states[:, 2])
    if t_max is not None:
        os = os[traj.times <= t_max]
    return float(os.max())
