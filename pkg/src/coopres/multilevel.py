"""Spin-1/2, hydrogen and 87Rb ground-state models driven by an RF field.

Hyperfine states ``|F M>`` of an electron spin ``S = 1/2`` coupled to a
nuclear spin ``I`` are built from Clebsch-Gordan coefficients (Condon-Shortley
phases, electron listed first), with per-state sign overrides where the
tabulated hydrogen states use the opposite overall phase.  Only the electron
moment couples to the field: ``<S,+1/2| mu_+ |S,-1/2> = mu_S`` with
``mu_S = g_S mu_B`` and ``g_S = 2``.  Matrices of ``mu_+`` are kept exact
(sympy surds) in units of ``mu_S``.

Amplitudes evolve as ``i da/dt = Omega_0 L(t) a`` with
``Omega_0 = mu_B B_s / hbar`` and::

    L[j, k] = <j|mu_+|k> exp(-i(nu + w_kj) t) + <j|mu_-|k> exp(i(nu - w_kj) t)

where ``w_kj = (F_k - F_j) omega_c``: the splitting between hyperfine
manifolds enters the rotating phases only through ``omega_c``.

Basis order follows the tabulated vectors:
H = (1,-1), (1,0), (1,1), (0,0);
Rb = (1,-1), (1,0), (1,1), (2,-2), (2,-1), (2,0), (2,1), (2,2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
import json

import numpy as np
import sympy as sp
from scipy import constants as const
from sympy.physics.quantum.cg import CG

from .numerics import StepControl, integrate

__all__ = [
    "Level",
    "AtomModel",
    "Polarization",
    "zeeman_frequency",
    "rabi_frequency",
    "spin_half_coupling",
    "clebsch_compose",
    "build_mu_plus",
    "build_l_matrix",
    "reference_l_matrix",
    "l_matrix_terms",
    "simulate_atom",
    "simulate_spin_half",
    "RwaReport",
    "rwa_validation",
    "dump_model",
]

MU_B = const.physical_constants["Bohr magneton"][0]
HBAR = const.hbar

HALF = sp.Rational(1, 2)


@dataclass(frozen=True)
class Level:
    f: Fraction
    m: Fraction
    energy_offset: float = 0.0

    def __post_init__(self):
        if self.f < 0 or abs(self.m) > self.f or (self.f - self.m).denominator != 1:
            raise ValueError(f"invalid quantum numbers F={self.f}, M={self.m}")

    @property
    def label(self):
        return f"{_qn(self.f)},{_qn(self.m)}"


def _qn(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class AtomModel:
    """Level list plus the exact ``mu_+`` matrix (units of ``mu_S``).

    ``mu_plus[j, k] = <level_j| mu_+ |level_k>``.  ``basis_decomposition`` maps
    each level label to its expansion over ``(m_s, m_i)`` product states.
    """

    name: str
    levels: tuple
    mu_plus: sp.ImmutableMatrix
    basis_decomposition: dict = field(repr=False)
    nuclear_spin: sp.Rational = HALF
    omega_c: float = 0.0

    @property
    def mu_minus(self):
        return self.mu_plus.H

    @property
    def mu_plus_numeric(self):
        return np.array(self.mu_plus.evalf(17).tolist(), dtype=complex)

    @property
    def dim(self):
        return len(self.levels)

    def index(self, f, m):
        for k, lev in enumerate(self.levels):
            if lev.f == Fraction(f) and lev.m == Fraction(m):
                return k
        raise KeyError(f"no level F={f}, M={m} in {self.name}")

    def element(self, bra, ket):
        """Exact ``<F M| mu_+ |F' M'>`` for ``bra=(F, M)``, ``ket=(F', M')``."""
        return self.mu_plus[self.index(*bra), self.index(*ket)]


class Polarization(Enum):
    LEFT_CIRCULAR = "left_circular"
    RIGHT_CIRCULAR = "right_circular"
    LINEAR_X = "linear_x"


def zeeman_frequency(b_z, g=2.0):
    """Splitting ``g mu_B B_z / hbar`` (rad/s) of a spin-1/2 in field ``b_z`` (tesla)."""
    return g * MU_B * b_z / HBAR


def rabi_frequency(b_s):
    """``Omega_0 = mu_B B_s / hbar`` (rad/s) for transverse amplitude ``b_s`` (tesla)."""
    return MU_B * b_s / HBAR


def _spin_half_matrix(pol, t, nu, omega_c, rabi):
    pol = Polarization(pol)
    if pol is Polarization.LEFT_CIRCULAR:
        up = np.exp(-1j * (nu - omega_c) * t)
    elif pol is Polarization.RIGHT_CIRCULAR:
        up = np.exp(-1j * (nu + omega_c) * t)
    else:
        up = np.exp(-1j * (nu - omega_c) * t) + np.exp(1j * (nu + omega_c) * t)
    return np.array([[0.0, -rabi * up], [-rabi * np.conj(up), 0.0]], dtype=complex)


def spin_half_coupling(pol, t, nu, omega_c, b_s):
    """Interaction-picture coupling (rad/s) in the basis ``(|+>, |->)``.

    ``<+|V|-> = -mu_B B_s exp(-i(nu - omega_c) t)`` for left-circular
    polarization, ``nu + omega_c`` for right-circular; linear polarization
    along x carries both exponentials.
    """
    return _spin_half_matrix(pol, t, nu, omega_c, rabi_frequency(b_s))


def clebsch_compose(s, i, phases=None):
    """Expand ``|F M>`` over ``|s m_s>|i m_i>`` for every ``F`` in ``|i-s| .. i+s``.

    Returns ``{(F, M): {(m_s, m_i): coefficient}}`` with exact sympy
    coefficients; zero coefficients are omitted.  ``phases`` maps ``(F, M)``
    to a sign applied to that state.
    """
    s = sp.nsimplify(s)
    i = sp.nsimplify(i)
    for x in (s, i):
        if x < 0 or (2 * x).q != 1:
            raise ValueError(f"{x} is not a non-negative integer or half-integer")
    phases = phases or {}
    out = {}
    f = abs(i - s)
    while f <= i + s:
        for m in _mrange(f):
            coeffs = {}
            for ms in _mrange(s):
                mi = m - ms
                if abs(mi) > i:
                    continue
                c = sp.nsimplify(CG(s, ms, i, mi, f, m).doit())
                if c != 0:
                    coeffs[(ms, mi)] = c
            sign = phases.get((f, m), 1)
            out[(f, m)] = {k: sign * v for k, v in coeffs.items()}
        f += 1
    return out


def _mrange(j):
    j = sp.nsimplify(j)
    return [-j + k for k in range(int(2 * j) + 1)]


_BASIS = {
    "H": (sp.Rational(1, 2), [(1, -1), (1, 0), (1, 1), (0, 0)], {(0, 0): -1}),
    "Rb": (sp.Rational(3, 2), [(1, -1), (1, 0), (1, 1), (2, -2), (2, -1), (2, 0), (2, 1), (2, 2)], {}),
}


def build_mu_plus(kind, omega_c=0.0):
    """Model for ``"H"`` or ``"Rb"`` with the exact electron ``mu_+`` matrix.

    ``omega_c`` (rad/s) sets the manifold spacing stored on the model and
    in each level's ``energy_offset``.
    """
    try:
        i, order, phases = _BASIS[kind]
    except KeyError:
        raise ValueError(f"unknown atom model {kind!r}; expected 'H' or 'Rb'") from None
    decomp = clebsch_compose(HALF, i, phases)
    f_min = min(f for f, _ in order)
    levels = tuple(Level(Fraction(f), Fraction(m)) for f, m in order)
    states = [decomp[(sp.Integer(f), sp.Integer(m))] for f, m in order]
    n = len(order)
    mu = sp.zeros(n, n)
    for k, ket in enumerate(states):
        # mu_+ |-1/2, m_i> = mu_S |+1/2, m_i>
        raised = {(HALF, mi): c for (ms, mi), c in ket.items() if ms == -HALF}
        for j, bra in enumerate(states):
            val = sum((sp.conjugate(bra.get(key, 0)) * c for key, c in raised.items()), sp.Integer(0))
            mu[j, k] = sp.nsimplify(sp.radsimp(val))
    decomposition = {lev.label: states[k] for k, lev in enumerate(levels)}
    return AtomModel(
        name=kind,
        levels=tuple(Level(lev.f, lev.m, float(lev.f - f_min) * omega_c) for lev in levels),
        mu_plus=sp.ImmutableMatrix(mu),
        basis_decomposition=decomposition,
        nuclear_spin=i,
        omega_c=float(omega_c),
    )


def l_matrix_terms(model, nu, omega_c):
    """Decompose ``L(t)`` as ``sum_k M_k exp(i w_k t)``; returns ``[(w_k, M_k)]``."""
    mp = model.mu_plus_numeric
    mm = mp.conj().T
    fvals = np.array([float(lev.f) for lev in model.levels])
    terms = {}
    n = model.dim
    for j in range(n):
        for k in range(n):
            w_kj = (fvals[k] - fvals[j]) * omega_c
            if mp[j, k] != 0:
                w = -(nu + w_kj)
                terms.setdefault(w, np.zeros((n, n), complex))[j, k] += mp[j, k]
            if mm[j, k] != 0:
                w = nu - w_kj
                terms.setdefault(w, np.zeros((n, n), complex))[j, k] += mm[j, k]
    return sorted(terms.items(), key=lambda kv: kv[0])


def build_l_matrix(model, t, nu, omega_c=None):
    """Coupling matrix ``L(t)`` generated from the model's ``mu_+`` table."""
    omega_c = model.omega_c if omega_c is None else omega_c
    out = np.zeros((model.dim, model.dim), complex)
    for w, m in l_matrix_terms(model, nu, omega_c):
        out += m * np.exp(1j * w * t)
    return out


# Tabulated coupling matrices: (row, col, coefficient, phase key); phase keys
# give the exponent: "+nu" -> exp(i nu t), "-(nu+wc)" -> exp(-i(nu+wc) t), ...
_S2, _S3, _S6 = sp.sqrt(2), sp.sqrt(3), sp.sqrt(6)
_REFERENCE = {
    "Rb": [
        (0, 1, -_S2 / 4, "+nu"), (0, 3, _S3 / 2, "-(nu+wc)"), (0, 5, -_S2 / 4, "+(nu-wc)"),
        (1, 0, -_S2 / 4, "-nu"), (1, 2, -_S2 / 4, "+nu"), (1, 4, _S6 / 4, "-(nu+wc)"), (1, 6, -_S6 / 4, "+(nu-wc)"),
        (2, 1, -_S2 / 4, "-nu"), (2, 5, _S2 / 4, "-(nu+wc)"), (2, 7, -_S3 / 2, "+(nu-wc)"),
        (3, 0, _S3 / 2, "+(nu+wc)"), (3, 4, HALF, "+nu"),
        (4, 1, _S6 / 4, "+(nu+wc)"), (4, 3, HALF, "-nu"), (4, 5, _S6 / 4, "+nu"),
        (5, 0, -_S2 / 4, "-(nu-wc)"), (5, 2, _S2 / 4, "+(nu+wc)"), (5, 4, _S6 / 4, "-nu"), (5, 6, _S6 / 4, "+nu"),
        (6, 1, -_S6 / 4, "-(nu-wc)"), (6, 5, _S6 / 4, "-nu"), (6, 7, HALF, "+nu"),
        (7, 2, -_S3 / 2, "-(nu-wc)"), (7, 6, HALF, "-nu"),
    ],
    # unit coefficients as tabulated; the two (nu - wc) phases carry t
    "H": [
        (0, 1, 1, "+nu"), (0, 3, 1, "-(nu+wc)"),
        (1, 0, 1, "-nu"), (1, 2, 1, "+nu"),
        (2, 1, 1, "-nu"), (2, 3, 1, "+(nu-wc)"),
        (3, 0, 1, "+(nu+wc)"), (3, 2, 1, "-(nu-wc)"),
    ],
}


def _phase_rate(key, nu, wc):
    return {
        "+nu": nu, "-nu": -nu,
        "+(nu+wc)": nu + wc, "-(nu+wc)": -(nu + wc),
        "+(nu-wc)": nu - wc, "-(nu-wc)": -(nu - wc),
    }[key]


def reference_l_matrix(kind, t, nu, omega_c):
    """Coupling matrix transcribed entry by entry from the tabulated layout."""
    entries = _REFERENCE[kind]
    n = 8 if kind == "Rb" else 4
    out = np.zeros((n, n), complex)
    for r, c, coeff, key in entries:
        out[r, c] = complex(sp.N(coeff, 17)) * np.exp(1j * _phase_rate(key, nu, omega_c) * t)
    return out


def simulate_atom(model, omega_0, nu, omega_c, y0, t_span, step=None, sample_every=None):
    """Integrate ``i da/dt = omega_0 L(t) a`` for the model's amplitudes.

    ``omega_0`` is ``mu_B B_s / hbar`` (see :func:`rabi_frequency`); times
    share its inverse unit.
    """
    y0 = np.asarray(y0, dtype=complex)
    if y0.shape != (model.dim,):
        raise ValueError(f"y0 must have {model.dim} amplitudes")
    norm = np.linalg.norm(y0)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"initial state must be normalised, |y0| = {norm}")
    terms = l_matrix_terms(model, nu, omega_c)
    rates = 1j * np.array([w for w, _ in terms])
    mats = -1j * omega_0 * np.array([m for _, m in terms])
    exp = np.exp

    def rhs(t, a):
        return exp(rates * t) @ (mats @ a)

    return integrate(rhs, y0, t_span, step or StepControl(rtol=1e-12, atol=1e-14), sample_every=sample_every)


def simulate_spin_half(pol, rabi, nu, omega_c, y0, t_span, step=None, sample_every=None):
    """Spin-1/2 amplitudes ``(a_+, a_-)`` under ``i da/dt = V(t) a``.

    ``rabi`` is the coupling ``mu_B B_s / hbar`` in the unit of ``nu``.
    """
    pol = Polarization(pol)

    def rhs(t, a):
        return -1j * (_spin_half_matrix(pol, t, nu, omega_c, rabi) @ a)

    return integrate(rhs, np.asarray(y0, complex), t_span, step or StepControl(rtol=1e-12, atol=1e-14),
                     sample_every=sample_every)


@dataclass(frozen=True)
class RwaReport:
    max_deviation: float
    times: np.ndarray = field(repr=False)
    p_upper_rwa: np.ndarray = field(repr=False)
    p_upper_full: np.ndarray = field(repr=False)


def rwa_validation(b_s, nu, omega_c, t_span, y0=(0.0, 1.0), step=None):
    """Compare rotating-wave and full linear-polarization spin-1/2 dynamics.

    The linear field ``B_s x cos(nu t)`` splits into two counter-rotating
    circular components of amplitude ``B_s/2``.  The rotating-wave run keeps
    the co-rotating one only.  Both runs are integrated as one system so the
    upper-state populations are compared on identical steps.

    Time is in seconds; ``nu`` and ``omega_c`` in rad/s.
    """
    if not omega_c > 0:
        raise ValueError("omega_c must be positive")
    rabi = rabi_frequency(b_s) / 2.0
    # integrate in units of the coupling to keep the step control well scaled
    scale = rabi if rabi > 0 else 1.0
    nu_s, wc_s = nu / scale, omega_c / scale
    r = rabi / scale
    t0, t1 = t_span[0] * scale, t_span[1] * scale
    lcp, lin = Polarization.LEFT_CIRCULAR, Polarization.LINEAR_X

    def rhs(t, y):
        a = -1j * (_spin_half_matrix(lcp, t, nu_s, wc_s, r) @ y[:2])
        b = -1j * (_spin_half_matrix(lin, t, nu_s, wc_s, r) @ y[2:])
        return np.concatenate((a, b))

    y0 = np.asarray(y0, complex)
    traj = integrate(rhs, np.concatenate((y0, y0)), (t0, t1), step or StepControl(rtol=1e-11, atol=1e-13))
    p_rwa = np.abs(traj.states[:, 0]) ** 2
    p_full = np.abs(traj.states[:, 2]) ** 2
    return RwaReport(
        max_deviation=float(np.max(np.abs(p_rwa - p_full))),
        times=traj.times / scale,
        p_upper_rwa=p_rwa,
        p_upper_full=p_full,
    )


def dump_model(model):
    """JSON-ready dict: levels and nonzero ``mu_+`` elements as surd strings."""
    table = {}
    for j, bra in enumerate(model.levels):
        for k, ket in enumerate(model.levels):
            v = model.mu_plus[j, k]
            if v != 0:
                table[f"<{bra.label}|mu+|{ket.label}>"] = str(v)
    return {
        "model": model.name,
        "units": "mu_S",
        "levels": [{"F": _qn(l.f), "M": _qn(l.m)} for l in model.levels],
        "mu_plus": table,
        "basis": {
            label: {f"m_s={_qn(ms)},m_i={_qn(mi)}": str(c) for (ms, mi), c in comps.items()}
            for label, comps in model.basis_decomposition.items()
        },
    }


def dumps_model(model):
    return json.dumps(dump_model(model), indent=2)
