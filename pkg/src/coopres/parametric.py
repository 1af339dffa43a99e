"""Parametric-resonance layer on top of the two-level model.

For a weak drive the population follows ``rho_aa ~ (eps^2/2)(1 - cos 2 nu t)``
and the generated field obeys a driven Mathieu equation::

    d2 omega_s/dt2 = -w0^2 (1 + eps^2 cos 2nu t)(omega_s + Omega_0 cos nu t)

with ``eps = Omega_0/nu`` and ``w0^2 = Omega_a^2 (1 - eps^2)``.  Writing
``omega_s = A1 exp(i nu t) + A2 exp(-i nu t)`` gives first-order envelope
equations for ``(A1, A2)`` with detuning ``delta = (nu^2 - w0^2)/2nu``, gain
``G = eps w0^2 / 2nu`` and characteristic exponents ``+-sqrt(G^2 - delta^2)``.
"""

from __future__ import annotations

import cmath
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
import math

import numpy as np

from .numerics import integrate
from .two_level import DriveSpec, SimConfig, max_field, simulate

__all__ = [
    "ParametricParams",
    "derive_params",
    "growth_exponent",
    "svea_rhs",
    "integrate_svea",
    "resonant_solution",
    "reconstruct_field",
    "simulate_mathieu",
    "GrowthFit",
    "InsufficientDataError",
    "envelope_peaks",
    "fit_growth_rate",
    "SweepPoint",
    "detuning_sweep",
]


@dataclass(frozen=True)
class ParametricParams:
    epsilon: float
    omega_0: float
    delta: float
    gain: float


def derive_params(omega_a, drive):
    """Parametric quantities for cooperative frequency ``omega_a`` and ``drive``."""
    eps = drive.omega_0 / drive.nu
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"epsilon = Omega_0/nu = {eps:g} outside the parametric regime [0, 1)")
    w0sq = omega_a**2 * (1.0 - eps**2)
    nu = drive.nu
    return ParametricParams(
        epsilon=eps,
        omega_0=math.sqrt(w0sq),
        delta=(nu**2 - w0sq) / (2.0 * nu),
        gain=eps * w0sq / (2.0 * nu),
    )


def growth_exponent(params):
    """Characteristic exponents ``(+lam, -lam)``, ``lam = sqrt(G^2 - delta^2)``.

    Real above threshold (``|G| > |delta|``), purely imaginary below it.
    """
    lam = cmath.sqrt(params.gain**2 - params.delta**2)
    return lam, -lam


def _source(params, omega_0_drive, nu):
    return params.omega_0**2 * omega_0_drive / (2.0 * nu)


def svea_rhs(t, amps, params, omega_0_drive, nu):
    """Envelope derivatives ``(dA1, dA2)``::

        dA1 = i delta A1 - i G A2 - i S
        dA2 = -i delta A2 + i G A1 + i S,      S = w0^2 Omega_0 / 2nu
    """
    a1, a2 = amps[0], amps[1]
    d, g = params.delta, params.gain
    s = _source(params, omega_0_drive, nu)
    return np.array([1j * d * a1 - 1j * g * a2 - 1j * s, -1j * d * a2 + 1j * g * a1 + 1j * s])


def integrate_svea(params, omega_0_drive, nu, t_span, a0=(0j, 0j), step=None, sample_every=None):
    return integrate(
        lambda t, a: svea_rhs(t, a, params, omega_0_drive, nu),
        np.asarray(a0, dtype=complex),
        t_span,
        step,
        sample_every=sample_every,
    )


def resonant_solution(t, params, omega_0_drive, nu):
    """Closed-form envelopes at zero detuning, starting from ``A1 = A2 = 0``.

    The drive-free envelope matrix has eigenvector ``(1, i)`` growing as
    ``exp(G t)`` and ``(1, -i)`` decaying as ``exp(-G t)``::

        A = (1-i) S/2G (1, i)(e^{Gt} - 1) - (1+i) S/2G (1, -i)(1 - e^{-Gt})

    Raises
    ------
    ValueError
        If ``|delta|/G`` exceeds 1e-6.
    """
    g = params.gain
    if g <= 0 or abs(params.delta) / g > 1e-6:
        raise ValueError("resonant_solution requires delta = 0 and G > 0")
    s = _source(params, omega_0_drive, nu)
    t = np.asarray(t, dtype=float)
    grow = (1 - 1j) * s / (2 * g) * np.expm1(g * t)
    decay = -(1 + 1j) * s / (2 * g) * -np.expm1(-g * t)
    a1 = grow + decay
    a2 = 1j * grow - 1j * decay
    return np.stack([a1, a2], axis=-1)


def reconstruct_field(times, amps, nu):
    """``A1 exp(i nu t) + A2 exp(-i nu t)`` from sampled envelopes."""
    times = np.asarray(times)
    amps = np.asarray(amps)
    return amps[:, 0] * np.exp(1j * nu * times) + amps[:, 1] * np.exp(-1j * nu * times)


def simulate_mathieu(params, drive, y0=(0.0, 0.0), t_span=(0.0, 100.0), step=None, sample_every=None):
    """Integrate the driven Mathieu equation for the generated field.

    ``y0 = (omega_s, d omega_s/dt)``; the returned trajectory holds both.
    """
    w0sq = params.omega_0**2
    eps2 = params.epsilon**2
    amp, nu, ph = drive.omega_0, drive.nu, drive.phase
    cos = math.cos

    def rhs(t, y):
        return np.array((y[1], -w0sq * (1.0 + eps2 * cos(2 * nu * t)) * (y[0] + amp * cos(nu * t + ph))))

    return integrate(rhs, np.asarray(y0), t_span, step, sample_every=sample_every)


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares slope of ``log(envelope)`` against time."""

    rate: float
    stderr: float
    residual: float
    n_peaks: int


def envelope_peaks(times, signal):
    """Local maxima of ``|signal|`` refined by a three-point parabola."""
    t = np.asarray(times, dtype=float)
    a = np.abs(np.asarray(signal))
    if len(a) < 3:
        return np.empty(0), np.empty(0)
    mid = a[1:-1]
    idx = np.nonzero((mid >= a[:-2]) & (mid >= a[2:]))[0] + 1
    pt, pa = [], []
    for i in idx:
        x0, x1, x2 = t[i - 1], t[i], t[i + 1]
        y0, y1, y2 = a[i - 1], a[i], a[i + 1]
        # parabola through the three samples
        d01, d12, d02 = x0 - x1, x1 - x2, x0 - x2
        c2 = (y0 / (d01 * d02)) - (y1 / (d01 * d12)) + (y2 / (d02 * d12))
        if c2 < 0:
            c1 = (y1 - y0) / (x1 - x0) - c2 * (x0 + x1)
            xv = -c1 / (2 * c2)
            if x0 <= xv <= x2:
                c0 = y1 - c1 * x1 - c2 * x1 * x1
                pt.append(xv)
                pa.append(c0 + c1 * xv + c2 * xv * xv)
                continue
        pt.append(x1)
        pa.append(y1)
    return np.array(pt), np.array(pa)


def fit_growth_rate(traj_or_times, signal=None, window=None, component=0):
    """Exponential growth rate of an oscillating signal's envelope.

    Parameters
    ----------
    traj_or_times : Trajectory or array_like
        A trajectory (``component`` selects the column) or sample times.
    signal : array_like, optional
        Samples, when ``traj_or_times`` is an array of times.
    window : tuple of float, optional
        ``(t_lo, t_hi)`` restricting the fit.

    Raises
    ------
    InsufficientDataError
        Fewer than four envelope peaks inside the window.
    """
    if signal is None:
        times = traj_or_times.times
        signal = traj_or_times.states[:, component]
    else:
        times = np.asarray(traj_or_times, dtype=float)
        signal = np.asarray(signal)
    if window is not None:
        sel = (times >= window[0]) & (times <= window[1])
        times, signal = times[sel], signal[sel]
    pt, pa = envelope_peaks(times, signal)
    keep = pa > 0
    pt, pa = pt[keep], pa[keep]
    if len(pt) < 4:
        raise InsufficientDataError(f"need at least 4 envelope peaks, found {len(pt)}")
    logs = np.log(pa)
    coef, cov = np.polyfit(pt, logs, 1, cov=True)
    resid = logs - np.polyval(coef, pt)
    return GrowthFit(
        rate=float(coef[0]),
        stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
        residual=float(math.sqrt(np.mean(resid**2))),
        n_peaks=len(pt),
    )


@dataclass(frozen=True)
class SweepPoint:
    detuning: float
    nu: float
    max_field: float
    growth_rate: float
    status: str = "ok"


def _sweep_point(args):
    cfg, t_window = args
    nu = cfg.drive.nu
    detuning = (cfg.cooperative_freq - nu) / cfg.cooperative_freq
    try:
        traj = simulate(cfg)
        peak = max_field(traj, t_window) / cfg.cooperative_freq
        field = traj.states[:, 2]
        t_peak = traj.times[int(np.argmax(np.abs(field)))]
        try:
            rate = fit_growth_rate(traj.times, field, window=(0.0, t_peak)).rate
        except InsufficientDataError:
            rate = float("nan")
        return SweepPoint(detuning, nu, peak, rate)
    except Exception as exc:  # recorded per point; the sweep continues
        return SweepPoint(detuning, nu, float("nan"), float("nan"), f"error: {exc}")


def detuning_sweep(omega_a, drive_amp, nu_grid, run_cfg=None, workers=1, t_window=None):
    """Saturation level ``max|omega_s|/Omega_a`` across drive frequencies.

    Every grid point is an independent :func:`~coopres.two_level.simulate`
    run from the initial state in ``run_cfg``; results are sorted by
    ``(Omega_a - nu)/Omega_a`` and do not depend on ``workers``.
    """
    nu_grid = [float(n) for n in nu_grid]
    if not nu_grid:
        raise ValueError("nu_grid is empty")
    if any(n <= 0 for n in nu_grid):
        raise ValueError("drive frequencies must be positive")
    base = run_cfg or SimConfig(drive=DriveSpec(drive_amp, nu_grid[0]))
    base = replace(base, cooperative_freq=omega_a)
    phase = base.drive.phase
    t_window = base.t_end if t_window is None else t_window
    jobs = [(replace(base, drive=DriveSpec(drive_amp, nu, phase)), t_window) for nu in nu_grid]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(_sweep_point, jobs))
    else:
        points = [_sweep_point(j) for j in jobs]
    return sorted(points, key=lambda p: (p.detuning, p.nu))
