"""Explicit Runge-Kutta integration for small complex ODE systems.

Two steppers are provided: the Dormand-Prince 8(5,3) embedded pair with
adaptive step control, and classical fixed-step RK4 for runs that must be
bit-reproducible independent of tolerance heuristics.  States are 1-D numpy
arrays (complex or real); the right-hand side is ``rhs(t, y) -> dy/dt``.

Output on a uniform grid comes from each stepper's continuous extension
(seventh order for DOP853, cubic Hermite for RK4), so sampling never
influences step selection.  Exact invariants are best checked on accepted
steps (``sample_every=None``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from . import _dop853_tableau as _tab

__all__ = [
    "StepControl",
    "IntegratorStats",
    "Trajectory",
    "IntegrationError",
    "integrate",
    "mat_vec",
]


_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_ERR_EXP = -1 / 8


@dataclass
class StepControl:
    """Step-size settings.

    ``fixed_step`` switches to classical RK4 with that step; the tolerances
    are then ignored.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = math.inf
    first_step: float | None = None
    fixed_step: float | None = None

    def __post_init__(self):
        if self.fixed_step is None:
            if not (self.rtol > 0 and self.atol > 0):
                raise ValueError("tolerances must be positive")
        elif not self.fixed_step > 0:
            raise ValueError("fixed_step must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")


@dataclass
class IntegratorStats:
    steps: int = 0
    rejections: int = 0
    rhs_evals: int = 0

    def as_dict(self):
        return {"steps": self.steps, "rejections": self.rejections, "rhs_evals": self.rhs_evals}


@dataclass
class Trajectory:
    """Sampled solution: ``states[k]`` is the state at ``times[k]``."""

    times: np.ndarray
    states: np.ndarray
    stats: IntegratorStats = field(default_factory=IntegratorStats)
    time_unit: str = "tau"

    def __post_init__(self):
        if len(self.times) != len(self.states) or len(self.times) < 2:
            raise ValueError("trajectory needs >= 2 aligned samples")

    def __len__(self):
        return len(self.times)

    def component(self, k):
        return self.states[:, k]

    @property
    def final(self):
        return self.states[-1]


class IntegrationError(RuntimeError):
    """Integration aborted; carries the last accepted time and state."""

    def __init__(self, message, t, y):
        super().__init__(f"{message} (t = {t!r})")
        self.t = t
        self.y = y


class _Sampler:
    """Collects output on the grid ``t0 + k*every`` (or every accepted step)."""

    def __init__(self, t0, t1, y0, every):
        self.every = every
        self.t0 = t0
        self.t1 = t1
        self.times = [t0]
        self.states = [np.array(y0, copy=True)]
        self.k = 1

    def due(self, tb):
        """Grid times in ``(t_prev, tb]`` not yet recorded, excluding ``t1``."""
        if self.every is None:
            return []
        out = []
        while True:
            ts = self.t0 + self.k * self.every
            if ts > tb or ts >= self.t1:
                return out
            out.append(ts)
            self.k += 1

    def step(self, tb, yb, ts, interp):
        if self.every is None:
            self.times.append(tb)
            self.states.append(yb.copy())
        elif ts:
            self.times.extend(ts)
            self.states.extend(interp(np.asarray(ts)))

    def finish(self, t1, y1, stats, unit):
        if self.every is not None:
            self.times.append(t1)
            self.states.append(y1.copy())
        return Trajectory(np.array(self.times), np.array(self.states), stats, unit)


def _hermite(ta, ya, fa, tb, yb, fb):
    h = tb - ta

    def interp(ts):
        s = ((ts - ta) / h)[:, None]
        s2, s3 = s * s, s * s * s
        return (2 * s3 - 3 * s2 + 1) * ya + (s3 - 2 * s2 + s) * h * fa + (3 * s2 - 2 * s3) * yb + (s3 - s2) * h * fb

    return interp


def _rms(x):
    return math.sqrt(float(np.mean(np.abs(x) ** 2)))


def _initial_step(rhs, t0, y0, f0, rtol, atol, direction_span):
    scale = atol + np.abs(y0) * rtol
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, direction_span)
    f1 = rhs(t0 + h0, y0 + h0 * f0)
    d2 = _rms((f1 - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 8)
    return min(100 * h0, h1, direction_span)


def _check_finite(y, t, y_last):
    if not np.all(np.isfinite(y)):
        raise IntegrationError("non-finite value in right-hand side", t, y_last)


def integrate(rhs, y0, t_span, step_ctrl=None, sample_every=None, time_unit="tau"):
    """Integrate ``dy/dt = rhs(t, y)`` over ``t_span = (t0, t1)``.

    Parameters
    ----------
    rhs : callable
        ``rhs(t, y)`` returning an array shaped like ``y``.
    y0 : array_like
        Initial state; complex input is integrated as complex.
    t_span : tuple of float
        ``(t0, t1)`` with ``t1 > t0``.
    step_ctrl : StepControl, optional
        Tolerances or a fixed RK4 step.
    sample_every : float, optional
        Output spacing.  ``None`` records every accepted step.

    Returns
    -------
    Trajectory

    Raises
    ------
    IntegrationError
        On step-size underflow or a non-finite right-hand side.
    """
    ctrl = step_ctrl or StepControl()
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError("t_span must satisfy t1 > t0")
    y = np.array(y0, dtype=complex if np.iscomplexobj(y0) else float).ravel()
    if sample_every is not None and not sample_every > 0:
        raise ValueError("sample_every must be positive")
    sampler = _Sampler(t0, t1, y, sample_every)
    stats = IntegratorStats()
    if ctrl.fixed_step is not None:
        y = _run_rk4(rhs, y, t0, t1, ctrl, sampler, stats)
    else:
        y = _run_dopri(rhs, y, t0, t1, ctrl, sampler, stats)
    return sampler.finish(t1, y, stats, time_unit)


def _run_rk4(rhs, y, t0, t1, ctrl, sampler, stats):
    h_nom = min(ctrl.fixed_step, ctrl.max_step)
    n = max(1, int(math.ceil((t1 - t0) / h_nom - 1e-12)))
    h = (t1 - t0) / n
    t = t0
    k1 = rhs(t, y)
    stats.rhs_evals += 1
    for i in range(n):
        k2 = rhs(t + h / 2, y + (h / 2) * k1)
        k3 = rhs(t + h / 2, y + (h / 2) * k2)
        k4 = rhs(t + h, y + h * k3)
        y_new = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        _check_finite(y_new, t, y)
        t_new = t0 + (i + 1) * h
        # derivative at the step end doubles as the next step's first stage
        f_new = rhs(t_new, y_new)
        stats.steps += 1
        stats.rhs_evals += 4
        ts = sampler.due(t_new)
        sampler.step(t_new, y_new, ts, _hermite(t, y, k1, t_new, y_new, f_new))
        t, y, k1 = t_new, y_new, f_new
    return y


def _run_dopri(rhs, y, t0, t1, ctrl, sampler, stats):
    rtol, atol = ctrl.rtol, ctrl.atol
    t = t0
    f = np.asarray(rhs(t, y))
    stats.rhs_evals += 1
    _check_finite(f, t, y)
    span = t1 - t0
    if ctrl.first_step:
        h = ctrl.first_step
    else:
        h = _initial_step(rhs, t0, y, f, rtol, atol, min(span, ctrl.max_step))
        stats.rhs_evals += 1
    h = min(h, ctrl.max_step)
    n_stages = _tab.N_STAGES
    A, B, C, E3, E5 = _tab.A, _tab.B, _tab.C, _tab.E3, _tab.E5
    K = np.empty((_tab.N_STAGES_EXTENDED, y.size), dtype=y.dtype)
    tiny = 16 * np.finfo(float).eps

    while t < t1:
        if h < tiny * max(abs(t), 1.0):
            raise IntegrationError("step size underflow", t, y)
        last = t + h >= t1
        if last:
            h = t1 - t
        K[0] = f
        for s in range(1, n_stages):
            K[s] = rhs(t + C[s] * h, y + h * (A[s, :s] @ K[:s]))
        y_new = y + h * (B @ K[:n_stages])
        K[n_stages] = f_new = rhs(t + h, y_new)
        stats.rhs_evals += n_stages
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err5 = np.abs(E5 @ K[: n_stages + 1]) / scale
        err3 = np.abs(E3 @ K[: n_stages + 1]) / scale
        e5 = float(err5 @ err5)
        e3 = float(err3 @ err3)
        if e5 == 0.0 and e3 == 0.0:
            err_norm = 0.0
        else:
            err_norm = h * e5 / math.sqrt((e5 + 0.01 * e3) * y.size)
        if not math.isfinite(err_norm):
            _check_finite(K[: n_stages + 1], t, y)
            raise IntegrationError("non-finite error estimate", t, y)
        if err_norm <= 1.0:
            t_new = t1 if last else t + h
            stats.steps += 1
            ts = sampler.due(t_new)
            if ts:
                stats.rhs_evals += len(_tab.C_EXTRA)
                sampler.step(t_new, y_new, ts, _dense(rhs, K, t, y, f, h, y_new, f_new))
            else:
                sampler.step(t_new, y_new, ts, None)
            t, y, f = t_new, y_new, f_new
            factor = _MAX_FACTOR if err_norm == 0 else min(_MAX_FACTOR, _SAFETY * err_norm**_ERR_EXP)
            h = min(h * factor, ctrl.max_step)
        else:
            stats.rejections += 1
            h *= max(_MIN_FACTOR, _SAFETY * err_norm**_ERR_EXP)
    return y


def _dense(rhs, K, t, y, f, h, y_new, f_new):
    """Seventh-order continuous extension of the accepted DOP853 step."""
    s0 = _tab.N_STAGES + 1
    for s, (a, c) in enumerate(zip(_tab.A_EXTRA, _tab.C_EXTRA), start=s0):
        K[s] = rhs(t + c * h, y + h * (a[:s] @ K[:s]))
    dy = y_new - y
    F = np.empty((_tab.INTERPOLATOR_POWER, y.size), dtype=y.dtype)
    F[0] = dy
    F[1] = h * f - dy
    F[2] = 2 * dy - h * (f_new + f)
    F[3:] = h * (_tab.D @ K)

    def interp(ts):
        x = ((ts - t) / h)[:, None]
        out = np.zeros((len(ts), y.size), dtype=y.dtype)
        for i, fi in enumerate(F[::-1]):
            out += fi
            out *= x if i % 2 == 0 else 1 - x
        return out + y

    return interp


def mat_vec(m, v):
    """Complex matrix-vector product with a shape check."""
    m = np.asarray(m)
    v = np.asarray(v)
    if m.ndim != 2 or v.ndim != 1 or m.shape[1] != v.shape[0]:
        raise ValueError(f"cannot apply {m.shape} matrix to vector of shape {v.shape}")
    return m @ v
