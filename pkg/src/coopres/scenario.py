"""Scenario files: TOML with explicit units on every physical quantity.

A scenario names a mode and a ``[physics]`` table; quantities are strings
such as ``"0.01 Omega_a"``, ``"500 G"`` or ``"5000 tau"``.  Units are parsed
once, here, and everything downstream sees plain floats in the module's
working units.

Two reference units are relative to the run itself: ``Omega_a`` and its
inverse ``tau`` (two-level modes), and ``omega_c`` (atom modes).  Physical
units (``rad/s``, ``MHz``, ``T``, ``us`` ...) are converted to SI.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import hashlib
import math
import re

from scipy import constants as const
import tomli
import tomli_w

from .multilevel import Polarization, zeeman_frequency
from .numerics import StepControl
from .two_level import CANONICAL, SIGN_CONVENTIONS, DriveSpec, SimConfig

__all__ = [
    "ScenarioError",
    "ScenarioParseError",
    "ScenarioValidationError",
    "Quantity",
    "parse_quantity",
    "Scenario",
    "load_scenario",
    "loads_scenario",
    "dumps_scenario",
    "to_document",
    "MODES",
]

MODES = ("two_level", "mathieu", "svea", "atom_h", "atom_rb", "spin_half")
OUTPUTS = ("csv", "json", "both")


class ScenarioError(Exception):
    pass


class ScenarioParseError(ScenarioError):
    """Malformed text; carries ``line`` and ``column`` when known."""

    def __init__(self, message, line=None, column=None):
        super().__init__(message)
        self.line = line
        self.column = column


class ScenarioValidationError(ScenarioError):
    """Well-formed file whose content is invalid; ``field`` names the culprit."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


_TWO_PI = 2 * math.pi

# unit -> (kind, factor to SI); reference units have factor None
UNITS = {
    "rad/s": ("frequency", 1.0),
    "1/s": ("frequency", 1.0),
    "s^-1": ("frequency", 1.0),
    "Hz": ("frequency", _TWO_PI),
    "kHz": ("frequency", _TWO_PI * 1e3),
    "MHz": ("frequency", _TWO_PI * 1e6),
    "GHz": ("frequency", _TWO_PI * 1e9),
    "Omega_a": ("frequency", None),
    "omega_c": ("frequency", None),
    "s": ("time", 1.0),
    "ms": ("time", 1e-3),
    "us": ("time", 1e-6),
    "ns": ("time", 1e-9),
    "tau": ("time", None),
    "T": ("field", 1.0),
    "mT": ("field", 1e-3),
    "uT": ("field", 1e-6),
    "G": ("field", 1e-4),
    "mG": ("field", 1e-7),
    "rad": ("angle", 1.0),
    "deg": ("angle", math.pi / 180),
    "m^-3": ("density", 1.0),
    "cm^-3": ("density", 1e6),
    "m": ("length", 1.0),
    "cm": ("length", 1e-2),
    "mm": ("length", 1e-3),
    "J": ("energy", 1.0),
    "erg": ("energy", 1e-7),
    "eV": ("energy", const.electron_volt),
    "K": ("temperature", 1.0),
    "mK": ("temperature", 1e-3),
    "J/T": ("moment", 1.0),
    "erg/G": ("moment", 1e-3),
    "mu_B": ("moment", const.physical_constants["Bohr magneton"][0]),
    "mu_N": ("moment", const.physical_constants["nuclear magneton"][0]),
    "mu_p": ("moment", const.physical_constants["proton mag. mom."][0]),
    "C*m": ("dipole", 1.0),
    "D": ("dipole", 1e-21 / const.c),
    "statC*cm": ("dipole", 1e-11 / const.c),
}

_QTY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z_/^*\-0-9]+)?\s*$")


@dataclass(frozen=True)
class Quantity:
    value: float
    unit: str

    @property
    def kind(self):
        return UNITS[self.unit][0]

    def __str__(self):
        return f"{self.value!r} {self.unit}"


def parse_quantity(text, kind, name="quantity"):
    """Parse ``"<number> <unit>"`` and check the unit has the expected ``kind``."""
    if isinstance(text, bool) or not isinstance(text, str):
        raise ScenarioValidationError(name, f"expected a string like '1.0 <unit>', got {text!r}")
    m = _QTY.match(text)
    if not m:
        raise ScenarioValidationError(name, f"cannot parse quantity {text!r}")
    value, unit = float(m.group(1)), m.group(2)
    if unit is None:
        raise ScenarioValidationError(name, f"missing unit in {text!r}")
    if unit not in UNITS:
        raise ScenarioValidationError(name, f"unknown unit {unit!r}")
    if UNITS[unit][0] != kind:
        raise ScenarioValidationError(name, f"unit {unit!r} is a {UNITS[unit][0]}, expected a {kind}")
    if not math.isfinite(value):
        raise ScenarioValidationError(name, "value must be finite")
    return Quantity(value, unit)


class _Reader:
    """Typed access to one table, tracking unused keys."""

    def __init__(self, table, prefix):
        if not isinstance(table, dict):
            raise ScenarioValidationError(prefix, "expected a table")
        self.table = table
        self.prefix = prefix
        self.used = set()

    def _name(self, key):
        return f"{self.prefix}.{key}"

    def raw(self, key, default=...):
        self.used.add(key)
        if key not in self.table:
            if default is ...:
                raise ScenarioValidationError(self._name(key), "required field missing")
            return default
        return self.table[key]

    def has(self, key):
        return key in self.table

    def qty(self, key, kind, default=...):
        v = self.raw(key, default)
        if v is None or isinstance(v, Quantity):
            return v
        return parse_quantity(v, kind, self._name(key))

    def number(self, key, default=..., lo=-math.inf, hi=math.inf):
        v = self.raw(key, default)
        if key not in self.table:
            return default
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ScenarioValidationError(self._name(key), f"expected a number, got {v!r}")
        if not (lo <= v <= hi) or not math.isfinite(v):
            raise ScenarioValidationError(self._name(key), f"value {v!r} outside [{lo}, {hi}]")
        return float(v)

    def complex_(self, key, default=...):
        v = self.raw(key, default)
        if v is None or isinstance(v, complex):
            return v
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return complex(v)
        if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
            return complex(v[0], v[1])
        raise ScenarioValidationError(self._name(key), f"expected a number or [re, im], got {v!r}")

    def choice(self, key, options, default=...):
        v = self.raw(key, default)
        if v not in options:
            raise ScenarioValidationError(self._name(key), f"must be one of {list(options)}, got {v!r}")
        return v

    def finish(self):
        extra = sorted(set(self.table) - self.used)
        if extra:
            raise ScenarioValidationError(self._name(extra[0]), "unknown field")


def _freq(q, omega_a, name):
    """Frequency in units of Omega_a."""
    if q.unit == "Omega_a":
        return q.value
    if q.unit == "omega_c":
        raise ScenarioValidationError(name, "omega_c is not defined in this mode")
    if omega_a is None:
        raise ScenarioValidationError(name, "physical frequency units need a physical omega_a")
    return q.value * UNITS[q.unit][1] / omega_a


def _time(q, omega_a, name):
    """Time in units of 1/Omega_a."""
    if q.unit == "tau":
        return q.value
    if omega_a is None:
        raise ScenarioValidationError(name, "physical time units need a physical omega_a")
    return q.value * UNITS[q.unit][1] * omega_a


def _step(reader):
    if reader is None:
        return StepControl()
    try:
        ctrl = StepControl(
            rtol=reader.number("rtol", 1e-10, lo=0),
            atol=reader.number("atol", 1e-12, lo=0),
            max_step=reader.number("max_step", math.inf, lo=0),
            fixed_step=reader.number("fixed_step", None, lo=0),
        )
    except ValueError as exc:
        raise ScenarioValidationError(reader.prefix, str(exc)) from None
    reader.finish()
    return ctrl


@dataclass(frozen=True)
class TwoLevelRun:
    """Validated two-level / envelope run in units of ``Omega_a``."""

    config: SimConfig
    omega_a_si: float | None  # rad/s when given physically


@dataclass(frozen=True)
class AtomRun:
    model: str  # "H" | "Rb" | "spin_half"
    b_s: float  # tesla
    omega_c: float  # rad/s
    nu: float  # rad/s
    t_end: float  # s
    samples: int
    initial: tuple  # amplitudes
    polarization: str = Polarization.LEFT_CIRCULAR.value
    step: StepControl = field(default_factory=lambda: StepControl(rtol=1e-12, atol=1e-14))


@dataclass(frozen=True)
class SweepGrid:
    nu: tuple  # Omega_a units


@dataclass(frozen=True)
class Scenario:
    name: str
    mode: str
    output: str
    description: str
    run: object
    grid: SweepGrid | None
    document: dict = field(repr=False, compare=False)
    digest: str = field(default="", compare=False)


def _two_level(phys, integ):
    oa_q = phys.qty("omega_a", "frequency", "1 Omega_a")
    if oa_q.unit == "Omega_a":
        if oa_q.value != 1:
            raise ScenarioValidationError("physics.omega_a", "in Omega_a units it must be 1")
        omega_a = None
    elif oa_q.unit == "omega_c":
        raise ScenarioValidationError("physics.omega_a", "omega_c is not defined in this mode")
    else:
        omega_a = oa_q.value * UNITS[oa_q.unit][1]
        if not omega_a > 0:
            raise ScenarioValidationError("physics.omega_a", "must be positive")
    w0 = _freq(phys.qty("omega_0", "frequency"), omega_a, "physics.omega_0")
    nu = _freq(phys.qty("nu", "frequency"), omega_a, "physics.nu")
    phase = phys.qty("phase", "angle", "0 rad")
    t_end = _time(phys.qty("t_end", "time", "5000 tau"), omega_a, "physics.t_end")
    every_q = phys.qty("sample_every", "time", "0.5 tau")
    every = _time(every_q, omega_a, "physics.sample_every")
    rho_aa = phys.number("rho_aa", 0.1, lo=0.0, hi=1.0)
    rab = phys.raw("rho_ab", "pure")
    rho_ab = None if rab == "pure" else phys.complex_("rho_ab")
    omega_s0 = phys.complex_("omega_s", 0j)
    sign = phys.choice("sign_convention", SIGN_CONVENTIONS, CANONICAL)
    feedback = phys.raw("field_feedback", True)
    if not isinstance(feedback, bool):
        raise ScenarioValidationError("physics.field_feedback", "expected true or false")
    phys.finish()
    try:
        cfg = SimConfig(
            drive=DriveSpec(w0, nu, phase.value * UNITS[phase.unit][1]),
            cooperative_freq=1.0,
            initial_rho_aa=rho_aa,
            initial_rho_ab=rho_ab,
            initial_omega_s=omega_s0,
            t_end=t_end,
            sample_every=every,
            step=_step(integ),
            sign_convention=sign,
            field_feedback=feedback,
        )
    except ValueError as exc:
        raise ScenarioValidationError("physics", str(exc)) from None
    return TwoLevelRun(cfg, omega_a)


_LEVEL = re.compile(r"^\s*(-?\d+)\s*,\s*(-?\d+)\s*$")


def _atom(phys, integ, mode):
    model = {"atom_h": "H", "atom_rb": "Rb", "spin_half": "spin_half"}[mode]
    b_s = phys.qty("b_s", "field")
    b_s_si = b_s.value * UNITS[b_s.unit][1]
    if b_s_si < 0:
        raise ScenarioValidationError("physics.b_s", "must be non-negative")
    if phys.has("omega_c") and phys.has("b_z"):
        raise ScenarioValidationError("physics.omega_c", "give either omega_c or b_z, not both")
    if phys.has("omega_c"):
        q = phys.qty("omega_c", "frequency")
        if q.unit in ("Omega_a", "omega_c"):
            raise ScenarioValidationError("physics.omega_c", "needs a physical unit")
        omega_c = q.value * UNITS[q.unit][1]
    else:
        b_z = phys.qty("b_z", "field")
        g = phys.number("g_factor", 2.0, lo=0.0)
        omega_c = zeeman_frequency(b_z.value * UNITS[b_z.unit][1], g)
    if not omega_c > 0:
        raise ScenarioValidationError("physics.omega_c", "splitting must be positive")
    nu_q = phys.qty("nu", "frequency", "1 omega_c")
    if nu_q.unit == "Omega_a":
        raise ScenarioValidationError("physics.nu", "Omega_a is not defined in this mode")
    nu = nu_q.value * omega_c if nu_q.unit == "omega_c" else nu_q.value * UNITS[nu_q.unit][1]
    t_q = phys.qty("t_end", "time")
    if t_q.unit == "tau":
        raise ScenarioValidationError("physics.t_end", "tau is not defined in this mode")
    t_end = t_q.value * UNITS[t_q.unit][1]
    if not t_end > 0:
        raise ScenarioValidationError("physics.t_end", "must be positive")
    samples = phys.number("samples", 1000, lo=1)
    if samples != int(samples):
        raise ScenarioValidationError("physics.samples", "must be an integer")
    pol = Polarization.LEFT_CIRCULAR.value
    if model == "spin_half":
        pol = phys.choice("polarization", [p.value for p in Polarization], pol)
    init = phys.raw("initial")
    initial = _initial_state(init, model)
    phys.finish()
    step = _step(integ) if integ is not None else StepControl(rtol=1e-12, atol=1e-14)
    return AtomRun(model, b_s_si, omega_c, nu, t_end, int(samples), initial, pol, step)


def _initial_state(init, model):
    from .multilevel import build_mu_plus

    if model == "spin_half":
        labels = {"up": 0, "down": 1, "+": 0, "-": 1}
        n = 2
        if isinstance(init, str):
            if init not in labels:
                raise ScenarioValidationError("physics.initial", "expected 'up' or 'down'")
            amps = [0j] * n
            amps[labels[init]] = 1 + 0j
            return tuple(amps)
    else:
        atom = build_mu_plus(model)
        n = atom.dim
        if isinstance(init, str):
            m = _LEVEL.match(init)
            if not m:
                raise ScenarioValidationError("physics.initial", f"expected 'F,M', got {init!r}")
            try:
                k = atom.index(int(m.group(1)), int(m.group(2)))
            except KeyError as exc:
                raise ScenarioValidationError("physics.initial", str(exc)) from None
            amps = [0j] * n
            amps[k] = 1 + 0j
            return tuple(amps)
    if isinstance(init, list) and len(init) == n:
        amps = []
        for x in init:
            if isinstance(x, list) and len(x) == 2:
                amps.append(complex(x[0], x[1]))
            elif isinstance(x, (int, float)) and not isinstance(x, bool):
                amps.append(complex(x))
            else:
                raise ScenarioValidationError("physics.initial", f"bad amplitude {x!r}")
        norm = math.sqrt(sum(abs(a) ** 2 for a in amps))
        if abs(norm - 1) > 1e-9:
            raise ScenarioValidationError("physics.initial", f"amplitudes must be normalised (norm {norm:g})")
        return tuple(amps)
    raise ScenarioValidationError("physics.initial", f"expected a level label or {n} amplitudes")


def _grid(reader, run):
    if not isinstance(run, TwoLevelRun):
        raise ScenarioValidationError("grid", "sweeps need a two-level mode")
    omega_a = run.omega_a_si
    if reader.has("nu"):
        vals = reader.raw("nu")
        if not isinstance(vals, list) or not vals:
            raise ScenarioValidationError("grid.nu", "expected a non-empty list of quantities")
        nus = [_freq(parse_quantity(v, "frequency", "grid.nu"), omega_a, "grid.nu") for v in vals]
    else:
        lo = reader.number("detuning_min")
        hi = reader.number("detuning_max")
        n = reader.number("points", lo=1)
        if n != int(n):
            raise ScenarioValidationError("grid.points", "must be an integer")
        n = int(n)
        if hi < lo:
            raise ScenarioValidationError("grid.detuning_max", "must be >= detuning_min")
        # detuning d = (Omega_a - nu)/Omega_a
        ds = [lo] if n == 1 else [lo + (hi - lo) * k / (n - 1) for k in range(n)]
        nus = [1.0 - d for d in ds]
    if any(not nu > 0 for nu in nus):
        raise ScenarioValidationError("grid", "drive frequencies must be positive")
    reader.finish()
    return SweepGrid(tuple(nus))


def _build(doc, digest):
    top = _Reader(doc, "scenario")
    name = top.raw("name")
    if not isinstance(name, str) or not re.match(r"^[A-Za-z0-9_.-]+$", name):
        raise ScenarioValidationError("scenario.name", "must be a simple identifier")
    mode = top.choice("mode", MODES)
    output = top.choice("output", OUTPUTS, "csv")
    desc = top.raw("description", "")
    if not isinstance(desc, str):
        raise ScenarioValidationError("scenario.description", "must be a string")
    phys = _Reader(top.raw("physics"), "physics")
    integ = _Reader(top.raw("integrator"), "integrator") if top.has("integrator") else None
    top.raw("integrator", None)
    if mode in ("two_level", "mathieu", "svea"):
        run = _two_level(phys, integ)
    else:
        run = _atom(phys, integ, mode)
    grid = None
    if top.has("grid"):
        grid = _grid(_Reader(top.raw("grid"), "grid"), run)
    top.finish()
    return Scenario(name, mode, output, desc, run, grid, doc, digest)


def loads_scenario(text):
    """Parse and validate scenario text.

    Raises
    ------
    ScenarioParseError
        Malformed TOML (with line and column).
    ScenarioValidationError
        Unknown or invalid fields.
    """
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        m = re.search(r"line (\d+), column (\d+)", str(exc))
        if m:
            line, col = int(m.group(1)), int(m.group(2))
        else:
            # tomli omits the position when the error is at end of input
            lines = text.split("\n")
            line, col = len(lines), len(lines[-1]) + 1
        raise ScenarioParseError(str(exc), line, col) from None
    return _build(doc, hashlib.sha256(text.encode()).hexdigest())


def load_scenario(path):
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ScenarioParseError(f"not UTF-8 text: {exc}") from None
    return loads_scenario(text)


def _q(value, unit):
    return f"{float(value)!r} {unit}"


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _step_doc(ctrl):
    out = {"rtol": ctrl.rtol, "atol": ctrl.atol}
    if math.isfinite(ctrl.max_step):
        out["max_step"] = ctrl.max_step
    if ctrl.fixed_step is not None:
        out["fixed_step"] = ctrl.fixed_step
    return out


def to_document(scn):
    """Canonical document for a validated scenario (working units, exact floats)."""
    doc = {"name": scn.name, "mode": scn.mode, "output": scn.output}
    if scn.description:
        doc["description"] = scn.description
    run = scn.run
    if isinstance(run, TwoLevelRun):
        cfg = run.config
        phys = {
            "omega_a": "1 Omega_a" if run.omega_a_si is None else _q(run.omega_a_si, "rad/s"),
            "omega_0": _q(cfg.drive.omega_0, "Omega_a"),
            "nu": _q(cfg.drive.nu, "Omega_a"),
            "phase": _q(cfg.drive.phase, "rad"),
            "t_end": _q(cfg.t_end, "tau"),
            "sample_every": _q(cfg.sample_every, "tau"),
            "rho_aa": cfg.initial_rho_aa,
            "rho_ab": "pure" if cfg.initial_rho_ab is None else _pair(cfg.initial_rho_ab),
            "omega_s": _pair(cfg.initial_omega_s),
            "sign_convention": cfg.sign_convention,
            "field_feedback": cfg.field_feedback,
        }
        step = cfg.step
    else:
        phys = {
            "b_s": _q(run.b_s, "T"),
            "omega_c": _q(run.omega_c, "rad/s"),
            "nu": _q(run.nu, "rad/s"),
            "t_end": _q(run.t_end, "s"),
            "samples": run.samples,
            "initial": [_pair(a) for a in run.initial],
        }
        if run.model == "spin_half":
            phys["polarization"] = run.polarization
        step = run.step
    doc["physics"] = phys
    doc["integrator"] = _step_doc(step)
    if scn.grid is not None:
        doc["grid"] = {"nu": [_q(nu, "Omega_a") for nu in scn.grid.nu]}
    return doc


def dumps_scenario(scn):
    """Canonical TOML text; re-parses to an equivalent scenario."""
    return tomli_w.dumps(to_document(scn))
