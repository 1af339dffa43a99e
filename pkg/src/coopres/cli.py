"""Command-line runner.

    coopres simulate <file>
    coopres sweep <file> [--workers N]
    coopres atoms <H|Rb> <dump|simulate> [--b-s ...] [--b-z ...] ...
    coopres calc <zeeman|omega_a_rf|omega_a_optical|nmr> [--param value]...

Outputs go to ``--output-dir``, else ``$COOPRES_OUTPUT_DIR``, else
``./coopres_output``.  Exit codes: 0 success, 2 unparsable input,
3 invalid input, 4 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
from pathlib import Path
import sys
import time
import warnings

import numpy as np

from . import __version__
from . import circuit, multilevel, parametric, two_level
from .numerics import IntegrationError
from .scenario import (
    UNITS,
    AtomRun,
    ScenarioParseError,
    ScenarioValidationError,
    load_scenario,
    parse_quantity,
)

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_RUNTIME = 0, 2, 3, 4
OUTPUT_ENV = "COOPRES_OUTPUT_DIR"
TWO_LEVEL_COLUMNS = ("t", "rho_aa", "re_rho_ab", "im_rho_ab", "re_omega_s", "im_omega_s", "abs_omega_s")
SWEEP_COLUMNS = ("detuning", "nu", "max_field", "growth_rate", "status")


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


# ---------------------------------------------------------------- formatting

def format_csv(columns, rows):
    """Fixed-format CSV: ``%.16e`` floats, ``\\n`` line ends, no locale."""
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else "%.16e" % v for v in row) + "\n")
    return buf.getvalue()


def _array_csv(columns, data):
    return format_csv(columns, (tuple(float(x) for x in r) for r in data))


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def _finite(x):
    return x if math.isfinite(x) else None


def output_dir(arg=None):
    return Path(arg or os.environ.get(OUTPUT_ENV) or "coopres_output")


def write_outputs(outdir, files, manifest):
    """Write ``files`` (name -> text) then a manifest with their SHA-256 digests."""
    outdir.mkdir(parents=True, exist_ok=True)
    digests = {}
    for name, text in files.items():
        data = text.encode("utf-8")
        (outdir / name).write_bytes(data)
        digests[name] = hashlib.sha256(data).hexdigest()
    manifest = dict(manifest, tool="coopres", version=__version__, outputs=digests)
    mname = manifest.pop("manifest_name")
    (outdir / mname).write_text(_json(manifest), encoding="utf-8")
    return outdir / mname


# ---------------------------------------------------------------- runners

def _two_level_table(traj):
    st = traj.states
    os_ = st[:, 2]
    return np.column_stack((traj.times, st[:, 0].real, st[:, 1].real, st[:, 1].imag, os_.real, os_.imag, np.abs(os_)))


def run_two_level(scn):
    cfg = scn.run.config
    traj = two_level.simulate(cfg)
    table = _two_level_table(traj)
    pd = two_level.purity_defect(traj.states[:, 0], traj.states[:, 1])
    summary = {
        "mode": "two_level",
        "time_unit": "1/Omega_a",
        "max_abs_omega_s": float(table[:, 6].max()),
        "max_rho_aa": float(table[:, 1].max()),
        "purity_drift": float(np.max(np.abs(pd - pd[0]))),
    }
    return _array_csv(TWO_LEVEL_COLUMNS, table), summary, traj.stats


def run_mathieu(scn):
    cfg = scn.run.config
    try:
        params = parametric.derive_params(1.0, cfg.drive)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, f"physics.nu: {exc}") from None
    y0 = (cfg.initial_omega_s.real, 0.0)
    traj = parametric.simulate_mathieu(params, cfg.drive, y0, (0.0, cfg.t_end), cfg.step, cfg.sample_every)
    table = np.column_stack((traj.times, traj.states[:, 0].real, traj.states[:, 1].real))
    summary = {"mode": "mathieu", "time_unit": "1/Omega_a", "params": params.__dict__,
               "predicted_rate": parametric.growth_exponent(params)[0].real}
    try:
        fit = parametric.fit_growth_rate(traj.times, traj.states[:, 0])
        summary["fitted_rate"] = fit.rate
    except parametric.InsufficientDataError as exc:
        summary["fitted_rate"] = None
        summary["fit_error"] = str(exc)
    return _array_csv(("t", "omega_s", "d_omega_s"), table), summary, traj.stats


def run_svea(scn):
    cfg = scn.run.config
    try:
        params = parametric.derive_params(1.0, cfg.drive)
    except ValueError as exc:
        raise CliError(EXIT_INVALID, f"physics.nu: {exc}") from None
    traj = parametric.integrate_svea(params, cfg.drive.omega_0, cfg.drive.nu, (0.0, cfg.t_end),
                                     step=cfg.step, sample_every=cfg.sample_every)
    amps = traj.states
    field = parametric.reconstruct_field(traj.times, amps, cfg.drive.nu)
    table = np.column_stack((traj.times, amps[:, 0].real, amps[:, 0].imag, amps[:, 1].real, amps[:, 1].imag,
                             field.real, field.imag, np.abs(field)))
    cols = ("t", "re_a1", "im_a1", "re_a2", "im_a2", "re_omega_s", "im_omega_s", "abs_omega_s")
    summary = {"mode": "svea", "time_unit": "1/Omega_a", "params": params.__dict__}
    return _array_csv(cols, table), summary, traj.stats


def _amp_columns(labels):
    cols = ["t"]
    for lab in labels:
        cols += [f"re_a_{lab}", f"im_a_{lab}"]
    return tuple(cols + ["norm"])


def _level_tag(level):
    return f"{multilevel._qn(level.f)}_{multilevel._qn(level.m)}".replace("-", "m").replace("/", "o")


def run_atom(run: AtomRun):
    every = run.t_end / run.samples
    if run.model == "spin_half":
        rabi = multilevel.rabi_frequency(run.b_s)
        scale = max(rabi, run.omega_c)
        traj = multilevel.simulate_spin_half(run.polarization, rabi / scale, run.nu / scale, run.omega_c / scale,
                                             run.initial, (0.0, run.t_end * scale), run.step, every * scale)
        times = traj.times / scale
        labels = ("up", "down")
    else:
        model = multilevel.build_mu_plus(run.model, run.omega_c)
        # integrate in units of 1/omega_c
        w0 = multilevel.rabi_frequency(run.b_s) / run.omega_c
        traj = multilevel.simulate_atom(model, w0, run.nu / run.omega_c, 1.0, run.initial,
                                        (0.0, run.t_end * run.omega_c), run.step, every * run.omega_c)
        times = traj.times / run.omega_c
        labels = tuple(_level_tag(lev) for lev in model.levels)
    st = traj.states
    cols = [times]
    for k in range(st.shape[1]):
        cols += [st[:, k].real, st[:, k].imag]
    norm = np.linalg.norm(st, axis=1)
    table = np.column_stack(cols + [norm])
    summary = {
        "mode": run.model,
        "time_unit": "s",
        "omega_c": run.omega_c,
        "nu": run.nu,
        "omega_0": multilevel.rabi_frequency(run.b_s),
        "max_norm_drift": float(np.max(np.abs(norm - 1.0))),
        "final_populations": dict(zip(labels, (np.abs(st[-1]) ** 2).tolist())),
    }
    return _array_csv(_amp_columns(labels), table), summary, traj.stats


def _run_scenario(scn):
    if scn.mode == "two_level":
        return run_two_level(scn)
    if scn.mode == "mathieu":
        return run_mathieu(scn)
    if scn.mode == "svea":
        return run_svea(scn)
    return run_atom(scn.run)


def _load(path):
    try:
        return load_scenario(path)
    except FileNotFoundError:
        raise CliError(EXIT_PARSE, f"{path}: no such file") from None
    except ScenarioParseError as exc:
        where = f" (line {exc.line}, column {exc.column})" if exc.line else ""
        raise CliError(EXIT_PARSE, f"{path}: parse error{where}: {exc}") from None
    except ScenarioValidationError as exc:
        raise CliError(EXIT_INVALID, f"{path}: invalid field {exc.field}: {exc}") from None


def _select_files(scn, csv_text, summary):
    files = {}
    if scn.output in ("csv", "both"):
        files[f"{scn.name}.csv"] = csv_text
    if scn.output in ("json", "both"):
        files[f"{scn.name}.json"] = _json(summary)
    return files


def cmd_simulate(args):
    scn = _load(args.scenario)
    t0 = time.perf_counter()
    try:
        csv_text, summary, stats = _run_scenario(scn)
    except IntegrationError as exc:
        raise CliError(EXIT_RUNTIME, f"integration aborted: {exc}") from None
    wall = time.perf_counter() - t0
    files = _select_files(scn, csv_text, summary)
    path = write_outputs(output_dir(args.output_dir), files, {
        "manifest_name": f"{scn.name}.manifest.json",
        "command": "simulate",
        "scenario": scn.name,
        "scenario_sha256": scn.digest,
        "wall_time_s": wall,
        "integrator": stats.as_dict(),
    })
    print(_json({"manifest": str(path), **{k: v for k, v in summary.items() if not isinstance(v, dict)}}), end="")
    return EXIT_OK


def cmd_sweep(args):
    scn = _load(args.scenario)
    if scn.grid is None:
        raise CliError(EXIT_INVALID, f"{args.scenario}: invalid field grid: sweep needs a [grid] table")
    if scn.mode != "two_level":
        raise CliError(EXIT_INVALID, f"{args.scenario}: invalid field scenario.mode: sweeps need mode two_level")
    if args.workers < 1:
        raise CliError(EXIT_INVALID, "--workers must be >= 1")
    cfg = scn.run.config
    t0 = time.perf_counter()
    points = parametric.detuning_sweep(1.0, cfg.drive.omega_0, scn.grid.nu, cfg, workers=args.workers)
    wall = time.perf_counter() - t0
    rows = [(p.detuning, p.nu, p.max_field, p.growth_rate, p.status) for p in points]
    files = {f"{scn.name}_sweep.csv": format_csv(SWEEP_COLUMNS, rows)}
    if scn.output in ("json", "both"):
        files[f"{scn.name}_sweep.json"] = _json([
            {"detuning": p.detuning, "nu": p.nu, "max_field": _finite(p.max_field),
             "growth_rate": _finite(p.growth_rate), "status": p.status} for p in points
        ])
    ok = sum(p.status == "ok" for p in points)
    path = write_outputs(output_dir(args.output_dir), files, {
        "manifest_name": f"{scn.name}_sweep.manifest.json",
        "command": "sweep",
        "scenario": scn.name,
        "scenario_sha256": scn.digest,
        "wall_time_s": wall,
        "workers": args.workers,
        "points": len(points),
        "points_ok": ok,
    })
    best = max((p for p in points if p.status == "ok"), key=lambda p: p.max_field, default=None)
    print(_json({"manifest": str(path), "points": len(points), "points_ok": ok,
                 "peak_detuning": None if best is None else best.detuning}), end="")
    return EXIT_OK if ok >= 0.9 * len(points) else EXIT_RUNTIME


_ATOM_DEFAULTS = {"H": "0,0", "Rb": "1,1"}


def cmd_atoms(args):
    kind = args.model
    if kind not in ("H", "Rb"):
        raise CliError(EXIT_INVALID, f"unknown atom model {kind!r}; expected H or Rb")
    outdir = output_dir(args.output_dir)
    if args.action == "dump":
        table = multilevel.dump_model(multilevel.build_mu_plus(kind))
        text = _json(table)
        write_outputs(outdir, {f"atoms_{kind}_mu_plus.json": text},
                      {"manifest_name": f"atoms_{kind}_dump.manifest.json", "command": "atoms dump", "model": kind})
        print(text, end="")
        return EXIT_OK
    if args.action != "simulate":
        raise CliError(EXIT_INVALID, f"unknown atoms action {args.action!r}; expected dump or simulate")
    from .scenario import _atom, _Reader

    phys = {"b_s": args.b_s, "nu": args.nu, "t_end": args.t_end, "samples": args.samples,
            "initial": args.initial or _ATOM_DEFAULTS[kind]}
    if args.omega_c:
        phys["omega_c"] = args.omega_c
    else:
        phys["b_z"] = args.b_z
    try:
        run = _atom(_Reader(phys, "atoms"), None, "atom_h" if kind == "H" else "atom_rb")
    except ScenarioValidationError as exc:
        raise CliError(EXIT_INVALID, f"invalid argument {exc.field}: {exc}") from None
    t0 = time.perf_counter()
    try:
        csv_text, summary, stats = run_atom(run)
    except IntegrationError as exc:
        raise CliError(EXIT_RUNTIME, f"integration aborted: {exc}") from None
    path = write_outputs(outdir, {f"atoms_{kind}.csv": csv_text}, {
        "manifest_name": f"atoms_{kind}_simulate.manifest.json",
        "command": "atoms simulate",
        "model": kind,
        "inputs": phys,
        "wall_time_s": time.perf_counter() - t0,
        "integrator": stats.as_dict(),
    })
    print(_json({"manifest": str(path), "max_norm_drift": summary["max_norm_drift"]}), end="")
    return EXIT_OK


# ---------------------------------------------------------------- calc

_CALC = {
    # name: {param: (kind, default)}; kind "number" for bare numbers
    "zeeman": {"b_z": ("field", None), "g": ("number", 2.0)},
    "omega_a_rf": {
        "density": ("density", None),
        "omega": ("frequency", "2e9 rad/s"),
        "radius": ("length", "1 cm"),
        "wire_radius": ("length", "0.5 mm"),
        "mu_ab": ("moment", "1 mu_B"),
        "gamma_0": ("frequency", "3e3 rad/s"),
    },
    "omega_a_optical": {
        "omega_ab": ("frequency", None),
        "dipole": (("moment", "dipole"), None),
        "density": ("density", None),
    },
    "nmr": {
        "density_n0": ("density", None),
        "delta_e": (("energy", "frequency"), None),
        "temperature": ("temperature", None),
        "mu": ("moment", "1 mu_p"),
    },
}


def _parse_params(formula, extra):
    spec = _CALC[formula]
    given = {}
    it = iter(extra)
    for tok in it:
        if not tok.startswith("--"):
            raise CliError(EXIT_INVALID, f"unexpected argument {tok!r}")
        key, _, val = tok[2:].partition("=")
        if not _:
            val = next(it, None)
            if val is None:
                raise CliError(EXIT_INVALID, f"parameter {key} needs a value")
        key = key.replace("-", "_")
        if key not in spec:
            raise CliError(EXIT_INVALID, f"unknown parameter {key!r} for {formula}; expected {sorted(spec)}")
        given[key] = val
    values, inputs = {}, {}
    for key, (kind, default) in spec.items():
        raw = given.get(key, default)
        if raw is None:
            raise CliError(EXIT_INVALID, f"missing parameter {key} for {formula}")
        inputs[key] = raw if isinstance(raw, str) else repr(raw)
        if kind == "number":
            try:
                values[key] = float(raw)
            except ValueError:
                raise CliError(EXIT_INVALID, f"parameter {key}: expected a number, got {raw!r}") from None
            continue
        kinds = kind if isinstance(kind, tuple) else (kind,)
        q = None
        for k in kinds:
            try:
                q = parse_quantity(raw, k, key)
                break
            except ScenarioValidationError as exc:
                err = exc
        if q is None:
            raise CliError(EXIT_INVALID, f"parameter {err}")
        if UNITS[q.unit][1] is None:
            raise CliError(EXIT_INVALID, f"parameter {key}: {q.unit} needs a run context; use a physical unit")
        values[key] = (q, q.value * UNITS[q.unit][1])
    return values, inputs


def _audit():
    return [e.__dict__ for e in circuit.unit_audit()]


def calc(formula, params):
    """Evaluate a calculator; returns the JSON-ready result dict."""
    if formula not in _CALC:
        raise CliError(EXIT_INVALID, f"unknown formula {formula!r}; expected one of {sorted(_CALC)}")
    vals, inputs = _parse_params(formula, params)
    si = {k: (v[1] if isinstance(v, tuple) else v) for k, v in vals.items()}
    out = {"formula": formula, "inputs": inputs}
    if formula == "zeeman":
        w = multilevel.zeeman_frequency(si["b_z"], si["g"])
        out.update(value=w, units="rad/s", formula_ref="omega_c = g mu_B B_z / hbar",
                   derived={"frequency_hz": w / (2 * math.pi)})
    elif formula == "omega_a_rf":
        coil = circuit.reference_coil(si["omega"], si["radius"], si["wire_radius"])
        sample = circuit.reference_sample(coil, si["density"], si["mu_ab"])
        oa = circuit.cooperative_frequency_rf(coil, sample)
        out.update(
            value=oa, units="rad/s",
            formula_ref="Omega_a^2 = omega_s (mu0 mu_ab |J| / 4 pi)^2 N_spins / (2 hbar L_s), |J| = 2 pi / a_s",
            derived={
                "omega_s": coil.omega_s,
                "J": circuit.geometry_integral(coil)[2],
                "inductance_l_s": coil.inductance_l_s,
                "capacitance_c_s": coil.capacitance_c_s,
                "sample_volume": sample.volume,
                "n_spins": sample.n_spins,
                "gamma_0": si["gamma_0"],
                "omega_a_over_gamma_0": oa / si["gamma_0"],
            },
            unit_audit=_audit(),
        )
    elif formula == "omega_a_optical":
        q, _ = vals["dipole"]
        # convert to CGS-Gaussian: moment in erg/G, dipole in statC cm
        p_cgs = q.value * UNITS[q.unit][1] * (1e3 if q.kind == "moment" else _statc_cm_per_c_m())
        n_cgs = si["density"] * 1e-6
        oa = circuit.cooperative_frequency_optical(si["omega_ab"], p_cgs, n_cgs, gaussian=True)
        out.update(value=oa, units="rad/s", formula_ref="Omega_a^2 = (2 pi / hbar) omega_ab p^2 N  (Gaussian)",
                   derived={"dipole_cgs": p_cgs, "density_cm3": n_cgs})
    else:
        q, de = vals["delta_e"]
        if q.kind == "frequency":
            de = de * circuit.HBAR
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            est = circuit.nmr_estimate(si["density_n0"], de, si["temperature"], si["mu"])
        out.update(value=est.delta_n_ab, units="m^-3", formula_ref="delta_N_ab = N0 dE / (k_B T)",
                   derived={"polarization": est.polarization, "omega_ab": est.omega_ab,
                            "omega_a_hint": est.omega_a_hint},
                   warnings=[str(w.message) for w in caught])
    return out


def _statc_cm_per_c_m():
    return 10 * circuit.C_LIGHT * 100


def cmd_calc(args, extra):
    result = calc(args.formula, extra)
    print(_json(result), end="")
    return EXIT_OK


# ---------------------------------------------------------------- entry point

def build_parser():
    p = argparse.ArgumentParser(prog="coopres", description="Cooperative parametric resonance simulator")
    p.add_argument("--version", action="version", version=f"coopres {__version__}")
    out_help = f"output directory (default: ${OUTPUT_ENV} or ./coopres_output)"
    p.add_argument("--output-dir", default=None, help=out_help)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=argparse.SUPPRESS, help=out_help)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", parents=[common], help="run a scenario file")
    s.add_argument("scenario")

    s = sub.add_parser("sweep", parents=[common], help="run a scenario's detuning grid")
    s.add_argument("scenario")
    s.add_argument("--workers", type=int, default=1)

    s = sub.add_parser("atoms", parents=[common], help="hyperfine models: dump the mu_+ table or simulate")
    s.add_argument("model")
    s.add_argument("action")
    s.add_argument("--b-s", default="1 mG", help="transverse RF amplitude (default 1 mG)")
    s.add_argument("--b-z", default="0.1 G", help="static field setting omega_c (default 0.1 G)")
    s.add_argument("--omega-c", default=None, help="splitting, overrides --b-z")
    s.add_argument("--nu", default="1 omega_c", help="drive frequency (default 1 omega_c)")
    s.add_argument("--t-end", default="1 ms")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--initial", default=None, help="initial level 'F,M'")

    s = sub.add_parser("calc", parents=[common], help="closed-form estimates")
    s.add_argument("formula")
    return p


def main(argv=None):
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args, extra = parser.parse_known_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "calc":
            return cmd_calc(args, extra)
        if extra:
            parser.print_usage(sys.stderr)
            print(f"coopres: error: unrecognized arguments: {' '.join(extra)}", file=sys.stderr)
            return EXIT_PARSE
        return {"simulate": cmd_simulate, "sweep": cmd_sweep, "atoms": cmd_atoms}[args.command](args)
    except CliError as exc:
        print(f"coopres: {exc}", file=sys.stderr)
        return exc.code
    except (IntegrationError, FloatingPointError) as exc:
        print(f"coopres: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
