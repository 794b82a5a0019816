"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 invalid physics parameters,
4 numerical failure (singular system or non-convergence).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import optimize, spectra
from .correlations import output_squeezing, propagate_correlations
from .errors import CptError, FeatureUndefinedError, ParameterError
from .io import emit_results, sidecar
from .meanfield import propagate_mean, transmission
from .params import (DETUNING_SETTINGS, STATE_LABELS, SystemParams, to_db,
                     validate_params)

EXIT_USAGE = 2
EXIT_PARAMS = 3
EXIT_NUMERICS = 4

_PARAM_KEYS = (
    "alpha", "delta", "setting", "delta_p", "delta_c",
    "omega", "omega_p", "omega_c", "gamma", "gamma12",
    "lc", "xi_steps", "g_norm",
)
_GRID_KEYS = (
    "omega_min", "omega_max", "omega_points",
    "delta_min", "delta_max", "delta_points",
    "w_min", "w_max", "w_points",
)

COMMANDS = (
    "steady", "propagate", "squeeze", "optimize-rabi", "optimize-detuning",
    "sweep", "spectrum", "ratio-scan", "compare-settings", "figure",
)

FIGURE_IDS = ("2a", "2b", "3a", "3b", "3c", "3d",
              "4a", "4b", "4c", "4d", "s1", "s2")

# Spectrum presets: (alpha, omega, delta); each pair optimizes the
# zero-frequency squeezing at its optical density.
_SPECTRUM_PRESETS = {
    "4a": (1000.0, 1.0, 0.010),
    "4b": (1000.0, 1.4, 0.019),
    "4c": (300.0, 1.0, 0.019),
    "4d": (300.0, 1.4, 0.043),
}
_OD_FAMILY = (100.0, 300.0, 1000.0, 3000.0)


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    outdir: str = "."
    prefix: str | None = None
    fmt: str = "both"
    workers: int = 1
    resolution: int = 9
    ratios: tuple = (0.1, 0.5, 1.0, 2.0)
    figure_id: str | None = None


def _load_config_file(path: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ParameterError(f"config {path} must hold a JSON object")
        return data
    data = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        data[key.strip()] = value.strip()
    return data


def _coerce(key: str, value):
    if value is None:
        return None
    if key == "setting":
        return str(value)
    if key in ("xi_steps", "omega_points", "delta_points", "w_points"):
        return int(value)
    if key in ("omega", "omega_p", "omega_c"):
        if isinstance(value, str):
            return complex(value)
        if isinstance(value, (list, tuple)):
            return complex(float(value[0]), float(value[1]))
        return complex(value)
    return float(value)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cptsqueeze",
        description="Squeezed-light generation in a cavity-free CPT medium",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat key=value file or JSON object")
        p.add_argument("--od", "--alpha", dest="alpha", type=float,
                       help="optical density")
        p.add_argument("--delta", type=float, help="two-photon detuning (Gamma)")
        p.add_argument("--setting", choices=DETUNING_SETTINGS,
                       help="named one-photon detuning split (default symmetric)")
        p.add_argument("--delta-p", dest="delta_p", type=float)
        p.add_argument("--delta-c", dest="delta_c", type=float)
        p.add_argument("--omega", type=complex,
                       help="common input Rabi frequency (Gamma)")
        p.add_argument("--omega-p", dest="omega_p", type=complex)
        p.add_argument("--omega-c", dest="omega_c", type=complex)
        p.add_argument("--gamma12", type=float, help="ground-coherence decay")
        p.add_argument("--lc", type=float, help="vacuum transit phase L/c (1/Gamma)")
        p.add_argument("--xi-steps", dest="xi_steps", type=int,
                       help="propagation grid steps (default 2000)")
        p.add_argument("--g-norm", dest="g_norm", type=float,
                       help="single-photon Rabi frequency (informational)")
        p.add_argument("--outdir", default=None, help="output directory")
        p.add_argument("--prefix", default=None, help="output file prefix")
        p.add_argument("--format", dest="fmt", choices=("csv", "json", "both"),
                       default=None)
        p.add_argument("--workers", type=int, default=None,
                       help="parallel workers for sweeps")
        for axis in ("omega", "delta", "w"):
            p.add_argument(f"--{axis}-min", dest=f"{axis}_min", type=float)
            p.add_argument(f"--{axis}-max", dest=f"{axis}_max", type=float)
            p.add_argument(f"--{axis}-points", dest=f"{axis}_points", type=int)

    for name in COMMANDS:
        p = sub.add_parser(name)
        add_common(p)
        if name == "sweep":
            p.add_argument("--resolution", type=int, default=None)
        if name == "ratio-scan":
            p.add_argument("--ratios", default=None,
                           help="comma-separated probe/coupling ratios")
        if name == "figure":
            p.add_argument("figure_id", metavar="ID", choices=FIGURE_IDS)
    return parser


def parse_cli(argv) -> RunConfig:
    """Parse argv into a RunConfig; flags override config-file values."""
    parser = _build_parser()
    ns = parser.parse_args(argv)

    raw: dict = {}
    if ns.config:
        raw.update(_load_config_file(ns.config))
    unknown = set(raw) - set(_PARAM_KEYS) - set(_GRID_KEYS)
    if unknown:
        raise ParameterError(f"unknown config keys: {sorted(unknown)}")
    for key in _PARAM_KEYS + _GRID_KEYS:
        value = getattr(ns, key, None)
        if value is not None:
            raw[key] = value

    cfg = RunConfig(command=ns.command)
    cfg.figure_id = getattr(ns, "figure_id", None)
    if cfg.figure_id is not None:
        _apply_figure_preset(cfg.figure_id, raw)
    for key in _PARAM_KEYS:
        if key in raw:
            cfg.params[key] = _coerce(key, raw[key])
    for key in _GRID_KEYS:
        if key in raw:
            cfg.grid[key] = _coerce(key, raw[key])
    cfg.outdir = ns.outdir if ns.outdir is not None else "."
    default_prefix = ns.command if cfg.figure_id is None else f"figure_{cfg.figure_id}"
    cfg.prefix = ns.prefix if ns.prefix is not None else default_prefix
    if ns.fmt is not None:
        cfg.fmt = ns.fmt
    if ns.workers is not None:
        cfg.workers = ns.workers
    if getattr(ns, "resolution", None) is not None:
        cfg.resolution = ns.resolution
    if getattr(ns, "ratios", None) is not None:
        cfg.ratios = tuple(float(r) for r in str(ns.ratios).split(","))
    return cfg


def _apply_figure_preset(fig: str, raw: dict) -> None:
    """Fill preset physics parameters; explicit flags keep priority."""
    preset: dict = {}
    if fig == "2a":
        preset = {"alpha": 1000.0, "delta": 0.02}
    elif fig == "2b":
        preset = {"alpha": 1000.0, "omega": 1.0}
    elif fig in ("3a", "3c"):
        preset = {}
    elif fig in ("3b", "3d"):
        preset = {}
    elif fig in _SPECTRUM_PRESETS:
        alpha, omega, delta = _SPECTRUM_PRESETS[fig]
        preset = {"alpha": alpha, "omega": omega, "delta": delta}
        bw = abs(omega) ** 2 / np.sqrt(2.0 * alpha)
        per = 4.0 * np.pi * abs(omega) ** 2 / alpha
        preset.update({"w_min": 0.0, "w_max": max(4.0 * bw, 3.0 * per),
                       "w_points": 161})
    elif fig == "s1":
        preset = {"alpha": 1000.0, "delta": 0.02}
    elif fig == "s2":
        preset = {"alpha": 1000.0, "omega_c": 1.0,
                  "delta_min": 0.0, "delta_max": 0.1, "delta_points": 41}
    for key, value in preset.items():
        raw.setdefault(key, value)


def _params_from(cfg: RunConfig, **overrides) -> SystemParams:
    raw = dict(cfg.params)
    raw.update(overrides)
    return validate_params(raw)


def _axis(cfg: RunConfig, name: str, default: tuple) -> np.ndarray:
    lo = cfg.grid.get(f"{name}_min", default[0])
    hi = cfg.grid.get(f"{name}_max", default[1])
    n = int(cfg.grid.get(f"{name}_points", default[2]))
    if name == "w" or lo <= 0.0:
        return np.linspace(lo, hi, n)
    return np.geomspace(lo, hi, n)


def _grid_tuple(cfg: RunConfig, name: str, default: tuple) -> tuple:
    return (
        cfg.grid.get(f"{name}_min", default[0]),
        cfg.grid.get(f"{name}_max", default[1]),
        int(cfg.grid.get(f"{name}_points", default[2])),
    )


def run_config(cfg: RunConfig) -> str:
    """Execute one parsed run; returns the one-line human summary."""
    prefix = Path(cfg.outdir) / cfg.prefix
    handler = _HANDLERS[cfg.command]
    return handler(cfg, prefix)


def _emit(cfg, prefix, header, rows, params_echo, outputs, grid=None):
    payload = sidecar(cfg.command, params_echo, outputs, grid)
    emit_results(prefix, header, rows, payload, cfg.fmt)


def _run_steady(cfg, prefix):
    params = _params_from(cfg)
    from .bloch import steady_state

    state = steady_state(params, params.omega_p0, params.omega_c0)
    rows = [(STATE_LABELS[i], state.x[i].real, state.x[i].imag) for i in range(9)]
    pops = state.x[3:6].real
    _emit(cfg, prefix, ["element", "re", "im"], rows, params.as_dict(),
          {"populations": list(pops)})
    return (f"steady state: pop(|1>) = {pops[0]:.6f}, pop(|2>) = {pops[1]:.6f}, "
            f"pop(|3>) = {pops[2]:.6f}")


def _run_propagate(cfg, prefix):
    params = _params_from(cfg)
    mean = propagate_mean(params)
    pr = mean.profile
    rows = [
        (pr.xi[i], pr.omega_p[i].real, pr.omega_p[i].imag,
         pr.omega_c[i].real, pr.omega_c[i].imag)
        for i in range(pr.xi.size)
    ]
    t_p, t_c = transmission(pr)
    _emit(cfg, prefix,
          ["xi", "re_omega_p", "im_omega_p", "re_omega_c", "im_omega_c"],
          rows, params.as_dict(), {"transmission_p": t_p, "transmission_c": t_c})
    return f"propagated: Tp = {t_p:.6f}, Tc = {t_c:.6f}"


def _run_squeeze(cfg, prefix):
    params = _params_from(cfg)
    res = output_squeezing(params)
    _emit(cfg, prefix,
          ["variance", "variance_db", "theta_opt", "transmission_p", "transmission_c"],
          [(res.variance, res.variance_db, res.theta_opt,
            res.transmission_p, res.transmission_c)],
          params.as_dict(), res.as_dict())
    return (f"V = {res.variance:.6f} ({res.variance_db:+.2f} dB), "
            f"theta_opt = {res.theta_opt:.4f} rad, "
            f"Tp = {res.transmission_p:.4f}, Tc = {res.transmission_c:.4f}")


def _scan_rows(axis_name, scan):
    rows = []
    for i, x in enumerate(scan.axis):
        if i in scan.failures:
            rows.append((x, "", "", "", "", scan.failures[i]))
        else:
            v = scan.variance[i]
            rows.append((x, v, to_db(v), scan.t_p[i], scan.t_c[i], ""))
    return rows


def _run_optimize_rabi(cfg, prefix):
    params_echo = dict(cfg.params)
    alpha = float(cfg.params["alpha"])
    delta = float(cfg.params["delta"])
    setting = cfg.params.get("setting", "symmetric")
    grid = _grid_tuple(cfg, "omega", optimize.RABI_GRID)
    scan = optimize.optimize_over_rabi(alpha, delta, setting, grid=grid,
                                       xi_steps=cfg.params.get("xi_steps"))
    _emit(cfg, prefix, ["omega", "variance", "variance_db", "t_p", "t_c", "error"],
          _scan_rows("omega", scan), params_echo,
          {"omega_opt": scan.x_opt, "v_opt": scan.v_opt,
           "v_opt_db": to_db(scan.v_opt), "t_p": scan.t_p_opt, "t_c": scan.t_c_opt},
          {"omega_grid": list(grid)})
    return (f"omega_opt = {scan.x_opt:.4f}, V = {scan.v_opt:.6f} "
            f"({to_db(scan.v_opt):+.2f} dB)")


def _run_optimize_detuning(cfg, prefix):
    params_echo = dict(cfg.params)
    alpha = float(cfg.params["alpha"])
    omega = abs(cfg.params["omega"])
    setting = cfg.params.get("setting", "symmetric")
    grid = _grid_tuple(cfg, "delta", optimize.DETUNING_GRID)
    scan = optimize.optimize_over_detuning(alpha, omega, setting, grid=grid,
                                           xi_steps=cfg.params.get("xi_steps"))
    _emit(cfg, prefix, ["delta", "variance", "variance_db", "t_p", "t_c", "error"],
          _scan_rows("delta", scan), params_echo,
          {"delta_opt": scan.x_opt, "v_opt": scan.v_opt,
           "v_opt_db": to_db(scan.v_opt), "t_p": scan.t_p_opt, "t_c": scan.t_c_opt},
          {"delta_grid": list(grid)})
    return (f"delta_opt = {scan.x_opt:.6f}, V = {scan.v_opt:.6f} "
            f"({to_db(scan.v_opt):+.2f} dB)")


def _run_sweep(cfg, prefix):
    alpha = float(cfg.params["alpha"])
    setting = cfg.params.get("setting", "symmetric")
    omega_range = _grid_tuple(cfg, "omega", optimize.RABI_GRID)[:2]
    delta_range = _grid_tuple(cfg, "delta", optimize.DETUNING_GRID)[:2]
    sweep = optimize.sweep_map(alpha, omega_range, delta_range, cfg.resolution,
                               setting, xi_steps=cfg.params.get("xi_steps"),
                               workers=cfg.workers)
    rows = []
    best = None
    for i, om in enumerate(sweep.omega_axis):
        for j, de in enumerate(sweep.delta_axis):
            cell = sweep.cells[i][j]
            if isinstance(cell, optimize.CellError):
                rows.append((om, de, "", "", "", "", "", str(cell)))
            else:
                rows.append((om, de, cell.variance, cell.variance_db,
                             cell.theta_opt, cell.transmission_p,
                             cell.transmission_c, ""))
                if best is None or cell.variance < best[0]:
                    best = (cell.variance, om, de)
    _emit(cfg, prefix,
          ["omega", "delta", "variance", "variance_db", "theta_opt",
           "t_p", "t_c", "error"],
          rows, dict(cfg.params),
          {"v_min": best[0], "omega_at_min": best[1], "delta_at_min": best[2]},
          {"omega_range": list(omega_range), "delta_range": list(delta_range),
           "resolution": cfg.resolution})
    return (f"sweep min V = {best[0]:.6f} ({to_db(best[0]):+.2f} dB) at "
            f"omega = {best[1]:.4f}, delta = {best[2]:.6f}")


def _run_spectrum(cfg, prefix):
    params = _params_from(cfg)
    w_default = _default_w_grid(params)
    ws = _axis(cfg, "w", w_default)
    spec = spectra.squeezing_spectrum(params, ws)
    rows = list(zip(spec.omega, spec.s))
    _emit(cfg, prefix, ["omega", "s"], rows, params.as_dict(),
          {"theta_used": spec.theta_used, "bandwidth": spec.bandwidth,
           "period": spec.period,
           "failures": {str(k): v for k, v in spec.failures.items()}},
          {"w_grid": [float(ws[0]), float(ws[-1]), int(ws.size)]})
    s0 = spec.s[np.argmin(np.abs(spec.omega))]
    bw = "n/a" if spec.bandwidth is None else f"{spec.bandwidth:.5f}"
    per = "n/a" if spec.period is None else f"{spec.period:.5f}"
    return (f"S(0) = {s0:.6f} ({to_db(s0):+.2f} dB), bandwidth = {bw}, "
            f"period = {per}")


def _default_w_grid(params) -> tuple:
    om = max(abs(params.omega_p0), abs(params.omega_c0), 1e-6)
    alpha = max(params.alpha, 1.0)
    bw = om ** 2 / np.sqrt(2.0 * alpha)
    per = 4.0 * np.pi * om ** 2 / alpha
    return (0.0, max(4.0 * bw, 3.0 * per), 161)


def _run_ratio_scan(cfg, prefix):
    alpha = float(cfg.params["alpha"])
    omega_c = abs(cfg.params.get("omega_c", cfg.params.get("omega", 1.0)))
    grid = _grid_tuple(cfg, "delta", optimize.DETUNING_GRID)
    result = optimize.ratio_scan(alpha, omega_c, cfg.ratios, grid,
                                 xi_steps=cfg.params.get("xi_steps"))
    rows = []
    outputs = {}
    for r, scan in result.items():
        for i, de in enumerate(scan.axis):
            if i in scan.failures:
                rows.append((r, de, "", "", scan.failures[i]))
            else:
                rows.append((r, de, scan.variance[i], to_db(scan.variance[i]), ""))
        outputs[str(r)] = {"delta_opt": scan.x_opt, "v_opt": scan.v_opt,
                           "v_opt_db": to_db(scan.v_opt)}
    _emit(cfg, prefix, ["ratio", "delta", "variance", "variance_db", "error"],
          rows, dict(cfg.params), outputs, {"delta_grid": list(grid)})
    best_r = min(result, key=lambda r: result[r].v_opt)
    return (f"best ratio r = {best_r:g} with V = {result[best_r].v_opt:.6f} "
            f"({to_db(result[best_r].v_opt):+.2f} dB)")


def _run_compare_settings(cfg, prefix):
    alpha = float(cfg.params["alpha"])
    delta = float(cfg.params["delta"])
    omega = abs(cfg.params.get("omega", 1.0))
    grid = _grid_tuple(cfg, "omega", optimize.RABI_GRID)
    table = optimize.detuning_setting_compare(alpha, omega, delta, grid=grid,
                                              xi_steps=cfg.params.get("xi_steps"))
    rows = [
        (setting, scan.x_opt, scan.v_opt, to_db(scan.v_opt),
         scan.t_p_opt, scan.t_c_opt)
        for setting, scan in table.items()
    ]
    _emit(cfg, prefix,
          ["setting", "omega_opt", "v_opt", "v_opt_db", "t_p", "t_c"],
          rows, dict(cfg.params),
          {s: {"omega_opt": sc.x_opt, "v_opt": sc.v_opt} for s, sc in table.items()},
          {"omega_grid": list(grid)})
    vals = [to_db(sc.v_opt) for sc in table.values()]
    return (f"settings V_opt spread = {max(vals) - min(vals):.4f} dB "
            f"(best {min(vals):+.2f} dB)")


def _run_figure(cfg, prefix):
    fig = cfg.figure_id
    if fig == "2a":
        return _run_figure_curve_over_rabi(cfg, prefix)
    if fig == "2b":
        return _run_figure_curve_over_detuning(cfg, prefix)
    if fig in ("3a", "3c"):
        return _run_figure_od_family_detuning_axis(cfg, prefix)
    if fig in ("3b", "3d"):
        return _run_figure_od_family_rabi_axis(cfg, prefix)
    if fig in _SPECTRUM_PRESETS:
        return _run_spectrum(cfg, prefix)
    if fig == "s1":
        return _run_figure_settings_curves(cfg, prefix)
    if fig == "s2":
        return _run_figure_ratio_curves(cfg, prefix)
    raise ParameterError(f"unhandled figure id {fig!r}")


def _squeeze_at(cfg, **overrides):
    params = _params_from(cfg, **overrides)
    return output_squeezing(params)


def _run_figure_curve_over_rabi(cfg, prefix):
    omegas = _axis(cfg, "omega", (0.1, 4.0, 49))
    rows = []
    for om in omegas:
        try:
            res = _squeeze_at(cfg, omega=om)
            rows.append((om, res.variance, res.variance_db,
                         res.transmission_p, res.transmission_c, ""))
        except CptError as err:
            rows.append((om, "", "", "", "", str(err)))
    _emit(cfg, prefix, ["omega", "variance", "variance_db", "t_p", "t_c", "error"],
          rows, dict(cfg.params), {}, {"omega_grid": [omegas[0], omegas[-1], omegas.size]})
    return f"figure {cfg.figure_id}: {omegas.size} points written"


def _run_figure_curve_over_detuning(cfg, prefix):
    deltas = _axis(cfg, "delta", (1e-4, 0.3, 49))
    rows = []
    for de in deltas:
        try:
            res = _squeeze_at(cfg, delta=de)
            rows.append((de, res.variance, res.variance_db,
                         res.transmission_p, res.transmission_c, ""))
        except CptError as err:
            rows.append((de, "", "", "", "", str(err)))
    _emit(cfg, prefix, ["delta", "variance", "variance_db", "t_p", "t_c", "error"],
          rows, dict(cfg.params), {}, {"delta_grid": [deltas[0], deltas[-1], deltas.size]})
    return f"figure {cfg.figure_id}: {deltas.size} points written"


def _run_figure_od_family_detuning_axis(cfg, prefix):
    deltas = _axis(cfg, "delta", (3e-3, 0.12, 9))
    rows = []
    for alpha in _OD_FAMILY:
        for de in deltas:
            scan = optimize.optimize_over_rabi(
                alpha, de, cfg.params.get("setting", "symmetric"),
                xi_steps=cfg.params.get("xi_steps"))
            rows.append((alpha, de, scan.v_opt, to_db(scan.v_opt), scan.x_opt,
                         scan.t_p_opt, scan.t_c_opt))
    _emit(cfg, prefix,
          ["od", "delta", "v_opt", "v_opt_db", "omega_opt", "t_p", "t_c"],
          rows, dict(cfg.params), {},
          {"delta_grid": [deltas[0], deltas[-1], deltas.size],
           "od_values": list(_OD_FAMILY)})
    return f"figure {cfg.figure_id}: {len(rows)} optimized points written"


def _run_figure_od_family_rabi_axis(cfg, prefix):
    omegas = _axis(cfg, "omega", (0.5, 2.8, 9))
    rows = []
    for alpha in _OD_FAMILY:
        for om in omegas:
            scan = optimize.optimize_over_detuning(
                alpha, om, cfg.params.get("setting", "symmetric"),
                xi_steps=cfg.params.get("xi_steps"))
            rows.append((alpha, om, scan.v_opt, to_db(scan.v_opt), scan.x_opt,
                         scan.t_p_opt, scan.t_c_opt))
    _emit(cfg, prefix,
          ["od", "omega", "v_opt", "v_opt_db", "delta_opt", "t_p", "t_c"],
          rows, dict(cfg.params), {},
          {"omega_grid": [omegas[0], omegas[-1], omegas.size],
           "od_values": list(_OD_FAMILY)})
    return f"figure {cfg.figure_id}: {len(rows)} optimized points written"


def _run_figure_settings_curves(cfg, prefix):
    omegas = _axis(cfg, "omega", (0.1, 4.0, 41))
    delta = float(cfg.params.get("delta", 0.02))
    rows = []
    for setting in DETUNING_SETTINGS:
        for sign in (+1.0, -1.0):
            for om in omegas:
                try:
                    res = _squeeze_at(cfg, omega=om, delta=sign * delta,
                                      setting=setting)
                    rows.append((setting, sign * delta, om,
                                 res.variance, res.variance_db, ""))
                except CptError as err:
                    rows.append((setting, sign * delta, om, "", "", str(err)))
    _emit(cfg, prefix,
          ["setting", "delta", "omega", "variance", "variance_db", "error"],
          rows, dict(cfg.params), {},
          {"omega_grid": [omegas[0], omegas[-1], omegas.size]})
    return f"figure s1: {len(rows)} points written"


def _run_figure_ratio_curves(cfg, prefix):
    deltas = _axis(cfg, "delta", (0.0, 0.1, 41))
    omega_c = abs(cfg.params.get("omega_c", 1.0))
    rows = []
    for r in cfg.ratios:
        for de in deltas:
            try:
                res = _squeeze_at(cfg, omega_p=r * omega_c, omega_c=omega_c,
                                  delta=de)
                rows.append((r, de, res.variance, res.variance_db, ""))
            except CptError as err:
                rows.append((r, de, "", "", str(err)))
    _emit(cfg, prefix, ["ratio", "delta", "variance", "variance_db", "error"],
          rows, dict(cfg.params), {},
          {"delta_grid": [deltas[0], deltas[-1], deltas.size],
           "ratios": list(cfg.ratios)})
    return f"figure s2: {len(rows)} points written"


_HANDLERS = {
    "steady": _run_steady,
    "propagate": _run_propagate,
    "squeeze": _run_squeeze,
    "optimize-rabi": _run_optimize_rabi,
    "optimize-detuning": _run_optimize_detuning,
    "sweep": _run_sweep,
    "spectrum": _run_spectrum,
    "ratio-scan": _run_ratio_scan,
    "compare-settings": _run_compare_settings,
    "figure": _run_figure,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        cfg = parse_cli(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    except ParameterError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARAMS
    try:
        summary = run_config(cfg)
    except (ParameterError, KeyError) as err:
        print(f"error: invalid parameters: {err}", file=sys.stderr)
        return EXIT_PARAMS
    except (CptError, FeatureUndefinedError) as err:
        print(f"error: numerical failure: {err}", file=sys.stderr)
        return EXIT_NUMERICS
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
