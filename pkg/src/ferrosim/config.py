"""JSON run-configuration loading with per-key unit suffixes.

A config is a JSON object with the sections material, dielectric
(optional), electrodes (optional), device, grid, experiment, solver
(optional) and output (optional). Values are SI under their bare key
name; appending a known unit suffix declares the unit instead, e.g.
"t_f_nm": 10 or "p_r_uC_cm2": 25. The loader materializes every default
into a fully-resolved SI tree, which the CLI writes to the run manifest;
feeding a manifest back in reproduces the run bit for bit.

Landau coefficients are always derived from (p_r, e_c) via
calibrate_landau; gamma is accepted as an extra input but never
calibrated.
"""

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import PolarizationGrid, SolverOptions, apply_disorder, uniform_grid
from .materials import DielectricLayer, FerroMaterial, StackConfig, calibrate_landau
from .waveforms import PresetPulse

__all__ = ["ConfigError", "RunConfig", "load_config", "load_config_dict"]

EXPERIMENT_KINDS = ("hysteresis", "reversal", "fit", "scurve", "nc-check")

# suffix -> factor to SI, grouped per quantity
_SUFFIXES = {
    "length": {"": 1.0, "_m": 1.0, "_nm": 1e-9},
    "field": {"": 1.0, "_Vm": 1.0, "_MV_cm": 1e8},
    "charge_density": {"": 1.0, "_Cm2": 1.0, "_uC_cm2": 1e-2},
    "area": {"": 1.0, "_m2": 1.0, "_um2": 1e-12},
    "time": {"": 1.0, "_s": 1.0},
    "voltage": {"": 1.0, "_V": 1.0},
    "plain": {"": 1.0},
}


class ConfigError(ValueError):
    """Malformed or incomplete run configuration."""


def _pick(section: dict, name: str, quantity: str, default=None, required: bool = False):
    """Fetch `name` from `section`, honoring unit suffixes; returns SI."""
    hits = []
    for suffix, factor in _SUFFIXES[quantity].items():
        key = name + suffix
        if key in section:
            hits.append((key, factor))
    if len(hits) > 1:
        raise ConfigError(f"conflicting keys for {name!r}: {[k for k, _ in hits]}")
    if not hits:
        if required:
            raise ConfigError(f"missing required key {name!r} "
                              f"(suffixes allowed: {list(_SUFFIXES[quantity])})")
        return default
    key, factor = hits[0]
    value = section[key]
    if isinstance(value, (list, tuple)):
        return [float(v) * factor for v in value]
    return float(value) * factor


@dataclass(frozen=True)
class RunConfig:
    stack: StackConfig
    grid: PolarizationGrid
    experiment: dict
    solver: SolverOptions
    out_dir: Path
    runname: str
    seed: int
    resolved: dict


def load_config(path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return load_config_dict(raw)


def load_config_dict(raw: dict) -> RunConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    if "resolved_config" in raw:   # a manifest from a previous run
        raw = raw["resolved_config"]

    mat_sec = raw.get("material")
    if not isinstance(mat_sec, dict):
        raise ConfigError("missing 'material' section")
    p_r = _pick(mat_sec, "p_r", "charge_density", required=True)
    e_c = _pick(mat_sec, "e_c", "field", required=True)
    alpha, beta = calibrate_landau(p_r, e_c)
    mat = FerroMaterial(
        alpha=alpha,
        beta=beta,
        gamma=float(mat_sec.get("gamma", 0.0)),
        k=_pick(mat_sec, "k", "plain", required=True),
        rho=_pick(mat_sec, "rho", "plain", required=True),
        eps_f=_pick(mat_sec, "eps_f", "plain", required=True),
        t_f=_pick(mat_sec, "t_f", "length", required=True),
    )

    dielectric = None
    if "dielectric" in raw and raw["dielectric"]:
        d = raw["dielectric"]
        dielectric = DielectricLayer(eps_d=_pick(d, "eps_d", "plain", required=True),
                                     t_d=_pick(d, "t_d", "length", required=True))
    screen = None
    if "electrodes" in raw and raw["electrodes"]:
        e = raw["electrodes"]
        lam = _pick(e, "lambda", "length", default=0.0)
        if lam > 0.0:
            screen = DielectricLayer(eps_d=_pick(e, "eps_e", "plain", required=True),
                                     t_d=lam)

    dev = raw.get("device")
    if not isinstance(dev, dict):
        raise ConfigError("missing 'device' section")
    area = _pick(dev, "area", "area", required=True)
    stack = StackConfig(ferro=mat, area=area, dielectric=dielectric,
                        electrode_screen=screen)

    grid_sec = raw.get("grid", {})
    n_cells = int(grid_sec.get("n_cells", 1))
    dx = _pick(grid_sec, "dx", "length", default=5e-9)
    boundary = grid_sec.get("boundary", "zero-flux")
    p0 = _pick(grid_sec, "p0", "charge_density", default=-p_r)
    disorder = grid_sec.get("disorder", {})
    sigma_rel = float(disorder.get("sigma_rel", 0.0))
    seed = int(raw.get("seed", disorder.get("seed", 0)))
    grid = uniform_grid(n_cells, dx, p0=p0, boundary=boundary)
    grid = apply_disorder(grid, seed=seed, sigma_rel=sigma_rel)

    exp_sec = raw.get("experiment")
    if not isinstance(exp_sec, dict):
        raise ConfigError("missing 'experiment' section")
    kind = exp_sec.get("kind")
    if kind not in EXPERIMENT_KINDS:
        raise ConfigError(f"experiment.kind must be one of {EXPERIMENT_KINDS}, got {kind!r}")
    experiment = _resolve_experiment(kind, exp_sec)

    sol_sec = raw.get("solver", {})
    solver = SolverOptions(
        dt0=_pick(sol_sec, "dt0", "time", default=1e-12),
        dt_min=_pick(sol_sec, "dt_min", "time", default=1e-21),
        dt_max=_pick(sol_sec, "dt_max", "time", default=1e-6),
        energy_rejection=float(sol_sec.get("energy_rejection", 1e-10)),
        max_steps=int(sol_sec.get("max_steps", 20_000_000)),
        record_stride=int(sol_sec.get("record_stride", 1)),
    )

    out_sec = raw.get("output", {})
    out_dir = Path(out_sec.get("directory", "."))
    runname = str(out_sec.get("runname", "run"))

    resolved = _resolved_tree(p_r, e_c, mat, dielectric, screen, area, n_cells,
                              dx, boundary, p0, sigma_rel, seed, kind,
                              experiment, solver, out_dir, runname)
    return RunConfig(stack=stack, grid=grid, experiment=experiment, solver=solver,
                     out_dir=out_dir, runname=runname, seed=seed, resolved=resolved)


def _resolve_experiment(kind: str, sec: dict) -> dict:
    """Materialize experiment defaults; accepts both the user schema (nested
    waveform/t_grid/preset sections) and the flat resolved-manifest form."""
    exp = {"kind": kind}
    if kind == "hysteresis":
        wf = sec.get("waveform", sec)
        if not isinstance(wf, dict):
            raise ConfigError("hysteresis needs an experiment.waveform section")
        amplitude = _pick(wf, "amplitude", "voltage", required=True)
        period = _pick(wf, "period", "time", required=True)
        cycles = int(wf.get("cycles", 2))
        sample_interval = _pick(wf, "sample_interval", "time",
                                default=period / 2048.0)
        preset_amplitude = _pick(wf, "preset_amplitude", "voltage",
                                 default=-1.5 * amplitude)
        preset_width = _pick(wf, "preset_width", "time",
                             default=100.0 * sample_interval)
        exp.update(amplitude=amplitude, period=period, cycles=cycles,
                   sample_interval=sample_interval,
                   preset_amplitude=preset_amplitude, preset_width=preset_width)
    elif kind == "reversal":
        e_list = _pick(sec, "e_list", "field")
        if not e_list:
            raise ConfigError("reversal needs a non-empty experiment.e_list")
        tg = sec.get("t_grid", sec)
        t_start = _pick(tg, "t_start" if tg is sec else "start", "time", default=1e-9)
        t_stop = _pick(tg, "t_stop" if tg is sec else "stop", "time", default=1e-4)
        points = int(tg.get("points", 60))
        preset = sec.get("preset", None)
        if preset is not None:
            preset_amplitude = _pick(preset, "amplitude", "voltage", required=True)
            preset_width = _pick(preset, "width", "time", required=True)
            relax_width = _pick(preset, "relax_width", "time", default=0.0)
        else:
            preset_amplitude = _pick(sec, "preset_amplitude", "voltage", required=True)
            preset_width = _pick(sec, "preset_width", "time", required=True)
            relax_width = _pick(sec, "relax_width", "time", default=0.0)
        exp.update(e_list=list(e_list), t_start=t_start, t_stop=t_stop,
                   points=points, preset_amplitude=preset_amplitude,
                   preset_width=preset_width, relax_width=relax_width)
    elif kind == "fit":
        exp.update(input_csv=sec.get("input_csv"),
                   model=sec.get("model", "auto"))
        if exp["model"] not in ("kai", "nls", "auto"):
            raise ConfigError(f"experiment.model must be kai|nls|auto, got {exp['model']!r}")
    # scurve / nc-check need no extra keys
    return exp


def _resolved_tree(p_r, e_c, mat, dielectric, screen, area, n_cells, dx,
                   boundary, p0, sigma_rel, seed, kind, experiment, solver,
                   out_dir, runname) -> dict:
    tree = {
        "material": {"p_r": p_r, "e_c": e_c, "gamma": mat.gamma, "k": mat.k,
                     "rho": mat.rho, "eps_f": mat.eps_f, "t_f": mat.t_f},
        "device": {"area": area},
        "grid": {"n_cells": n_cells, "dx": dx, "boundary": boundary, "p0": p0,
                 "disorder": {"seed": seed, "sigma_rel": sigma_rel}},
        "seed": seed,
        "experiment": dict(experiment),
        "solver": {"dt0": solver.dt0, "dt_min": solver.dt_min,
                   "dt_max": solver.dt_max,
                   "energy_rejection": solver.energy_rejection,
                   "max_steps": solver.max_steps,
                   "record_stride": solver.record_stride},
        "output": {"directory": str(out_dir), "runname": runname},
    }
    if dielectric is not None:
        tree["dielectric"] = {"eps_d": dielectric.eps_d, "t_d": dielectric.t_d}
    if screen is not None:
        tree["electrodes"] = {"lambda": screen.t_d, "eps_e": screen.eps_d}
    return tree


def reversal_preset(config: RunConfig) -> PresetPulse:
    exp = config.experiment
    return PresetPulse(amplitude=exp["preset_amplitude"], width=exp["preset_width"])


def reversal_t_grid(config: RunConfig) -> np.ndarray:
    exp = config.experiment
    return np.logspace(np.log10(exp["t_start"]), np.log10(exp["t_stop"]),
                       exp["points"])
