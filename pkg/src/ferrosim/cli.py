"""Command-line front end.

Subcommands: hysteresis, reversal, fit, scurve, nc-check. Every run writes
its outputs as <runname>_<kind>.csv plus a <runname>_manifest.json holding
the fully-resolved configuration and tool version; re-running with the
manifest as --config reproduces the outputs bit for bit.

Exit codes: 0 success, 2 usage/config error, 3 numerical failure.
"""

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from . import csvio
from .config import (ConfigError, RunConfig, load_config, reversal_preset,
                     reversal_t_grid)
from .dynamics import StiffnessError
from .experiments import (hysteresis_experiment, loop_waveform_spec,
                          nc_hysteresis_check, reversal_experiment, scurve,
                          switching_time)
from .kinetics import FitError, fit_kai, fit_nls, model_select, kai_model, nls_model
from .materials import StackValidationError
from .units import convert_units
from .waveforms import WaveformError

USAGE_ERRORS = (ConfigError, StackValidationError, WaveformError, FitError,
                ValueError, FileNotFoundError, KeyError)
NUMERICAL_ERRORS = (StiffnessError, RuntimeError, FloatingPointError)


class _RunWriter:
    """Collects output paths so a failed run leaves no partial files."""

    def __init__(self, out_dir: Path, runname: str):
        self.out_dir = Path(out_dir)
        self.runname = runname
        self.written = []

    def path(self, kind: str, ext: str = "csv") -> Path:
        self.out_dir.mkdir(parents=True, exist_ok=True)
        p = self.out_dir / f"{self.runname}_{kind}.{ext}"
        self.written.append(p)
        return p

    def cleanup(self):
        for p in self.written:
            try:
                p.unlink()
            except OSError:
                pass


def _write_manifest(writer: _RunWriter, command: str, config: RunConfig):
    payload = {
        "tool": "ferrosim",
        "version": __version__,
        "command": command,
        "seed": config.seed,
        "resolved_config": config.resolved,
    }
    writer.path("manifest", "json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _load(args) -> RunConfig:
    config = load_config(args.config)
    overrides = {}
    if args.out is not None:
        overrides["out_dir"] = Path(args.out)
    if args.seed is not None:
        overrides["seed"] = int(args.seed)
    if not overrides:
        return config
    # seed overrides re-enter through the resolved tree so manifests stay exact
    resolved = json.loads(json.dumps(config.resolved))
    if "seed" in overrides:
        resolved["seed"] = overrides["seed"]
        resolved["grid"]["disorder"]["seed"] = overrides["seed"]
    if "out_dir" in overrides:
        resolved["output"]["directory"] = str(overrides["out_dir"])
    from .config import load_config_dict
    return load_config_dict(resolved)


def cmd_hysteresis(args) -> int:
    config = _load(args)
    writer = _RunWriter(config.out_dir, config.runname)
    try:
        exp = config.experiment
        if exp["kind"] != "hysteresis":
            raise ConfigError(f"config experiment.kind is {exp['kind']!r}, expected 'hysteresis'")
        spec = loop_waveform_spec(
            amplitude=exp["amplitude"], period=exp["period"], cycles=exp["cycles"],
            sample_interval=exp["sample_interval"],
            preset_amplitude=exp["preset_amplitude"], preset_width=exp["preset_width"])
        result = hysteresis_experiment(config.stack, config.grid, spec, config.solver)
        csvio.write_loop_csv(writer.path("loop"), result.e_fe, result.p_t)
        csvio.write_trace_csv(writer.path("trace"), result.trace)
        if result.metrics is not None:
            m = result.metrics
            csvio.write_metrics_csv(writer.path("metrics"), m)
            print(f"P_r = {convert_units(m.p_r_pos, 'C/m2', 'uC/cm2'):.3f} / "
                  f"{convert_units(m.p_r_neg, 'C/m2', 'uC/cm2'):.3f} uC/cm2")
            print(f"E_C = {convert_units(m.e_c_pos, 'V/m', 'MV/cm'):.4f} / "
                  f"{convert_units(m.e_c_neg, 'V/m', 'MV/cm'):.4f} MV/cm")
        else:
            print("non-switching loop: no P_T zero crossing, metrics not written")
        _write_manifest(writer, "hysteresis", config)
    except Exception:
        writer.cleanup()
        raise
    return 0


def _reversal_worker(payload):
    stack, grid, field, t_grid, preset, options, relax_width = payload
    return reversal_experiment(stack, grid, [field], t_grid, preset, options,
                               relax_width=relax_width)[0]


def cmd_reversal(args) -> int:
    config = _load(args)
    writer = _RunWriter(config.out_dir, config.runname)
    try:
        exp = config.experiment
        if exp["kind"] != "reversal":
            raise ConfigError(f"config experiment.kind is {exp['kind']!r}, expected 'reversal'")
        e_list = exp["e_list"]
        t_grid = reversal_t_grid(config)
        preset = reversal_preset(config)
        relax_width = exp.get("relax_width", 0.0)
        jobs = max(1, int(args.jobs))
        if jobs > 1 and len(e_list) > 1:
            payloads = [(config.stack, config.grid, e, t_grid, preset,
                         config.solver, relax_width) for e in e_list]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                curves = list(pool.map(_reversal_worker, payloads))
        else:
            curves = reversal_experiment(config.stack, config.grid, e_list,
                                         t_grid, preset, config.solver,
                                         relax_width=relax_width)
        csvio.write_reversal_csv(writer.path("reversal"), curves)
        t_sw = [switching_time(c) for c in curves]
        csvio.write_switching_csv(writer.path("switching"), e_list, t_sw)
        for e, t in zip(e_list, t_sw):
            label = "never reached" if t is None else f"{t:.4e} s"
            print(f"E = {convert_units(e, 'V/m', 'MV/cm'):.4f} MV/cm  t_50 = {label}")
        _write_manifest(writer, "reversal", config)
    except Exception:
        writer.cleanup()
        raise
    return 0


def _fit_one(model: str, t, dp):
    if model == "kai":
        params, residual = fit_kai(t, dp)
        return ("KAI", params, residual, None)
    if model == "nls":
        params, residual = fit_nls(t, dp)
        return ("NLS", params, residual, None)
    sel = model_select(t, dp)
    if sel.selected == "KAI":
        return ("KAI", sel.kai, sel.kai_residual, sel)
    return ("NLS", sel.nls, sel.nls_residual, sel)


def cmd_fit(args) -> int:
    config = _load(args)
    writer = _RunWriter(config.out_dir, config.runname)
    try:
        exp = config.experiment
        if exp["kind"] != "fit":
            raise ConfigError(f"config experiment.kind is {exp['kind']!r}, expected 'fit'")
        input_csv = args.input or exp.get("input_csv")
        if not input_csv:
            raise ConfigError("fit needs an input CSV (--input or experiment.input_csv)")
        model = args.model or exp.get("model", "auto")
        try:
            curves = csvio.read_reversal_csv(input_csv)
        except ValueError:
            t, dp = csvio.read_two_column_csv(input_csv)
            curves = [(0.0, t, dp)]
        param_rows = []
        fitted = []
        for field, t, dp in curves:
            name, params, residual, sel = _fit_one(model, t, dp)
            if name == "KAI":
                param_rows.append(("KAI", params.p_s, params.tau, params.n,
                                   "", "", residual))
                dp_fit = kai_model(t, params)
            else:
                param_rows.append(("NLS", params.p_s, "", params.n,
                                   params.log_tau_med, params.w, residual))
                dp_fit = nls_model(t, params)
            fitted.append((field, t, dp_fit))
            note = "" if sel is None else f"  (selected over {('NLS' if name == 'KAI' else 'KAI')}, dAIC={abs(sel.aic_kai - sel.aic_nls):.2f})"
            print(f"field {field:.4e} V/m: {name} rms residual {residual:.4e} C/m2{note}")
        csvio.write_fit_csv(writer.path("fit"), param_rows)
        csvio.write_family_csv(writer.path("fitted"), fitted)
        _write_manifest(writer, "fit", config)
    except Exception:
        writer.cleanup()
        raise
    return 0


def cmd_scurve(args) -> int:
    config = _load(args)
    writer = _RunWriter(config.out_dir, config.runname)
    try:
        curve = scurve(config.stack.ferro)
        csvio.write_scurve_csv(writer.path("scurve"), curve)
        print(f"NC region: ({curve.nc_lower:.6e}, {curve.nc_upper:.6e}) C/m2")
        _write_manifest(writer, "scurve", config)
    except Exception:
        writer.cleanup()
        raise
    return 0


def cmd_nc_check(args) -> int:
    config = _load(args)
    writer = _RunWriter(config.out_dir, config.runname)
    try:
        curve = scurve(config.stack.ferro)
        csvio.write_scurve_csv(writer.path("scurve"), curve)
        check = nc_hysteresis_check(config.stack)
        print(f"nc-check: {check.verdict} (min dV/dP = {check.min_dv_dp:.4e} V*m^2/C, "
              f"t_eff = {check.t_eff:.4e} m)")
        _write_manifest(writer, "nc-check", config)
    except Exception:
        writer.cleanup()
        raise
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, metavar="PATH",
                        help="JSON run config or a previous run's manifest")
    common.add_argument("--out", default=None, metavar="DIR",
                        help="override output directory")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker processes for sweeps")
    common.add_argument("--seed", type=int, default=None, metavar="U64",
                        help="override the config seed")

    parser = argparse.ArgumentParser(
        prog="ferrosim",
        description="Ferroelectric capacitor stack simulator and analysis toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hysteresis", parents=[common],
                       help="P-E loop experiment: loop, metrics and trace CSVs")
    p.set_defaults(func=cmd_hysteresis)

    p = sub.add_parser("reversal", parents=[common],
                       help="polarization-reversal sweep: family and switching-time CSVs")
    p.set_defaults(func=cmd_reversal)

    p = sub.add_parser("fit", parents=[common],
                       help="fit switching-kinetics models to (t, delta_p) curves")
    p.add_argument("--input", default=None, metavar="CSV",
                   help="two-column (t, delta_p) or reversal-family CSV")
    p.add_argument("--model", default=None, choices=["kai", "nls", "auto"],
                   help="force a model or pick by AIC (auto)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("scurve", parents=[common],
                       help="quasi-static E(P) with negative-capacitance bounds")
    p.set_defaults(func=cmd_scurve)

    p = sub.add_parser("nc-check", parents=[common],
                       help="classify a series stack as hysteretic or stabilized")
    p.set_defaults(func=cmd_nc_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NUMERICAL_ERRORS as exc:
        print(f"ferrosim: numerical failure: {exc}", file=sys.stderr)
        return 3
    except USAGE_ERRORS as exc:
        print(f"ferrosim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
