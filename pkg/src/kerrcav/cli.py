"""Command-line front end: config parsing, scenario dispatch, report emission.

Configs are JSON documents; any physical rate may be given either as an
absolute number in s^-1 or as a multiple of g with a suffix, e.g. "10g"
(g itself must be absolute).  Unknown keys are rejected by name.  Exit
codes: 0 success, 2 validation error, 3 guard/physics failure.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import CalibrationError, GuardError, KerrcavError, ValidationError
from . import experiments, regimes
from .experiments import (SCENARIOS, apply_overrides, cross_params,
                          fig3b_params, sweep, write_outputs)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_GUARD = 3

RATE_KEYS = {"g", "delta1", "theta", "lam", "delta2", "omega",
             "g_b", "delta1_b", "mode_split"}
KNOWN_TOP_KEYS = {"scheme", "tier", "mode", "scenario", "params", "grid",
                  "frame_calibration", "sweep", "output", "jobs", "strict",
                  "thresholds"}
KNOWN_GRID_KEYS = {"points", "n_max"}
KNOWN_SWEEP_KEYS = {"param", "values"}
KNOWN_OUTPUT_KEYS = {"dir"}


def parse_rate(value, g: float | None, key: str) -> float:
    """A rate: a number, or a string like '10g' scaled by the absolute g."""
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        txt = value.strip()
        if txt.endswith("g"):
            if g is None:
                raise ValidationError(
                    f"config key params.{key}: '{value}' needs an absolute g")
            try:
                factor = float(txt[:-1]) if txt[:-1] else 1.0
            except ValueError:
                raise ValidationError(
                    f"config key params.{key}: cannot parse rate {value!r}")
            return factor * g
        try:
            return float(txt)
        except ValueError:
            raise ValidationError(
                f"config key params.{key}: cannot parse rate {value!r}")
    raise ValidationError(f"config key params.{key}: expected a rate, got {value!r}")


def _reject_unknown(mapping: dict, known: set, where: str):
    unknown = sorted(set(mapping) - known)
    if unknown:
        raise ValidationError(f"unknown config key {where}{unknown[0]!r}")


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"config {path}: invalid JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}")
    if not isinstance(cfg, dict):
        raise ValidationError(f"config {path}: top level must be an object")
    return cfg


def resolve_config(cfg: dict) -> dict:
    """Validate keys and convert rate strings to absolute numbers."""
    _reject_unknown(cfg, KNOWN_TOP_KEYS, "")
    out = dict(cfg)
    params = dict(cfg.get("params", {}))
    if not isinstance(params, dict):
        raise ValidationError("config key 'params' must be an object")
    known_params = {f for f in RATE_KEYS} | {"n_atoms"}
    _reject_unknown(params, known_params, "params.")
    g_raw = params.get("g")
    g = float(g_raw) if isinstance(g_raw, (int, float)) else None
    resolved = {}
    for key, value in params.items():
        if key == "n_atoms":
            resolved[key] = int(value)
        else:
            resolved[key] = parse_rate(value, g, key)
    out["params"] = resolved
    if "grid" in cfg:
        _reject_unknown(dict(cfg["grid"]), KNOWN_GRID_KEYS, "grid.")
    if "sweep" in cfg:
        _reject_unknown(dict(cfg["sweep"]), KNOWN_SWEEP_KEYS, "sweep.")
    if "output" in cfg:
        _reject_unknown(dict(cfg["output"]), KNOWN_OUTPUT_KEYS, "output.")
    fc = cfg.get("frame_calibration", "per_branch")
    if fc not in ("per_branch", "n1_shared"):
        raise ValidationError(
            f"config key 'frame_calibration': unknown value {fc!r}")
    return out


def base_params_for(cfg: dict):
    scheme = cfg.get("scheme", "self_kerr")
    if scheme == "self_kerr":
        return fig3b_params()
    if scheme == "cross_polarization":
        return cross_params("polarization")
    if scheme == "cross_toroidal":
        return cross_params("toroidal")
    raise ValidationError(f"unknown scheme {scheme!r}")


def _scenario_kwargs(cfg: dict, args) -> dict:
    grid = dict(cfg.get("grid", {}))
    kw = {}
    points = args.grid_points or grid.get("points")
    if points:
        kw["grid_points"] = int(points)
    if grid.get("n_max"):
        kw["n_max"] = int(grid["n_max"])
    return kw


def _maybe_strict_regime(p, cfg, args) -> None:
    if not (args.strict or cfg.get("strict")):
        return
    report = regimes.check(p, cfg.get("thresholds"))
    if report.worst_status != "pass":
        bad = [name for name, r in report.ratios.items() if r.status == "warn"]
        raise GuardError(f"regime check failed under --strict: {bad}")


def cmd_run(args) -> int:
    cfg = resolve_config(load_config(args.config))
    scenario = args.scenario or cfg.get("scenario")
    if scenario is None:
        raise ValidationError("no scenario given (argument or config)")
    if scenario == "cross":
        scheme = cfg.get("scheme", "cross_polarization")
        scenario = {"cross_polarization": "cross_polarization",
                    "cross_toroidal": "cross_toroidal"}.get(scheme)
        if scenario is None:
            raise ValidationError(
                f"scenario 'cross' needs a cross_* scheme, got {scheme!r}")
    if scenario not in SCENARIOS:
        raise ValidationError(
            f"unknown scenario {scenario!r}; try list-scenarios")
    overrides = cfg.get("params", {})
    base = apply_overrides(base_params_for(cfg), overrides)
    _maybe_strict_regime(base, cfg, args)

    kw = _scenario_kwargs(cfg, args)
    if scenario in ("fig3a", "fig3b"):
        if args.mode or cfg.get("mode"):
            kw["mode"] = args.mode or cfg["mode"]
        tier = args.tier or cfg.get("tier")
        if tier:
            kw["tier"] = {"full": "full", "eliminated": "eliminated"}[tier]
        kw["frame_calibration"] = (args.frame_calibration
                                   or cfg.get("frame_calibration", "per_branch"))
    result = SCENARIOS[scenario](overrides, **kw)
    outdir = args.out or cfg.get("output", {}).get("dir", "out")
    paths = write_outputs(result, outdir)
    print(json.dumps({"scenario": scenario, "outputs": paths},
                     sort_keys=True, indent=2))
    return EXIT_OK


def cmd_check_regime(args) -> int:
    cfg = resolve_config(load_config(args.config))
    p = apply_overrides(base_params_for(cfg), cfg.get("params", {}))
    report = regimes.check(p, cfg.get("thresholds"))
    print(json.dumps(experiments._jsonable(report.to_dict()),
                     sort_keys=True, indent=2))
    if (args.strict or cfg.get("strict")) and report.worst_status != "pass":
        return EXIT_GUARD
    return EXIT_OK


def cmd_calibrate(args) -> int:
    from .hilbert import build_space
    from .pulses import calibrate_pulse_phase

    cfg = resolve_config(load_config(args.config))
    p = apply_overrides(base_params_for(cfg), cfg.get("params", {}))
    space = build_space(n_max=max(2, int(cfg.get("grid", {}).get("n_max", 2))),
                        n_atoms=1, levels=2)
    pulse = calibrate_pulse_phase(space, p if p.n_atoms == 1
                                  else apply_overrides(p, {"n_atoms": 1}))
    frame = experiments.calibrate_frame(
        p, calibration=pulse,
        grid_points=int(cfg.get("grid", {}).get("points", 512)))
    print(json.dumps(experiments._jsonable({
        "pulse": {"phi_forward": pulse.phi_forward,
                  "phi_inverse": pulse.phi_inverse,
                  "beta": pulse.beta, "fidelity": pulse.fidelity},
        "frame": {"r_lin": frame.r_lin, "expected": frame.expected,
                  "objective": frame.objective, "flagged": frame.flagged},
    }), sort_keys=True, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = resolve_config(load_config(args.config))
    sweep_cfg = dict(cfg.get("sweep", {}))
    param = args.param or sweep_cfg.get("param")
    if not param:
        raise ValidationError("sweep needs --param or config sweep.param")
    if args.values:
        values = [float(v) for v in args.values.split(",")]
    else:
        values = [float(v) for v in sweep_cfg.get("values", [])]
    if not values:
        raise ValidationError("sweep needs --values or config sweep.values")
    scenario = args.scenario or cfg.get("scenario", "fig3b")
    jobs = args.jobs or int(cfg.get("jobs", 1))
    points = sweep(param, values, scenario,
                   jobs=jobs, overrides=cfg.get("params", {}))
    outdir = args.out or cfg.get("output", {}).get("dir", "out")
    summary = []
    for pt in points:
        entry = {"param": pt.param, "value": pt.value, "ok": pt.ok}
        if pt.ok and hasattr(pt.result, "config"):
            entry["outputs"] = write_outputs(pt.result, outdir)
        if pt.error:
            entry["error"] = pt.error
        summary.append(entry)
    print(json.dumps(experiments._jsonable(summary), sort_keys=True, indent=2))
    return EXIT_OK if all(pt.ok for pt in points) else EXIT_GUARD


def cmd_list_scenarios(_args) -> int:
    for name in sorted(SCENARIOS):
        print(name)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrcav",
        description="Simulate light-shift engineered Kerr nonlinearities "
                    "in a dispersive cavity-QED model.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario and write CSV/JSON")
    run.add_argument("scenario", nargs="?",
                     help="fig3a | fig3b | cross | cross_polarization | "
                          "cross_toroidal | regime_check")
    run.add_argument("--config", help="JSON config file")
    run.add_argument("--out", help="output directory (default: out)")
    run.add_argument("--mode", choices=["ideal", "physical"])
    run.add_argument("--tier", choices=["full", "eliminated"])
    run.add_argument("--grid-points", type=int)
    run.add_argument("--frame-calibration",
                     choices=["per_branch", "n1_shared"])
    run.add_argument("--jobs", type=int, default=0)
    run.add_argument("--strict", action="store_true",
                     help="fail (exit 3) if any regime ratio warns")
    run.set_defaults(func=cmd_run)

    chk = sub.add_parser("check-regime", help="print the regime report")
    chk.add_argument("--config", help="JSON config file")
    chk.add_argument("--strict", action="store_true")
    chk.set_defaults(func=cmd_check_regime)

    cal = sub.add_parser("calibrate",
                         help="pulse-phase and frame-rate calibration")
    cal.add_argument("--config", help="JSON config file")
    cal.set_defaults(func=cmd_calibrate)

    sw = sub.add_parser("sweep", help="run a scenario over parameter values")
    sw.add_argument("--param", help="SchemeParams field to sweep")
    sw.add_argument("--values", help="comma-separated values (absolute s^-1)")
    sw.add_argument("--scenario", help="scenario name (default fig3b)")
    sw.add_argument("--config", help="JSON config file")
    sw.add_argument("--out", help="output directory")
    sw.add_argument("--jobs", type=int, default=0)
    sw.set_defaults(func=cmd_sweep)

    ls = sub.add_parser("list-scenarios", help="list runnable scenarios")
    ls.set_defaults(func=cmd_list_scenarios)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (GuardError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except KerrcavError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD


if __name__ == "__main__":
    sys.exit(main())
