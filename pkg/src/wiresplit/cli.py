"""Command-line surface: design, simulate, sweep, validate.

Jobs are described by flat JSON config files whose field names carry their
units (``b_um``, ``v0_m_per_s``, ``tau_s``, ...); micrometre fields are
converted to SI on load so that every number in every output file is SI.
The human-readable summary on stdout uses micrometres and amperes.

Exit codes: 0 success, 2 invalid config, 3 design failure, 4 singularity.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .designer import (
    DesignFailure,
    DesignSpec,
    design_trajectories,
)
from .field import WireSingularityError
from .integrator import (
    DEFAULT_CONTROL,
    StepControl,
    StiffnessError,
    event_log_dict,
    kernel_backend,
    simulate,
    write_trajectory_csv,
)
from .model import (
    InfeasibleDesignError,
    PacketState,
    ScatteringInputs,
    Wire,
    default_medium,
    make_medium,
)
from .sweep import default_velocity_grid, validate_analytic, velocity_sweep

EXIT_CONFIG = 2
EXIT_DESIGN = 3
EXIT_SINGULARITY = 4

_UM = 1e-6


class ConfigError(ValueError):
    pass


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path} is not valid JSON (line {exc.lineno}, "
            f"column {exc.colno}): {exc.msg}"
        ) from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path} must be a JSON object")
    return cfg


def _take(cfg: dict, schema: dict, where: str) -> dict:
    """Pull and convert fields per schema {name: (required, converter)}."""
    out = {}
    for name, (required, convert) in schema.items():
        if name in cfg:
            try:
                out[name] = convert(cfg[name])
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"field {name!r} in {where}: {exc}") from exc
        elif required:
            raise ConfigError(f"missing required field {name!r} in {where}")
    unknown = set(cfg) - set(schema)
    if unknown:
        raise ConfigError(
            f"unknown field(s) in {where}: {', '.join(sorted(unknown))}"
        )
    return out


def _um(v):
    return float(v) * _UM


def _medium_from(params: dict):
    if "chi_m_m3_per_kg" in params:
        return make_medium(params["chi_m_m3_per_kg"])
    return default_medium()


def _control_from(params: dict, tolerance_override):
    rtol = tolerance_override if tolerance_override is not None \
        else params.get("rtol", DEFAULT_CONTROL.rtol)
    if "guard_radius_um" in params:
        guard = params["guard_radius_um"] * _UM
    else:
        guard = DEFAULT_CONTROL.guard_radius
    return StepControl(
        rtol=rtol,
        atol=params.get("atol_m", DEFAULT_CONTROL.atol),
        guard_radius=guard,
    )


_DESIGN_SCHEMA = {
    "scheme": (True, str),
    "v0_m_per_s": (True, float),
    "b_um": (True, _um),
    "x0_um": (True, _um),
    "tau_s": (True, float),
    "chi_m_m3_per_kg": (False, float),
    "closure_tolerance_m": (False, float),
    "shoot_max_iterations": (False, int),
    "mass_kg": (False, float),  # metadata only; the dynamics is mass-free
    "rtol": (False, float),
    "atol_m": (False, float),
    "guard_radius_um": (False, float),
}


def _cmd_design(args) -> int:
    cfg = _load_config(args.config)
    params = _take(cfg, _DESIGN_SCHEMA, "design config")
    if params["scheme"] not in ("triangular", "inverse"):
        raise ConfigError(
            f"field 'scheme': expected 'triangular' or 'inverse', "
            f"got {params['scheme']!r}"
        )
    inputs = ScatteringInputs(
        v0=params["v0_m_per_s"], b=params["b_um"],
        x0=params["x0_um"], tau=params["tau_s"],
    )
    spec = DesignSpec(
        scheme=params["scheme"],
        inputs=inputs,
        closure_tolerance=params.get("closure_tolerance_m", 1e-8),
        shoot_max_iterations=params.get("shoot_max_iterations", 80),
    )
    medium = _medium_from(params)
    control = _control_from(params, args.tolerance)

    result, top, bottom = design_trajectories(spec, medium, control)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {
        "scheme": spec.scheme,
        "config": cfg,
        "backend": kernel_backend(),
        **result.to_dict(),
    }
    (out / "result.json").write_text(json.dumps(payload, indent=2) + "\n")
    write_trajectory_csv(top, out / "trajectory_top.csv")
    write_trajectory_csv(bottom, out / "trajectory_bottom.csv")
    (out / "events_top.json").write_text(
        json.dumps(event_log_dict(top), indent=2) + "\n")

    w = result.wires
    print(f"scheme:                {spec.scheme}")
    print(f"splitting wire:        {w[0].current:.6f} A at "
          f"({w[0].x / _UM:.3f}, {w[0].z / _UM:.3f}) um")
    print(f"deflector wires:       {w[1].current:.6f} A at "
          f"({w[1].x / _UM:.3f}, +/-{abs(w[1].z) / _UM:.3f}) um")
    print(f"max separation:        {result.max_separation / _UM:.3f} um")
    print(f"closure error:         {result.closure_error:.3e} m")
    print(f"return time:           {result.return_time:.6f} s")
    print(f"return velocity:       ({result.return_velocity[0]:.6f}, "
          f"{result.return_velocity[1]:.6f}) m/s")
    dists = ", ".join(f"{d / _UM:.4f}" for d in result.min_distance_per_wire)
    print(f"closest approach:      {dists} um")
    print(f"required density:      {result.min_current_density * 1e-12:.4f} A/um^2")
    print(f"peak field:            {result.peak_field:.4f} T")
    print(f"outputs:               {out}/")
    return 0


_SIMULATE_SCHEMA = {
    "wires": (True, list),
    "initial": (True, dict),
    "duration_s": (True, float),
    "chi_m_m3_per_kg": (False, float),
    "mass_kg": (False, float),
    "rtol": (False, float),
    "atol_m": (False, float),
    "guard_radius_um": (False, float),
}

_WIRE_SCHEMA = {
    "x_um": (True, _um),
    "z_um": (True, _um),
    "current_a": (True, float),
}

_INITIAL_SCHEMA = {
    "x_um": (True, _um),
    "z_um": (True, _um),
    "vx_m_per_s": (True, float),
    "vz_m_per_s": (True, float),
    "t_s": (False, float),
}


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    params = _take(cfg, _SIMULATE_SCHEMA, "simulate config")
    wires = []
    for i, wcfg in enumerate(params["wires"]):
        if not isinstance(wcfg, dict):
            raise ConfigError(f"wires[{i}] must be an object")
        w = _take(wcfg, _WIRE_SCHEMA, f"wires[{i}]")
        wires.append(Wire(w["x_um"], w["z_um"], w["current_a"]))
    icfg = _take(params["initial"], _INITIAL_SCHEMA, "initial")
    initial = PacketState(
        x=icfg["x_um"], z=icfg["z_um"],
        vx=icfg["vx_m_per_s"], vz=icfg["vz_m_per_s"],
        t=icfg.get("t_s", 0.0),
    )
    medium = _medium_from(params)
    control = _control_from(params, args.tolerance)

    traj = simulate(initial, wires, medium, params["duration_s"], control)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(traj, out / "trajectory.csv")
    events = {"config": cfg, "backend": kernel_backend(), **event_log_dict(traj)}
    (out / "events.json").write_text(json.dumps(events, indent=2) + "\n")

    print(f"samples:               {len(traj.t)}")
    print(f"apex |z|:              {abs(traj.events.apex.z) / _UM:.4f} um")
    for p in traj.events.periapsis_per_wire:
        print(f"wire {p.wire_index} closest:        {p.distance / _UM:.6f} um")
    print(f"energy drift:          {traj.stats.energy_drift:.3e}")
    print(f"outputs:               {out}/")
    return 0


_SWEEP_SCHEMA = {
    "v0_min_m_per_s": (False, float),
    "v0_max_m_per_s": (False, float),
    "n_points": (False, int),
    "b_um": (False, _um),
    "x0_um": (False, _um),
    "tau_s": (False, float),
    "chi_m_m3_per_kg": (False, float),
}


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    params = _take(cfg, _SWEEP_SCHEMA, "sweep config")
    b = params.get("b_um", 0.5e-6)
    x0 = params.get("x0_um", 300e-6)
    tau = params.get("tau_s", 0.1)
    medium = _medium_from(params)
    if "v0_min_m_per_s" in params or "v0_max_m_per_s" in params:
        v_min = params.get("v0_min_m_per_s", 1.05 * 2.0 * x0 / tau)
        v_max = params.get("v0_max_m_per_s", 2.0)
        grid = np.geomspace(v_min, v_max, params.get("n_points", 50))
    elif "n_points" in params:
        grid = default_velocity_grid(x0, tau, params["n_points"])
    else:
        grid = None

    table = velocity_sweep(grid, b=b, x0=x0, tau=tau, medium=medium)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.format == "json":
        (out / "sweep.json").write_text(
            json.dumps({"config": cfg, "rows": table.to_dicts()}, indent=2) + "\n")
        print(f"wrote {len(table.v0)} rows to {out / 'sweep.json'}")
    else:
        table.write_csv(out / "sweep.csv")
        print(f"wrote {len(table.v0)} rows to {out / 'sweep.csv'}")
    return 0


_VALIDATE_SCHEMA = {
    "b_um_list": (False, list),
    "current_a": (False, float),
    "v0_m_per_s": (False, float),
    "launch_distance_um": (False, _um),
    "region_radius_um": (False, _um),
    "chi_m_m3_per_kg": (False, float),
    "rtol": (False, float),
    "atol_m": (False, float),
    "guard_radius_um": (False, float),
}


def _cmd_validate(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    params = _take(cfg, _VALIDATE_SCHEMA, "validate config")
    b_values = [float(v) * _UM for v in params.get("b_um_list", [0.5, 3.0, 6.0])]
    medium = _medium_from(params)
    control = _control_from(params, args.tolerance)
    rows = validate_analytic(
        b_values=b_values,
        current=params.get("current_a", 2.0),
        v0=params.get("v0_m_per_s", 0.01),
        medium=medium,
        launch_distance=params.get("launch_distance_um", 300e-6),
        region_radius=params.get("region_radius_um"),
        control=control,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "config": cfg,
        "backend": kernel_backend(),
        "rows": [r.to_dict() for r in rows],
    }
    (out / "validation.json").write_text(json.dumps(report, indent=2) + "\n")
    for r in rows:
        print(f"b = {r.b / _UM:6.2f} um: max relative deviation "
              f"{r.max_rel_deviation:.3e} over {r.n_compared} samples")
    print(f"outputs:               {out}/")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiresplit",
        description="Design and simulate diamagnetic wire-deflection trajectories.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs_config in (
        ("design", _cmd_design, True),
        ("simulate", _cmd_simulate, True),
        ("sweep", _cmd_sweep, False),
        ("validate", _cmd_validate, False),
    ):
        p = sub.add_parser(name)
        p.add_argument("--config", required=needs_config,
                       help="path to the JSON job description")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--tolerance", type=float, default=None,
                       help="override the integrator relative tolerance")
        p.add_argument("--format", choices=("csv", "json"), default="csv",
                       help="tabular output format where applicable")
        p.set_defaults(handler=fn)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, InfeasibleDesignError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DesignFailure as exc:
        print(f"design failure: {exc}", file=sys.stderr)
        return EXIT_DESIGN
    except (WireSingularityError, StiffnessError) as exc:
        print(f"integration error: {exc}", file=sys.stderr)
        return EXIT_SINGULARITY


if __name__ == "__main__":
    sys.exit(main())
