"""Command-line frontend: simulate, sweep, classify, stochastic, version.

Configuration is a flat dotted-key/value text format (``model.s = 0.5``),
overridable per key with ``--set model.s=0.5`` and by a handful of shortcut
flags.  Every run writes a manifest (resolved config, artifact version,
output list, wall-clock duration) next to its outputs; re-running with the
manifest's resolved config reproduces deterministic outputs byte for byte.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .demography import Demography, DemographyVariant
from .models import GenotypeParams, Model, SystemKind, WolbachiaParams
from .solver import (
    Grid1D,
    InitialCondition,
    SimConfig,
    SolverBlowupError,
    _left_values,
    _right_values,
    simulate,
    write_snapshots_csv,
)
from .stochastic import (
    StochasticConfig,
    run_stochastic,
    stochastic_sweep,
    write_stochastic_csv,
)
from .sweep import (
    AxisSpec,
    SweepConfig,
    SweepSolver,
    agreement_report,
    default_workers,
    run_sweep,
    write_sweep_csv,
)
from .theory import analytic_verdict
from .wave import classify_wave, report_csv_row, write_h_table_csv, write_report_csv, REPORT_HEADER


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "model.kind": "density",
    "model.s": 0.5,
    "model.selection": "survival",
    "model.demography": "logistic_b",
    "model.r": 10.0 / 9.0,
    "model.a": 0.0,
    "model.fw": 0.9,
    "model.omega_h": 0.1,
    "solver.x_min": -200.0,
    "solver.x_max": 40.0,
    "solver.nx": 2401,
    "solver.dt": 0.02,
    "solver.t_final": 200.0,
    "solver.snapshot_every": 5.0,
    "solver.interface_x": 0.0,
    "solver.block": 0.95,
    "sweep.axis1.name": "s",
    "sweep.axis1.min": 0.3,
    "sweep.axis1.max": 0.8,
    "sweep.axis1.count": 25,
    "sweep.axis2.name": "r",
    "sweep.axis2.min": 0.1,
    "sweep.axis2.max": 12.0,
    "sweep.axis2.count": 25,
    "sweep.x_min": -250.0,
    "sweep.x_max": 250.0,
    "sweep.nx": 2001,
    "sweep.dt": 0.025,
    "sweep.snapshot_every": 2.5,
    "sweep.chunk": 25.0,
    "sweep.t_min": 100.0,
    "sweep.t_max": 1500.0,
    "sweep.workers": 0,  # 0 -> DRIVEWAVE_WORKERS or cpu count
    "stochastic.demes": 100,
    "stochastic.k": 1000,
    "stochastic.emigration": 0.1,
    "stochastic.t_final": 2000.0,
    "stochastic.seed": 1,
}

_KIND_NAMES = {k.value: k for k in SystemKind}
_DEMO_NAMES = {v.value: v for v in DemographyVariant}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def serialize_config(config: dict) -> str:
    lines = []
    for key in sorted(config):
        lines.append(f"{key} = {format_value(config[key])}")
    return "\n".join(lines) + "\n"


def format_value(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def resolve_config(file_path: str | None, sets: list[str]) -> dict:
    """defaults <- config file <- --set overrides, with type coercion."""
    resolved = dict(DEFAULTS)
    raw: dict[str, str] = {}
    if file_path:
        try:
            raw.update(parse_config_text(Path(file_path).read_text()))
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from exc
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"--set needs key=value, got {item!r}")
        key, value = item.split("=", 1)
        raw[key.strip()] = value.strip()
    for key, value in raw.items():
        if key not in resolved:
            raise ConfigError(f"unknown config key {key!r}")
        resolved[key] = coerce_like(key, resolved[key], value)
    return resolved


def coerce_like(key: str, default, value: str):
    if isinstance(default, bool):
        if value.lower() in ("1", "true", "yes"):
            return True
        if value.lower() in ("0", "false", "no"):
            return False
        raise ConfigError(f"{key}: expected boolean, got {value!r}")
    if isinstance(default, int):
        try:
            return int(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected integer, got {value!r}") from exc
    if isinstance(default, float):
        try:
            return float(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: expected number, got {value!r}") from exc
    return value


def build_model(cfg: dict) -> Model:
    kind_name = cfg["model.kind"]
    if kind_name not in _KIND_NAMES:
        raise ConfigError(f"model.kind: unknown system {kind_name!r} "
                          f"(choose from {sorted(_KIND_NAMES)})")
    demo_name = cfg["model.demography"]
    if demo_name not in _DEMO_NAMES:
        raise ConfigError(f"model.demography: unknown variant {demo_name!r}")
    kind = _KIND_NAMES[kind_name]
    try:
        demo = Demography(_DEMO_NAMES[demo_name], r=cfg["model.r"], a=cfg["model.a"])
        s = cfg["model.s"]
        if kind is SystemKind.WOLBACHIA:
            return Model(kind, demo, wolbachia=WolbachiaParams(cfg["model.fw"], cfg["model.omega_h"]))
        if kind is SystemKind.DENSITY_DRIVE:
            genotype = (
                GenotypeParams.fecundity_selection(s)
                if cfg["model.selection"] == "fecundity"
                else GenotypeParams.survival_selection(s)
            )
            return Model(kind, demo, genotype, s=s)
        return Model(kind, demo, s=s)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_sim_config(cfg: dict, model: Model) -> SimConfig:
    try:
        grid = Grid1D(cfg["solver.x_min"], cfg["solver.x_max"], cfg["solver.nx"])
        return SimConfig(
            model=model,
            grid=grid,
            dt=cfg["solver.dt"],
            t_final=cfg["solver.t_final"],
            snapshot_every=cfg["solver.snapshot_every"],
            initial=InitialCondition(
                cfg["solver.interface_x"],
                _left_values(model),
                _right_values(model, cfg["solver.block"]),
            ),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def build_sweep_config(cfg: dict, model: Model) -> SweepConfig:
    try:
        solver = SweepSolver(
            grid=Grid1D(cfg["sweep.x_min"], cfg["sweep.x_max"], cfg["sweep.nx"]),
            dt=cfg["sweep.dt"],
            snapshot_every=cfg["sweep.snapshot_every"],
            chunk=cfg["sweep.chunk"],
            t_min=cfg["sweep.t_min"],
            t_max=cfg["sweep.t_max"],
        )
        workers = cfg["sweep.workers"] or default_workers()
        return SweepConfig(
            model=model,
            axis1=AxisSpec(cfg["sweep.axis1.name"], cfg["sweep.axis1.min"],
                           cfg["sweep.axis1.max"], cfg["sweep.axis1.count"]),
            axis2=AxisSpec(cfg["sweep.axis2.name"], cfg["sweep.axis2.min"],
                           cfg["sweep.axis2.max"], cfg["sweep.axis2.count"]),
            solver=solver,
            workers=workers,
            selection=cfg["model.selection"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def write_manifest(out_dir: Path, subcommand: str, cfg: dict, outputs: list[str],
                   started: float):
    manifest = {
        "subcommand": subcommand,
        "version": __version__,
        "config": {k: format_value(v) for k, v in sorted(cfg.items())},
        "outputs": outputs,
        "duration_seconds": time.time() - started,
    }
    path = out_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    started = time.time()
    cfg = _apply_shortcuts(resolve_config(args.config, args.set), args)
    model = build_model(cfg)
    sim = build_sim_config(cfg, model)
    out = _out_dir(args)
    snapshots = simulate(sim)
    report = classify_wave(snapshots, sim.grid, model)
    outputs = []
    snap_path = out / "snapshots.csv"
    write_snapshots_csv(snap_path, snapshots, sim.grid)
    outputs.append(snap_path.name)
    report_path = out / "report.csv"
    write_report_csv(report_path, cfg["model.s"], cfg["model.r"], report)
    outputs.append(report_path.name)
    if report.h_table is not None:
        h_path = out / "h_table.csv"
        write_h_table_csv(h_path, report.h_table)
        outputs.append(h_path.name)
    write_manifest(out, "simulate", cfg, outputs, started)
    print(",".join(REPORT_HEADER))
    print(",".join(report_csv_row(cfg["model.s"], cfg["model.r"], report)))
    return 0


def cmd_sweep(args) -> int:
    started = time.time()
    cfg = _apply_shortcuts(resolve_config(args.config, args.set), args)
    model = build_model(cfg)
    sweep_cfg = build_sweep_config(cfg, model)
    out = _out_dir(args)
    cells = run_sweep(sweep_cfg)
    sweep_path = out / "sweep.csv"
    write_sweep_csv(sweep_path, cells)
    write_manifest(out, "sweep", cfg, [sweep_path.name], started)
    agreement = agreement_report(cells)
    print(f"cells={len(cells)} sign_checked={agreement.checked_sign} "
          f"sign_mismatches={len(agreement.sign_mismatches)} "
          f"trivial_cells={agreement.trivial_cells} "
          f"trivial_mismatches={len(agreement.trivial_mismatches)}")
    return 0


def _classify_row(s: float, r: float) -> list[str]:
    verdict = analytic_verdict(s, r)
    if verdict.speed_bounds is None:
        bounds = ""
    else:
        lo, hi = verdict.speed_bounds
        fmt = lambda v: "-inf" if v == -math.inf else ("inf" if v == math.inf else format(v, ".17g"))
        bounds = f"{fmt(lo)}:{fmt(hi)}"
    return [format(s, ".17g"), format(r, ".17g"), str(verdict.trivial_only),
            verdict.sign, verdict.clause, bounds]


def cmd_classify(args) -> int:
    started = time.time()
    cfg = _apply_shortcuts(resolve_config(args.config, args.set), args)
    header = "s,r,trivial_only,sign,clause,bounds"
    if args.grid:
        n1, n2 = _parse_grid(args.grid)
        a1 = AxisSpec(cfg["sweep.axis1.name"], cfg["sweep.axis1.min"], cfg["sweep.axis1.max"], n1)
        a2 = AxisSpec(cfg["sweep.axis2.name"], cfg["sweep.axis2.min"], cfg["sweep.axis2.max"], n2)
        rows = [_classify_row(float(s), float(r)) for s in a1.values() for r in a2.values()]
        out = _out_dir(args)
        path = out / "classify.csv"
        path.write_text(header + "\n" + "\n".join(",".join(row) for row in rows) + "\n")
        write_manifest(out, "classify", cfg, [path.name], started)
        print(f"wrote {len(rows)} rows to {path}")
    else:
        print(header)
        print(",".join(_classify_row(cfg["model.s"], cfg["model.r"])))
    return 0


def cmd_stochastic(args) -> int:
    started = time.time()
    cfg = _apply_shortcuts(resolve_config(args.config, args.set), args)
    model = build_model(cfg)
    if model.kind is not SystemKind.DENSITY_DRIVE:
        raise ConfigError("the stochastic model requires model.kind = density")
    stoch = StochasticConfig(
        model=model,
        deme_count=cfg["stochastic.demes"],
        K=cfg["stochastic.k"],
        emigration_prob=cfg["stochastic.emigration"],
        t_final=cfg["stochastic.t_final"],
        seed=cfg["stochastic.seed"],
    )
    if args.grid:
        n1, n2 = _parse_grid(args.grid)
        s_values = AxisSpec("s", cfg["sweep.axis1.min"], cfg["sweep.axis1.max"], n1).values()
        r_values = AxisSpec("r", cfg["sweep.axis2.min"], cfg["sweep.axis2.max"], n2).values()
        workers = cfg["sweep.workers"] or default_workers()
        cells = stochastic_sweep(stoch, s_values, r_values, base_seed=stoch.seed, workers=workers)
        out = _out_dir(args)
        path = out / "stochastic.csv"
        write_stochastic_csv(path, cells)
        write_manifest(out, "stochastic", cfg, [path.name], started)
        print(f"wrote {len(cells)} rows to {path}")
    else:
        outcome = run_stochastic(stoch)
        ext = outcome.extinction_time
        print(f"{cfg['model.s']},{cfg['model.r']},{stoch.seed},{outcome.result.value},"
              f"{'' if ext is None else format(ext, '.17g')},{outcome.events}")
    return 0


def cmd_version(_args) -> int:
    print(f"drivewave {__version__}")
    return 0


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        n1, n2 = text.lower().split("x")
        return int(n1), int(n2)
    except ValueError as exc:
        raise ConfigError(f"--grid needs NxM, got {text!r}") from exc


_SHORTCUTS = {
    "model": "model.kind",
    "s": "model.s",
    "r": "model.r",
    "a": "model.a",
    "demography": "model.demography",
    "selection": "model.selection",
    "fw": "model.fw",
    "omega_h": "model.omega_h",
    "dt": "solver.dt",
    "t_final": "solver.t_final",
    "seed": "stochastic.seed",
    "k": "stochastic.k",
    "demes": "stochastic.demes",
    "workers": "sweep.workers",
}


def _apply_shortcuts(cfg: dict, args) -> dict:
    for attr, key in _SHORTCUTS.items():
        value = getattr(args, attr, None)
        if value is not None:
            cfg[key] = coerce_like(key, DEFAULTS[key], str(value))
    # the stochastic subcommand's --t-final targets its own horizon
    if getattr(args, "t_final", None) is not None and args.command == "stochastic":
        cfg["stochastic.t_final"] = float(args.t_final)
    return cfg


def _add_common(p: argparse.ArgumentParser, *, grid: bool = False):
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key (repeatable)")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--model", help="system kind (density, frequency, "
                                   "frequency-rational, cubic, rational, wolbachia)")
    p.add_argument("--s", type=float, help="fitness cost")
    p.add_argument("--r", type=float, help="wild-type intrinsic growth rate")
    p.add_argument("--a", type=float, help="Allee threshold")
    p.add_argument("--demography", help="demography variant tag")
    p.add_argument("--selection", help="survival or fecundity")
    p.add_argument("--fw", type=float, help="infected-mother fertility factor")
    p.add_argument("--omega-h", dest="omega_h", type=float, help="incompatible-cross hatching factor")
    p.add_argument("--dt", type=float)
    p.add_argument("--t-final", dest="t_final", type=float)
    p.add_argument("--workers", type=int)
    if grid:
        p.add_argument("--grid", help="NxM cell counts")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="drivewave",
                                     description="1D invasion-wave laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="one run: snapshots + wave report")
    _add_common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_sweep = sub.add_parser("sweep", help="parameter-plane sweep to CSV")
    _add_common(p_sweep, grid=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_cls = sub.add_parser("classify", help="analytic verdicts only (no simulation)")
    _add_common(p_cls, grid=True)
    p_cls.set_defaults(func=cmd_classify)

    p_st = sub.add_parser("stochastic", help="deme-model run or outcome grid")
    _add_common(p_st, grid=True)
    p_st.add_argument("--seed", type=int)
    p_st.add_argument("--k", type=int, help="deme carrying capacity")
    p_st.add_argument("--demes", type=int, help="deme count")
    p_st.set_defaults(func=cmd_stochastic)

    p_ver = sub.add_parser("version", help="print the artifact version")
    p_ver.set_defaults(func=cmd_version)

    args = parser.parse_args(argv)
    if args.command == "sweep" and getattr(args, "grid", None):
        n1, n2 = _parse_grid(args.grid)
        args.set = list(args.set) + [f"sweep.axis1.count={n1}", f"sweep.axis2.count={n2}"]
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverBlowupError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
