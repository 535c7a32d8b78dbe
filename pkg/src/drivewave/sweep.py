"""Deterministic parameter sweeps producing heatmap datasets.

Each cell runs one simulation, classifies the wave and evaluates the
analytic predicates.  Cells are pure functions of the configuration, so
they run embarrassingly parallel; output order is row-major (axis1 outer,
axis2 inner) regardless of worker count.

The sweep solver geometry differs from the single-run default: the
introduced block spans the whole right half ([0, 250] by default) so that
failed and trivial waves have runway for a clean rightward speed fit, and
each cell stops adaptively: when the tracked front leaves the usable
window, when the fitted slope has stabilized while the wave amplitude is
steady, or at t_max.  Stopping right after the front has formed (or after
the re-invasion front has crossed the block) also standardizes the fit
window relative to each cell's own collapse time, which is what makes
pulled-front speeds comparable across cells.
"""

from __future__ import annotations

import csv
import math
import multiprocessing
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .demography import Demography, DemographyVariant
from .models import GenotypeParams, Model, SystemKind, WolbachiaParams
from .solver import BOUNDARY_MARGIN, Grid1D, InitialCondition, Integrator, SimConfig, _right_values, _left_values
from .theory import SIGN_UNKNOWN, AnalyticVerdict, analytic_verdict
from .wave import (
    Tolerances,
    TrackPoint,
    WaveClass,
    WaveReport,
    build_report,
    drive_frequency_profile,
    estimate_speed,
    leftmost_crossing,
    wild_profile,
)

#: Cells with a weaker measured speed than this are treated as numerically
#: sign-ambiguous by the agreement checks.
SPEED_SIGN_FLOOR = 0.05


@dataclass(frozen=True)
class AxisSpec:
    name: str  # "s", "r" or "one_minus_fw"
    min: float
    max: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError("axis needs at least 2 points")
        if not self.max > self.min:
            raise ValueError("axis range must have positive width")

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class SweepSolver:
    """Solver geometry and adaptive-stopping knobs for sweep cells."""

    grid: Grid1D = field(default_factory=lambda: Grid1D(-250.0, 250.0, 2001))
    dt: float = 0.025
    snapshot_every: float = 2.5
    chunk: float = 25.0
    t_min: float = 100.0
    t_max: float = 1500.0
    interface_x: float = 0.0
    block_value: float = 0.95


@dataclass(frozen=True)
class SweepConfig:
    model: Model
    axis1: AxisSpec = field(default_factory=lambda: AxisSpec("s", 0.3, 0.8, 25))
    axis2: AxisSpec = field(default_factory=lambda: AxisSpec("r", 0.1, 12.0, 25))
    solver: SweepSolver = field(default_factory=SweepSolver)
    workers: int = 1
    selection: str = "survival"  # how an "s" axis maps onto genotype params


@dataclass
class SweepCell:
    axis1: float
    axis2: float
    report: WaveReport
    verdict: AnalyticVerdict

    @property
    def monotonic_count(self) -> int:
        return self.report.monotonic_count


def apply_axis(model: Model, name: str, value: float, selection: str) -> Model:
    if name == "s":
        genotype = (
            GenotypeParams.fecundity_selection(value)
            if selection == "fecundity"
            else GenotypeParams.survival_selection(value)
        )
        return replace(model, genotype=genotype, s=value)
    if name == "r":
        return replace(model, demography=replace(model.demography, r=value))
    if name == "one_minus_fw":
        return replace(model, wolbachia=replace(model.wolbachia, f_w=1.0 - value))
    raise ValueError(f"unknown sweep axis {name!r}")


def _cell_verdict(model: Model) -> AnalyticVerdict:
    """Theorem evaluation; defined for the survival drive on logistic growth,
    Unknown/none elsewhere."""
    if (
        model.kind is SystemKind.DENSITY_DRIVE
        and model.demography.variant is DemographyVariant.LOGISTIC_B
        and model.genotype.beta_d == 1.0
        and model.genotype.d_d == 1.0
        and 0.0 < model.s < 1.0
    ):
        return analytic_verdict(model.s, model.demography.r)
    return AnalyticVerdict(False, SIGN_UNKNOWN, "none")


# ---------------------------------------------------------------------------
# adaptive per-cell measurement
# ---------------------------------------------------------------------------

@dataclass
class _TrackState:
    points: list[TrackPoint]
    max_p: list[tuple[float, float]]
    max_drive: list[tuple[float, float]]
    exited: bool = False


def _record_snapshot(acc: _TrackState, integ: Integrator, model: Model, grid: Grid1D):
    state = integ.state
    pos = leftmost_crossing(grid.x, wild_profile(model, state), 0.5)
    if pos is None:
        acc.exited = True
    else:
        lo = grid.x_min + BOUNDARY_MARGIN
        hi = grid.x_max - BOUNDARY_MARGIN
        acc.points.append(TrackPoint(state.t, pos, lo <= pos <= hi))
        if pos > hi or pos < lo:
            acc.exited = True
        else:
            acc.exited = False
    acc.max_p.append((state.t, float(drive_frequency_profile(model, state).max())))
    # u1 is the drive/infected density (or the frequency for scalar systems):
    # its peak is steady for a formed wave and decays during collapse
    acc.max_drive.append((state.t, float(state.u1.max())))


def _steady_amplitude(acc: _TrackState, t_now: float, lookback: float = 50.0,
                      rel: float = 0.05) -> bool:
    past = [v for t, v in acc.max_drive if t <= t_now - lookback]
    if not past:
        return False
    prev = past[-1]
    cur = acc.max_drive[-1][1]
    if prev <= 0.0:
        return cur <= 0.0
    return abs(cur - prev) <= rel * prev


def measure_wave(model: Model, solver: SweepSolver, tol: Tolerances = Tolerances()):
    """Run one cell adaptively and classify it.

    Returns (WaveReport, final FieldState, stop time).
    """
    grid = solver.grid
    config = SimConfig(
        model=model,
        grid=grid,
        dt=solver.dt,
        t_final=solver.t_max,
        snapshot_every=solver.snapshot_every,
        initial=InitialCondition(
            solver.interface_x, _left_values(model), _right_values(model, solver.block_value)
        ),
    )
    integ = Integrator(config)
    acc = _TrackState([], [], [])
    _record_snapshot(acc, integ, model, grid)

    snap_steps = max(1, int(round(solver.snapshot_every / solver.dt)))
    chunk_steps = max(snap_steps, int(round(solver.chunk / solver.dt)))
    total_steps = int(round(solver.t_max / solver.dt))
    prev_slope = None

    while integ.step_index < total_steps:
        chunk_target = min(integ.step_index + chunk_steps, total_steps)
        while integ.step_index < chunk_target:
            integ.advance_steps(min(snap_steps, chunk_target - integ.step_index))
            _record_snapshot(acc, integ, model, grid)
        t_now = integ.state.t
        if acc.exited and t_now >= 2 * solver.chunk:
            break
        if t_now >= solver.t_min:
            fit = estimate_speed(acc.points, tol.window_fraction, tol.min_points)
            if fit.ok and _steady_amplitude(acc, t_now):
                if prev_slope is not None and abs(fit.speed - prev_slope) <= max(
                    0.01 * abs(fit.speed), 0.003
                ):
                    break
                prev_slope = fit.speed
            else:
                prev_slope = None

    report = build_report(acc.points, integ.state, acc.max_p, grid, model, tol)
    return report, integ.state, integ.state.t


# ---------------------------------------------------------------------------
# sweep driver
# ---------------------------------------------------------------------------

def _run_cell(args) -> SweepCell:
    model, solver, v1, v2 = args
    report, _, _ = measure_wave(model, solver)
    return SweepCell(v1, v2, report, _cell_verdict(model))


def cell_jobs(config: SweepConfig):
    jobs = []
    for v1 in config.axis1.values():
        m1 = apply_axis(config.model, config.axis1.name, float(v1), config.selection)
        for v2 in config.axis2.values():
            m2 = apply_axis(m1, config.axis2.name, float(v2), config.selection)
            jobs.append((m2, config.solver, float(v1), float(v2)))
    return jobs


def run_sweep(config: SweepConfig) -> list[SweepCell]:
    """All cells, row-major; identical output for any worker count."""
    jobs = cell_jobs(config)
    workers = config.workers or default_workers()
    if workers <= 1 or len(jobs) == 1:
        return [_run_cell(job) for job in jobs]
    with multiprocessing.Pool(processes=workers) as pool:
        return pool.map(_run_cell, jobs, chunksize=1)


def default_workers() -> int:
    env = os.environ.get("DRIVEWAVE_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


SWEEP_HEADER = [
    "axis1", "axis2", "speed", "fit_r2", "class", "p_monotone", "n_monotone",
    "monotonic_count", "plateau_n", "trivial_only", "analytic_sign", "clause",
]


def cell_csv_row(cell: SweepCell) -> list[str]:
    rep = cell.report
    return [
        format(cell.axis1, ".17g"),
        format(cell.axis2, ".17g"),
        format(rep.speed, ".17g"),
        format(rep.fit_r2, ".17g"),
        rep.wave_class.value,
        str(rep.p_monotone),
        str(rep.n_monotone),
        str(cell.monotonic_count),
        format(rep.plateau_n, ".17g"),
        str(cell.verdict.trivial_only),
        cell.verdict.sign,
        cell.verdict.clause,
    ]


def write_sweep_csv(path, cells: list[SweepCell]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        for cell in cells:
            writer.writerow(cell_csv_row(cell))


# ---------------------------------------------------------------------------
# cross-validation against the analytic results
# ---------------------------------------------------------------------------

@dataclass
class AgreementReport:
    checked_sign: int
    sign_matches: int
    sign_mismatches: list[tuple[float, float, str, float]]
    trivial_cells: int
    trivial_matches: int
    trivial_mismatches: list[tuple[float, float, str]]

    @property
    def clean(self) -> bool:
        return not self.sign_mismatches and not self.trivial_mismatches


def _converged(cell: SweepCell, fit_r2_min: float = 0.99) -> bool:
    return (
        cell.report.wave_class is not WaveClass.NOT_CONVERGED
        and math.isfinite(cell.report.speed)
        and cell.report.fit_r2 >= fit_r2_min
    )


def agreement_report(cells: list[SweepCell]) -> AgreementReport:
    """Measured-vs-analytic cross-validation.

    Sign check: converged cells with |speed| > SPEED_SIGN_FLOOR lying in a
    definite sign clause must match.  Trivial check: cells in the
    nonexistence region must classify TrivialKPP.
    """
    checked = matches = 0
    mismatches = []
    trivial_cells = trivial_matches = 0
    trivial_mismatches = []
    for cell in cells:
        verdict, rep = cell.verdict, cell.report
        if verdict.trivial_only:
            trivial_cells += 1
            if rep.wave_class is WaveClass.TRIVIAL_KPP:
                trivial_matches += 1
            else:
                trivial_mismatches.append((cell.axis1, cell.axis2, rep.wave_class.value))
        if verdict.sign == SIGN_UNKNOWN or not _converged(cell):
            continue
        if abs(rep.speed) <= SPEED_SIGN_FLOOR:
            continue
        checked += 1
        expected_negative = verdict.sign == "Negative"
        if (rep.speed < 0.0) == expected_negative:
            matches += 1
        else:
            mismatches.append((cell.axis1, cell.axis2, verdict.clause, rep.speed))
    return AgreementReport(checked, matches, mismatches,
                           trivial_cells, trivial_matches, trivial_mismatches)


def zero_contour_intervals(cells: list[SweepCell]) -> list[tuple[float, float, float, float]]:
    """Per axis2 row: (axis2, s_lo, s_hi, s_interp) for the first sign change
    of the measured speed among converged cells."""
    rows: dict[float, list[SweepCell]] = {}
    for cell in cells:
        rows.setdefault(cell.axis2, []).append(cell)
    out = []
    for a2 in sorted(rows):
        row = sorted((c for c in rows[a2] if _converged(c)), key=lambda c: c.axis1)
        for left, right in zip(row[:-1], row[1:]):
            if left.report.speed < 0.0 <= right.report.speed:
                ds = right.axis1 - left.axis1
                dv = right.report.speed - left.report.speed
                s_star = left.axis1 - left.report.speed * ds / dv if dv != 0 else left.axis1
                out.append((a2, left.axis1, right.axis1, s_star))
                break
    return out


def kpp_region_speed_spread(cells: list[SweepCell]) -> list[tuple[float, float]]:
    """Per axis2 row with >= 2 decoupled TrivialKPP cells: (axis2, relative
    spread of measured speeds across axis1).

    Only cells whose speed was fitted after the drive collapse count: when
    the front exits the domain while the drive is still dying (near the
    speed jump), the measured speed is chase-limited and legitimately
    depends on both parameters, not on the growth rate alone.
    """
    rows: dict[float, list[float]] = {}
    for cell in cells:
        if (cell.report.wave_class is WaveClass.TRIVIAL_KPP and _converged(cell)
                and cell.report.speed_source == "collapse"):
            rows.setdefault(cell.axis2, []).append(cell.report.speed)
    out = []
    for a2, speeds in sorted(rows.items()):
        if len(speeds) >= 2:
            mean = float(np.mean(speeds))
            spread = (max(speeds) - min(speeds)) / abs(mean) if mean else math.inf
            out.append((a2, spread))
    return out
