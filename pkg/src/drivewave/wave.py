"""Traveling-wave diagnostics from snapshot sequences.

Measures the front speed by tracking the 1/2-level set of the wild-type
field, classifies the outcome (trivial wave with the drive gone, nontrivial
viable/nonviable, or not converged), checks profile monotonicity, extracts
the monotone profile link h mapping drive frequency to total density, and
evaluates the two quadrature formulas whose sign predicts the wave-speed
sign from h alone.

Speed sign convention: the wild type occupies the left of the domain and
the introduced type the right, so a successful invasion moves the level set
leftward and has speed < 0.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .models import FREQUENCY_KINDS, N_FLOOR, Model, SCALAR_KINDS, SystemKind
from .solver import BOUNDARY_MARGIN, FieldState, Grid1D


class WaveClass(enum.Enum):
    TRIVIAL_KPP = "TrivialKPP"
    NONTRIVIAL_VIABLE = "NontrivialViable"
    NONTRIVIAL_NONVIABLE = "NontrivialNonviable"
    NOT_CONVERGED = "NotConverged"


@dataclass(frozen=True)
class Tolerances:
    p_trivial: float = 1e-3
    fit_r2_min: float = 0.99
    window_fraction: float = 0.5
    monotone_eps: float = 1e-6
    min_points: int = 5


@dataclass(frozen=True)
class TrackPoint:
    t: float
    x: float
    usable: bool


@dataclass(frozen=True)
class SpeedFit:
    speed: float
    fit_r2: float
    n_points: int
    ok: bool


@dataclass
class WaveReport:
    speed: float
    fit_r2: float
    wave_class: WaveClass
    p_monotone: bool
    n_monotone: bool
    plateau_n: float
    h_table: tuple[np.ndarray, np.ndarray] | None = None
    #: provenance of the fitted speed: "front" for the leading-front fit,
    #: "collapse" when a trivial wave was fitted after the drive field died
    #: (a free pulled front), "mixed" when a trivial wave's front left the
    #: domain before the collapse completed (chase-limited speed)
    speed_source: str = "front"

    @property
    def monotonic_count(self) -> int:
        return int(self.p_monotone) + int(self.n_monotone)


# ---------------------------------------------------------------------------
# field accessors
# ---------------------------------------------------------------------------

def wild_profile(model: Model, state: FieldState) -> np.ndarray:
    """The monotone wild-type field whose 1/2-level set is tracked."""
    kind = model.kind
    if kind is SystemKind.DENSITY_DRIVE or kind is SystemKind.WOLBACHIA:
        return state.u2
    if kind in FREQUENCY_KINDS:
        return (1.0 - state.u1) * state.u2
    return 1.0 - state.u1


def drive_frequency_profile(model: Model, state: FieldState) -> np.ndarray:
    kind = model.kind
    if kind is SystemKind.DENSITY_DRIVE or kind is SystemKind.WOLBACHIA:
        return state.u1 / np.maximum(state.u1 + state.u2, N_FLOOR)
    return state.u1


def total_density_profile(model: Model, state: FieldState) -> np.ndarray | None:
    kind = model.kind
    if kind is SystemKind.DENSITY_DRIVE or kind is SystemKind.WOLBACHIA:
        return state.u1 + state.u2
    if kind in FREQUENCY_KINDS:
        return state.u2
    return None


# ---------------------------------------------------------------------------
# level-set tracking and speed fits
# ---------------------------------------------------------------------------

def leftmost_crossing(x: np.ndarray, profile: np.ndarray, level: float) -> float | None:
    """Position of the leftmost crossing of ``level``, linearly interpolated."""
    f = profile - level
    sign_change = f[:-1] * f[1:] <= 0.0
    idx = np.nonzero(sign_change & ((f[:-1] != 0.0) | (f[1:] != 0.0)))[0]
    if idx.size == 0:
        return None
    i = int(idx[0])
    if f[i] == 0.0:
        return float(x[i])
    denom = profile[i + 1] - profile[i]
    if denom == 0.0:
        return float(x[i])
    return float(x[i] + (level - profile[i]) * (x[i + 1] - x[i]) / denom)


def track_level_set(snapshots: list[FieldState], grid: Grid1D, model: Model,
                    level: float = 0.5) -> list[TrackPoint]:
    """Per-snapshot leftmost crossing of the wild-type field.

    Crossings within BOUNDARY_MARGIN of either wall are flagged unusable;
    snapshots without a crossing (wave exited the domain) are skipped.
    """
    x = grid.x
    lo = grid.x_min + BOUNDARY_MARGIN
    hi = grid.x_max - BOUNDARY_MARGIN
    track = []
    for snap in snapshots:
        pos = leftmost_crossing(x, wild_profile(model, snap), level)
        if pos is None:
            continue
        track.append(TrackPoint(snap.t, pos, lo <= pos <= hi))
    return track


def estimate_speed(track: list[TrackPoint], window_fraction: float = 0.5,
                   min_points: int = 5) -> SpeedFit:
    """Least-squares slope over the final window of the usable track."""
    pts = [(p.t, p.x) for p in track if p.usable]
    if len(pts) < min_points:
        return SpeedFit(math.nan, 0.0, len(pts), False)
    t = np.array([p[0] for p in pts])
    x = np.array([p[1] for p in pts])
    t_start = t[-1] - window_fraction * (t[-1] - t[0])
    sel = t >= t_start - 1e-12
    if sel.sum() < min_points:
        return SpeedFit(math.nan, 0.0, int(sel.sum()), False)
    tw, xw = t[sel], x[sel]
    slope, intercept = np.polyfit(tw, xw, 1)
    resid = xw - (slope * tw + intercept)
    ss_tot = float(np.sum((xw - xw.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return SpeedFit(float(slope), r2, int(sel.sum()), True)


def monotonicity_check(profile: np.ndarray, direction: str,
                       epsilon: float = 1e-6,
                       amplitude_floor: float = 1e-9) -> bool:
    """Signed test on the sup-normalized centered derivative.

    nondecreasing: min(d)/max|d| > -epsilon; nonincreasing: max(d)/max|d|
    < epsilon.  A profile with zero derivative, or one flat to within
    ``amplitude_floor`` (constant up to numerical dust), is trivially
    monotone.
    """
    if profile.size < 3:
        raise ValueError("profile too short for a derivative test")
    if float(profile.max()) - float(profile.min()) < amplitude_floor:
        return True
    d = np.gradient(profile)
    sup = float(np.abs(d).max())
    if sup == 0.0:
        return True
    if direction == "nondecreasing":
        return float(d.min()) / sup > -epsilon
    if direction == "nonincreasing":
        return float(d.max()) / sup < epsilon
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# profile link h and the sign formulas
# ---------------------------------------------------------------------------

H_TABLE_NODES = 512
#: Minimum drive-frequency span for a meaningful h extraction.
H_MIN_SPAN = 0.5


def extract_h(p_profile: np.ndarray, n_profile: np.ndarray,
              nodes: int = H_TABLE_NODES) -> tuple[np.ndarray, np.ndarray] | None:
    """Tabulate total density against drive frequency on a uniform grid.

    Monotone linear interpolation of N against the running maximum of P;
    beyond the attained P-range the table extends by the plateau values.
    None when the P span is below H_MIN_SPAN (trivial or unconverged wave).
    """
    p_mono = np.maximum.accumulate(np.asarray(p_profile, dtype=float))
    if p_mono[-1] - p_mono[0] <= H_MIN_SPAN:
        return None
    v = np.linspace(0.0, 1.0, nodes)
    h = np.interp(v, p_mono, np.asarray(n_profile, dtype=float))
    return v, h


def speed_sign_integral(v: np.ndarray, h: np.ndarray, s: float, r: float) -> float:
    """Quartic-weight change-of-variable integral; sign predicts sign(speed).

    Value of -I with I = int_0^1 h^4 (r(1-h)+1) V (1-V) (sV - 2s + 1) dV,
    evaluated by composite Simpson on the table nodes.
    """
    integrand = h**4 * (r * (1.0 - h) + 1.0) * v * (1.0 - v) * (s * v - 2.0 * s + 1.0)
    return -float(simpson(integrand, x=v))


def speed_sign_energy(v: np.ndarray, h: np.ndarray, s: float, r: float) -> float:
    """Integration-by-parts sign formula; sign predicts sign(speed).

    r/6 (1 - (1-s) n*^3) - int_0^1 s (1-V) h^2 (r(1 - 2h/3) + 1) dV with
    n* = max(0, 1 - s/(r(1-s))).
    """
    n_star = max(0.0, 1.0 - s / (r * (1.0 - s)))
    integrand = s * (1.0 - v) * h**2 * (r * (1.0 - 2.0 * h / 3.0) + 1.0)
    return r / 6.0 * (1.0 - (1.0 - s) * n_star**3) - float(simpson(integrand, x=v))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

#: Density below which a cell counts as vacuum: the local allele frequency
#: is numerically (and biologically) meaningless there, so the frequency
#: monotonicity test skips such cells.  The vacuum region of an eradication
#: or trivial wave is contiguous, so the retained profile has no seams.
VACUUM_DENSITY = 1e-8


def build_report(track: list[TrackPoint], final_state: FieldState,
                 max_p_series: list[tuple[float, float]], grid: Grid1D,
                 model: Model, tol: Tolerances = Tolerances()) -> WaveReport:
    """Classification core shared by classify_wave and the sweep driver.

    Trivial outcome is decided by the final maximum drive frequency alone;
    its speed (the wild-type re-invasion front) is fitted on the part of
    the track after the drive field has collapsed.  Nontrivial outcomes
    require a clean linear fit (r^2 >= fit_r2_min), otherwise NotConverged.
    """
    p_final = drive_frequency_profile(model, final_state)
    n_final = total_density_profile(model, final_state)

    trivial = bool(p_final.max() < tol.p_trivial)
    speed_source = "front"
    if trivial:
        t_dead = next(t for t, v in max_p_series if v < tol.p_trivial)
        fit = estimate_speed([p for p in track if p.t >= t_dead],
                             tol.window_fraction, tol.min_points)
        speed_source = "collapse"
        if not fit.ok:  # front left the domain while the drive was still dying
            fit = estimate_speed(track, tol.window_fraction, tol.min_points)
            speed_source = "mixed"
        wave_class = WaveClass.TRIVIAL_KPP
    else:
        fit = estimate_speed(track, tol.window_fraction, tol.min_points)
        if not fit.ok or not math.isfinite(fit.speed) or fit.fit_r2 < tol.fit_r2_min:
            wave_class = WaveClass.NOT_CONVERGED
        elif fit.speed < 0.0:
            wave_class = WaveClass.NONTRIVIAL_VIABLE
        else:
            wave_class = WaveClass.NONTRIVIAL_NONVIABLE

    if n_final is not None:
        # a dead drive field is numerical dust: flat to within the trivial
        # tolerance counts as the identically-zero profile
        populated = n_final >= VACUUM_DENSITY
        p_for_test = p_final[populated] if populated.sum() >= 3 else p_final
        p_monotone = monotonicity_check(p_for_test, "nondecreasing", tol.monotone_eps,
                                        amplitude_floor=tol.p_trivial)
        n_monotone = monotonicity_check(n_final, "nonincreasing", tol.monotone_eps)
        tail = max(1, grid.nx // 10)
        plateau_n = float(n_final[-tail:].mean())
    else:
        p_monotone = monotonicity_check(p_final, "nondecreasing", tol.monotone_eps,
                                        amplitude_floor=tol.p_trivial)
        n_monotone = True
        plateau_n = math.nan

    h_table = None
    if wave_class in (WaveClass.NONTRIVIAL_VIABLE, WaveClass.NONTRIVIAL_NONVIABLE) \
            and n_final is not None:
        h_table = extract_h(p_final, n_final)

    return WaveReport(
        speed=fit.speed,
        fit_r2=fit.fit_r2,
        wave_class=wave_class,
        p_monotone=p_monotone,
        n_monotone=n_monotone,
        plateau_n=plateau_n,
        h_table=h_table,
        speed_source=speed_source,
    )


def classify_wave(snapshots: list[FieldState], grid: Grid1D, model: Model,
                  tol: Tolerances = Tolerances()) -> WaveReport:
    """Full wave report from a snapshot sequence."""
    track = track_level_set(snapshots, grid, model)
    max_p = [(s.t, float(drive_frequency_profile(model, s).max())) for s in snapshots]
    return build_report(track, snapshots[-1], max_p, grid, model, tol)


REPORT_HEADER = ["s", "r", "speed", "fit_r2", "class", "p_monotone", "n_monotone", "plateau_n"]


def write_report_csv(path, s: float, r: float, report: WaveReport):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        writer.writerow(report_csv_row(s, r, report))


def report_csv_row(s: float, r: float, report: WaveReport) -> list[str]:
    return [
        format(s, ".17g"),
        format(r, ".17g"),
        format(report.speed, ".17g"),
        format(report.fit_r2, ".17g"),
        report.wave_class.value,
        str(report.p_monotone),
        str(report.n_monotone),
        format(report.plateau_n, ".17g"),
    ]


def write_h_table_csv(path, h_table: tuple[np.ndarray, np.ndarray]):
    v, h = h_table
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["V", "h"])
        for i in range(v.size):
            writer.writerow([format(v[i], ".17g"), format(h[i], ".17g")])
