import math

import numpy as np
import pytest

from drivewave.demography import Demography, DemographyVariant
from drivewave.models import Model, SystemKind, WolbachiaParams, survival_drive_model
from drivewave.solver import Grid1D
from drivewave.sweep import (
    AgreementReport,
    AxisSpec,
    SweepCell,
    SweepConfig,
    SweepSolver,
    agreement_report,
    apply_axis,
    cell_jobs,
    measure_wave,
    run_sweep,
    write_sweep_csv,
    zero_contour_intervals,
)
from drivewave.theory import AnalyticVerdict, SIGN_NEGATIVE, SIGN_UNKNOWN
from drivewave.wave import WaveClass, WaveReport


SMALL_SOLVER = SweepSolver(grid=Grid1D(-120.0, 120.0, 961), dt=0.025,
                           snapshot_every=2.5, t_max=400.0)


def drive_config(**kwargs):
    defaults = dict(
        model=survival_drive_model(0.5, Demography(r=1.0)),
        axis1=AxisSpec("s", 0.45, 0.55, 3),
        axis2=AxisSpec("r", 0.9, 1.3, 3),
        solver=SMALL_SOLVER,
        workers=1,
    )
    defaults.update(kwargs)
    return SweepConfig(**defaults)


class TestConfig:
    def test_axis_validation(self):
        with pytest.raises(ValueError):
            AxisSpec("s", 0.5, 0.5, 3)  # zero-width range
        with pytest.raises(ValueError):
            AxisSpec("s", 0.1, 0.9, 1)

    def test_apply_axis(self):
        m = survival_drive_model(0.5, Demography(r=1.0))
        m2 = apply_axis(m, "s", 0.7, "survival")
        assert m2.s == 0.7 and m2.genotype.omega_d == pytest.approx(0.3)
        m3 = apply_axis(m, "r", 4.0, "survival")
        assert m3.demography.r == 4.0
        w = Model(SystemKind.WOLBACHIA, Demography(r=1.0))
        w2 = apply_axis(w, "one_minus_fw", 0.3, "survival")
        assert w2.wolbachia.f_w == pytest.approx(0.7)
        with pytest.raises(ValueError):
            apply_axis(m, "bogus", 1.0, "survival")

    def test_jobs_row_major(self):
        jobs = cell_jobs(drive_config())
        axis_pairs = [(v1, v2) for _, _, v1, v2 in jobs]
        assert axis_pairs == sorted(axis_pairs)
        assert len(jobs) == 9


@pytest.fixture(scope="module")
def mini_cells():
    return run_sweep(drive_config())


class TestRunSweep:
    def test_center_cell_viable(self, mini_cells):
        center = [c for c in mini_cells
                  if c.axis1 == pytest.approx(0.5) and c.axis2 == pytest.approx(1.1)]
        assert len(center) == 1
        assert center[0].report.wave_class is WaveClass.NONTRIVIAL_VIABLE

    def test_worker_count_invariance(self, mini_cells, tmp_path):
        cells2 = run_sweep(drive_config(workers=2))
        p1 = tmp_path / "w1.csv"
        p2 = tmp_path / "w2.csv"
        write_sweep_csv(p1, mini_cells)
        write_sweep_csv(p2, cells2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_csv_shape(self, mini_cells, tmp_path):
        path = tmp_path / "sweep.csv"
        write_sweep_csv(path, mini_cells)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("axis1,axis2,speed,fit_r2,class")
        assert len(lines) == 10


class TestTrivialRegimeCell:
    def test_theorem1_cell_is_trivial_kpp(self):
        model = survival_drive_model(0.7, Demography(r=0.5))
        report, _, _ = measure_wave(model, SweepSolver())
        assert report.wave_class is WaveClass.TRIVIAL_KPP
        assert report.speed == pytest.approx(2 * math.sqrt(0.5), rel=0.05)


def _fake_cell(s, r, speed, wave_class=WaveClass.NONTRIVIAL_VIABLE,
               sign=SIGN_NEGATIVE, clause="1a", trivial=False, fit_r2=1.0):
    report = WaveReport(speed, fit_r2, wave_class, True, True, 0.5)
    verdict = AnalyticVerdict(trivial, sign, clause)
    return SweepCell(s, r, report, verdict)


class TestAgreement:
    def test_all_match(self):
        cells = [_fake_cell(0.4, r, -1.0) for r in (1.0, 2.0)]
        rep = agreement_report(cells)
        assert rep.clean and rep.checked_sign == 2

    def test_corrupted_cell_listed_with_clause(self):
        cells = [_fake_cell(0.4, 1.0, -1.0), _fake_cell(0.45, 1.0, +0.8)]
        rep = agreement_report(cells)
        assert not rep.clean
        assert rep.sign_mismatches == [(0.45, 1.0, "1a", 0.8)]

    def test_weak_speeds_and_unknown_skipped(self):
        cells = [
            _fake_cell(0.4, 1.0, -0.01),                      # below the sign floor
            _fake_cell(0.65, 1.0, +1.0, sign=SIGN_UNKNOWN, clause="none"),
            _fake_cell(0.5, 1.0, -1.0, fit_r2=0.5),           # unconverged fit
        ]
        rep = agreement_report(cells)
        assert rep.checked_sign == 0

    def test_trivial_region_check(self):
        good = _fake_cell(0.7, 0.3, +1.1, wave_class=WaveClass.TRIVIAL_KPP,
                          sign=SIGN_UNKNOWN, clause="none", trivial=True)
        bad = _fake_cell(0.72, 0.3, +0.4, wave_class=WaveClass.NONTRIVIAL_NONVIABLE,
                         sign=SIGN_UNKNOWN, clause="none", trivial=True)
        rep = agreement_report([good, bad])
        assert rep.trivial_cells == 2 and rep.trivial_matches == 1
        assert rep.trivial_mismatches == [(0.72, 0.3, "NontrivialNonviable")]


class TestContour:
    def test_interpolated_crossing(self):
        cells = [
            _fake_cell(0.5, 1.0, -0.3),
            _fake_cell(0.6, 1.0, +0.1, wave_class=WaveClass.NONTRIVIAL_NONVIABLE),
            _fake_cell(0.7, 1.0, +0.5, wave_class=WaveClass.NONTRIVIAL_NONVIABLE),
        ]
        intervals = zero_contour_intervals(cells)
        assert len(intervals) == 1
        r, lo, hi, s_star = intervals[0]
        assert (lo, hi) == (0.5, 0.6)
        assert s_star == pytest.approx(0.575)

    def test_unconverged_cells_skipped(self):
        cells = [
            _fake_cell(0.5, 1.0, -0.3),
            _fake_cell(0.6, 1.0, math.nan, wave_class=WaveClass.NOT_CONVERGED, fit_r2=0.0),
            _fake_cell(0.7, 1.0, +0.5, wave_class=WaveClass.NONTRIVIAL_NONVIABLE),
        ]
        intervals = zero_contour_intervals(cells)
        assert len(intervals) == 1
        _, lo, hi, _ = intervals[0]
        assert (lo, hi) == (0.5, 0.7)
