"""Acceptance suite: every exit criterion at its stated tolerance.

Heavy shared artifacts (the 25x25 drive sweep, the 5x5 stochastic grid and
its deterministic counterpart) are module-scoped fixtures.  Each criterion
prints one [PASS]/[FAIL] line; run with ``pytest tests/test_acceptance.py
-v -s`` to see them.
"""

import dataclasses
import math

import numpy as np
import pytest

from drivewave.demography import (
    Demography,
    DemographyVariant,
    carrying_capacity,
    is_eradication_drive,
)
from drivewave.models import (
    Model,
    SystemKind,
    WolbachiaParams,
    survival_drive_model,
    wolbachia_equilibrium,
)
from drivewave.solver import (
    Grid1D,
    InitialCondition,
    Integrator,
    SimConfig,
    default_config,
    initial_state,
    simulate,
)
from drivewave.stochastic import StochasticConfig, StochasticResult, run_stochastic, stochastic_sweep
from drivewave.sweep import (
    AxisSpec,
    SweepConfig,
    SweepSolver,
    agreement_report,
    kpp_region_speed_spread,
    measure_wave,
    run_sweep,
    write_sweep_csv,
    zero_contour_intervals,
)
from drivewave.theory import cubic_wave_speed, kpp_speed
from drivewave.wave import (
    WaveClass,
    classify_wave,
    estimate_speed,
    speed_sign_energy,
    speed_sign_integral,
    track_level_set,
)

WORKERS = 2


def criterion(name: str, ok: bool, detail: str = ""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
    assert ok, f"{name}: {detail}"


def measured_speed(model, config):
    snaps = simulate(config)
    return estimate_speed(track_level_set(snaps, config.grid, model))


# ---------------------------------------------------------------------------
# shared heavy fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def drive_sweep():
    config = SweepConfig(
        model=survival_drive_model(0.5, Demography(r=1.0)),
        axis1=AxisSpec("s", 0.3, 0.8, 25),
        axis2=AxisSpec("r", 0.1, 12.0, 25),
        solver=SweepSolver(),
        workers=WORKERS,
    )
    return run_sweep(config)


@pytest.fixture(scope="module")
def stochastic_grid():
    s_values = np.linspace(0.3, 0.8, 5)
    r_values = np.linspace(0.5, 8.0, 5)
    stoch = stochastic_sweep(
        StochasticConfig(model=survival_drive_model(0.5, Demography(r=1.0)),
                         t_final=1500.0),
        s_values, r_values, base_seed=1, workers=WORKERS)
    jobs = [(float(s), float(r)) for s in s_values for r in r_values]
    deterministic = {}
    for s, r in jobs:
        report, _, _ = measure_wave(survival_drive_model(s, Demography(r=r)), SweepSolver())
        deterministic[(s, r)] = report
    return stoch, deterministic


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

class TestScalarWaves:
    def test_cubic_speeds(self):
        # closed form (2-3s)/sqrt(2s) is quoted in the drive-advance
        # orientation; the solver's geometry measures its negative
        details = []
        ok = True
        for s in (0.5, 0.6, 2 / 3, 0.75):
            model = Model(SystemKind.SCALAR_CUBIC, Demography(r=1.0), s=s)
            fit = measured_speed(model, default_config(model))
            expected = -cubic_wave_speed(s)
            if s == 2 / 3:
                ok &= abs(fit.speed) < 0.05
            else:
                ok &= abs(fit.speed - expected) <= 0.05 * abs(expected)
            details.append(f"s={s:.3f}: {fit.speed:+.4f} vs {expected:+.4f}")
        criterion("scalar cubic speed within 5% of the closed form", ok, "; ".join(details))

    def test_rational_zero_level(self):
        def speed_at(s):
            model = Model(SystemKind.SCALAR_RATIONAL, Demography(r=1.0), s=s)
            return measured_speed(model, default_config(model)).speed

        lo, hi = 0.6, 0.8
        v_lo = speed_at(lo)
        for _ in range(8):
            mid = 0.5 * (lo + hi)
            v = speed_at(mid)
            if (v < 0.0) == (v_lo < 0.0):
                lo, v_lo = mid, v
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        criterion("rational scalar zero level at 0.697 +/- 0.015",
                  abs(root - 0.697) <= 0.015, f"root={root:.4f}")


class TestReferenceRuns:
    def test_viable_invasion_run(self):
        model = survival_drive_model(0.5, Demography(r=10 / 9))
        config = default_config(model)
        report = classify_wave(simulate(config), config.grid, model)
        ok = (report.wave_class is WaveClass.NONTRIVIAL_VIABLE
              and report.speed < -0.05
              and abs(report.plateau_n - 0.1) <= 0.01)
        criterion("viable reference run: invasion with plateau 0.1 +/- 0.01", ok,
                  f"class={report.wave_class.value} speed={report.speed:+.4f} "
                  f"plateau={report.plateau_n:.4f}")

    def test_trivial_regime_run(self):
        model = survival_drive_model(0.7, Demography(r=0.5))
        report, _, _ = measure_wave(model, SweepSolver())
        expected = kpp_speed(0.5)
        ok = (report.wave_class is WaveClass.TRIVIAL_KPP
              and abs(report.speed - expected) <= 0.05 * expected)
        criterion("nonexistence regime: trivial wave at the pulled-front speed", ok,
                  f"class={report.wave_class.value} speed={report.speed:.4f} "
                  f"expected={expected:.4f}")


class TestDriveSweep:
    def test_sign_agreement(self, drive_sweep):
        report = agreement_report(drive_sweep)
        ok = report.clean and report.checked_sign > 100
        criterion("analytic/numeric sign agreement with zero mismatches", ok,
                  f"sign-checked={report.checked_sign} "
                  f"sign-mismatches={report.sign_mismatches[:4]} "
                  f"trivial-cells={report.trivial_cells} "
                  f"trivial-mismatches={report.trivial_mismatches[:4]}")

    def test_zero_contour_confinement(self, drive_sweep):
        intervals = zero_contour_intervals(drive_sweep)
        ok = len(intervals) == 25 and all(
            0.48 <= s_star <= 0.72 for _, _, _, s_star in intervals)
        span = (min(i[3] for i in intervals), max(i[3] for i in intervals))
        criterion("zero contour confined to s in [0.48, 0.72]", ok,
                  f"rows={len(intervals)} contour span={span[0]:.3f}..{span[1]:.3f}")

    def test_monotonicity(self, drive_sweep):
        converged = [c for c in drive_sweep
                     if c.report.wave_class is not WaveClass.NOT_CONVERGED]
        bad = [(c.axis1, c.axis2, c.monotonic_count)
               for c in converged if c.monotonic_count != 2]
        criterion("monotonic profile pair in every converged cell", not bad,
                  f"converged={len(converged)} violations={bad[:5]}")

    def test_sign_formula_consistency(self, drive_sweep):
        checked = 0
        bad = []
        for cell in drive_sweep:
            rep = cell.report
            if rep.wave_class not in (WaveClass.NONTRIVIAL_VIABLE,
                                      WaveClass.NONTRIVIAL_NONVIABLE):
                continue
            if rep.fit_r2 < 0.99 or abs(rep.speed) <= 0.05 or rep.h_table is None:
                continue
            v, h = rep.h_table
            q = speed_sign_integral(v, h, cell.axis1, cell.axis2)
            e = speed_sign_energy(v, h, cell.axis1, cell.axis2)
            checked += 1
            if (q < 0.0) != (rep.speed < 0.0) or (e < 0.0) != (rep.speed < 0.0):
                bad.append((cell.axis1, cell.axis2, rep.speed, q, e))
        criterion("profile sign integrals match the measured speed sign",
                  checked > 100 and not bad,
                  f"checked={checked} violations={bad[:4]}")

    def test_kpp_region_depends_on_r_only(self, drive_sweep):
        spreads = kpp_region_speed_spread(drive_sweep)
        ok = len(spreads) >= 3 and all(spread < 0.03 for _, spread in spreads)
        criterion("trivial-region speed spread across s below 3%", ok,
                  f"rows={[(round(r, 2), round(sp, 4)) for r, sp in spreads]}")

    def test_export_csv(self, drive_sweep, tmp_path):
        path = tmp_path / "sweep.csv"
        write_sweep_csv(path, drive_sweep)
        assert len(path.read_text().splitlines()) == 626


class TestAlternativeDemographies:
    VARIANTS = (
        (DemographyVariant.ALLEE_B, -0.2),
        (DemographyVariant.ALLEE_B, 0.2),
        (DemographyVariant.CONST_B_LOGISTIC_D, 0.0),
        (DemographyVariant.CONST_B_ALLEE_D, 0.2),
    )

    def test_eradication_closed_forms(self):
        ok = True
        for variant, a in self.VARIANTS:
            for s in np.linspace(0.02, 0.98, 50):
                for r in np.linspace(0.1, 12.0, 50):
                    demo = Demography(variant, r=float(r), a=a)
                    closed = is_eradication_drive(demo, float(s))
                    scanned = carrying_capacity(demo, 1.0 - float(s)) == 0.0
                    if closed != scanned:
                        ok = False
        criterion("eradication predicates match the root finder on 50x50 grids", ok)

    def test_mini_sweep_contours(self):
        ok = True
        details = []
        for variant, a in self.VARIANTS:
            for r in (1.0, 2.0, 4.0):
                speeds = {}
                for s in (0.45, 0.6, 0.75):
                    model = survival_drive_model(s, Demography(variant, r=r, a=a))
                    report, _, _ = measure_wave(model, SweepSolver())
                    speeds[s] = report.speed
                row_ok = speeds[0.45] < 0.0 < speeds[0.75]
                ok &= row_ok
                if not row_ok:
                    details.append(f"{variant.value} a={a} r={r}: {speeds}")
        criterion("alternative demographies keep the zero contour in [0.45, 0.75]",
                  ok, "; ".join(details))


class TestWolbachia:
    def test_interior_equilibrium_exact(self):
        value = wolbachia_equilibrium(WolbachiaParams(0.9, 0.8))
        criterion("infection threshold (1-0.9)/(1-0.8) equals 0.5 exactly",
                  value == 0.5, f"value={value}")

    def test_sign_flip_along_fertility_axis(self):
        ok = True
        details = []
        for r in (2.0, 4.0, 6.0):
            speeds = {}
            for one_minus_fw in (0.2, 0.5, 0.8):
                model = Model(SystemKind.WOLBACHIA, Demography(r=r),
                              wolbachia=WolbachiaParams(1.0 - one_minus_fw, 0.1))
                report, _, _ = measure_wave(model, SweepSolver())
                speeds[one_minus_fw] = report.speed
            row_ok = speeds[0.2] < 0.0 < speeds[0.8]
            ok &= row_ok
            details.append(f"r={r}: " + " ".join(f"{k}:{v:+.3f}" for k, v in speeds.items()))
        criterion("infection wave speed flips sign along the fertility-cost axis",
                  ok, "; ".join(details))


class TestStochasticConcordance:
    def test_directional_agreement(self, stochastic_grid):
        stoch, deterministic = stochastic_grid
        agree = 0
        rows = []
        for cell in stoch:
            det = deterministic[(cell.s, cell.r)]
            det_viable = (det.wave_class is WaveClass.NONTRIVIAL_VIABLE)
            if cell.outcome.result is StochasticResult.DRIVE_FIXED and det_viable:
                agree += 1
            elif cell.outcome.result is StochasticResult.DRIVE_LOST and not det_viable:
                agree += 1
            else:
                rows.append((cell.s, cell.r, cell.outcome.result.value,
                             det.wave_class.value))
        fraction = agree / len(stoch)
        criterion("stochastic outcomes agree with the deterministic map (>= 80%)",
                  fraction >= 0.8,
                  f"agree={agree}/{len(stoch)} disagreements={rows}")

    def test_reproducible_at_full_size(self):
        config = StochasticConfig(model=survival_drive_model(0.3, Demography(r=5.0)),
                                  seed=42, t_final=2000.0)
        a = run_stochastic(config)
        b = run_stochastic(config)
        ok = (a.result is b.result and a.events == b.events
              and a.result is StochasticResult.DRIVE_FIXED
              and np.array_equal(a.final_drive, b.final_drive))
        criterion("stochastic run is reproducible under a fixed seed", ok,
                  f"result={a.result.value} events={a.events}")

    def test_occupancy_guard(self, stochastic_grid):
        stoch, _ = stochastic_grid
        worst = max(cell.outcome.max_deme_total for cell in stoch)
        criterion("deme occupancy stays below 5K in all runs",
                  worst < 5 * 1000, f"max occupancy={worst}")


class TestSolverProperties:
    def test_mass_conservation(self):
        model = survival_drive_model(0.5, Demography(r=1.0))
        grid = Grid1D(-50.0, 50.0, 1001)
        config = SimConfig(model=model, grid=grid, dt=0.02, t_final=10.0,
                           diffusion_only=True,
                           initial=InitialCondition(0.0, (0.0, 1.0), (0.0, 1.0)))
        integ = Integrator(config)
        integ.state.u1[:] = np.exp(-grid.x**2 / 4.0)
        integ.state.u2[:] = 0.4 + 0.2 * np.sin(grid.x / 7.0)
        w = np.ones(grid.nx)
        w[0] = w[-1] = 0.5
        m0 = float((w * integ.state.u1).sum())
        nsteps = 500
        integ.advance_steps(nsteps)
        drift = abs(float((w * integ.state.u1).sum()) - m0)
        criterion("pure-diffusion mass conserved to 1e-8 per step",
                  drift <= 1e-8 * nsteps, f"drift={drift:.3e} over {nsteps} steps")

    def test_equilibrium_fixed_points(self):
        model = survival_drive_model(0.5, Demography(r=10 / 9))
        config = default_config(model)
        worst = 0.0
        for u1_val, u2_val in ((0.0, 1.0), (0.1, 0.0)):
            integ = Integrator(config)
            integ.state.u1[:] = u1_val
            integ.state.u2[:] = u2_val
            integ.advance_steps(1)
            worst = max(worst,
                        float(np.abs(integ.state.u1 - u1_val).max()),
                        float(np.abs(integ.state.u2 - u2_val).max()))
        criterion("uniform equilibria fixed to 1e-12 per step",
                  worst <= 1e-12, f"worst drift={worst:.3e}")

    def test_refinement_stability(self):
        model = survival_drive_model(0.5, Demography(r=10 / 9))
        base = default_config(model)
        fine = dataclasses.replace(
            base, grid=Grid1D(base.grid.x_min, base.grid.x_max, 2 * base.grid.nx - 1),
            dt=base.dt / 2)
        v_base = measured_speed(model, base).speed
        v_fine = measured_speed(model, fine).speed
        rel = abs(v_fine - v_base) / abs(v_base)
        criterion("speed changes below 2% under (dx, dt) halving",
                  rel < 0.02, f"base={v_base:+.5f} fine={v_fine:+.5f} rel={rel:.4f}")

    def test_bit_exact_determinism(self):
        model = survival_drive_model(0.5, Demography(r=10 / 9))
        config = dataclasses.replace(default_config(model), t_final=50.0)
        a = simulate(config)
        b = simulate(config)
        ok = all(np.array_equal(sa.u1, sb.u1) and np.array_equal(sa.u2, sb.u2)
                 for sa, sb in zip(a, b))
        criterion("repeated runs are bit-identical", ok)

    def test_worker_count_invariance(self, tmp_path):
        config = SweepConfig(
            model=survival_drive_model(0.5, Demography(r=1.0)),
            axis1=AxisSpec("s", 0.45, 0.55, 3),
            axis2=AxisSpec("r", 0.9, 1.3, 3),
            solver=SweepSolver(grid=Grid1D(-120.0, 120.0, 961), t_max=400.0),
            workers=1,
        )
        cells_1 = run_sweep(config)
        cells_2 = run_sweep(dataclasses.replace(config, workers=2))
        p1, p2 = tmp_path / "w1.csv", tmp_path / "w2.csv"
        write_sweep_csv(p1, cells_1)
        write_sweep_csv(p2, cells_2)
        ok = p1.read_bytes() == p2.read_bytes()
        criterion("sweep CSV bytes independent of worker count", ok)
