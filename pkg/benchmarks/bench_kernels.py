"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--quick]

Times the IMEX stepper on the two-density drive system and the Gillespie
event loop, for both backends, and prints a small table.  The compiled
backend must be built (pip install -e . does this) for the comparison to
be meaningful.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from drivewave.backend import get_backend
from drivewave.demography import Demography
from drivewave.models import survival_drive_model
from drivewave.solver import SimConfig, Grid1D, InitialCondition, initial_state, kernel_params
from drivewave.stochastic import StochasticConfig, initial_counts


def bench_stepper(backend_name: str, nsteps: int) -> float:
    model = survival_drive_model(0.5, Demography(r=10 / 9))
    grid = Grid1D(-200.0, 40.0, 2401)
    config = SimConfig(model=model, grid=grid, dt=0.02, t_final=1.0,
                       initial=InitialCondition(0.0, (0.0, 1.0), (0.95, 0.05)))
    state = initial_state(config)
    kind, params = kernel_params(model)
    impl = get_backend(backend_name)
    impl.advance(kind, state.u1, state.u2, 10, 0.02, grid.dx, params, True)  # warm up
    t0 = time.perf_counter()
    impl.advance(kind, state.u1, state.u2, nsteps, 0.02, grid.dx, params, True)
    return nsteps / (time.perf_counter() - t0)


def bench_gillespie(backend_name: str, t_final: float) -> float:
    config = StochasticConfig(model=survival_drive_model(0.4, Demography(r=2.0)),
                              deme_count=20, K=200, t_final=t_final, seed=7)
    drive0, wild0 = initial_counts(config)
    impl = get_backend(backend_name)
    t0 = time.perf_counter()
    _, _, events, _, _, _ = impl.gillespie_run(
        7, drive0, wild0, config.K, config.t_final,
        0, 2.0, 0.0, 0.6, 1.0, 1.0, 2.0, 0.0, config.emigration_prob)
    return events / (time.perf_counter() - t0)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="shorter runs")
    args = parser.parse_args()
    nsteps = 500 if args.quick else 5000
    t_gillespie = 5.0 if args.quick else 40.0

    rows = []
    for name in ("python", "compiled"):
        try:
            steps = bench_stepper(name, nsteps if name == "compiled" else max(100, nsteps // 10))
            events = bench_gillespie(name, t_gillespie if name == "compiled" else t_gillespie / 10)
        except ImportError:
            print(f"{name:>9}: not available")
            continue
        rows.append((name, steps, events))
        print(f"{name:>9}: stepper {steps:10.0f} steps/s | gillespie {events:12.0f} events/s")
    if len(rows) == 2:
        print(f"{'speedup':>9}: stepper {rows[1][1] / rows[0][1]:9.1f}x  | "
              f"gillespie {rows[1][2] / rows[0][2]:11.1f}x")


if __name__ == "__main__":
    main()
