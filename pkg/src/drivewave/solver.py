"""Semi-implicit finite-difference integration on a 1D Neumann grid.

The scheme is IMEX: diffusion (and, for frequency systems, the
grad(log n).grad(p) advection with a lagged coefficient) is treated
implicitly through tridiagonal solves, the reaction explicitly at the
current state.  Boundaries are zero-flux via mirrored ghost values.
Negative density undershoots are clipped to 0 and frequencies to [0, 1];
the largest clipping magnitude is tracked as a resolution diagnostic.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .demography import variant_code
from .models import FREQUENCY_KINDS, Model, SystemKind

#: Width of the boundary strip (in x units) where level-set crossings are
#: considered contaminated by the Neumann walls.
BOUNDARY_MARGIN = 20.0


class SolverBlowupError(RuntimeError):
    """Non-finite value during time stepping (dt/dx instability)."""

    def __init__(self, t: float, cell: int, x: float):
        self.t = t
        self.cell = cell
        self.x = x
        super().__init__(
            f"non-finite field value at t={t:.6g}, cell {cell} (x={x:.6g}); "
            "reduce dt or refine dx"
        )


@dataclass(frozen=True)
class Grid1D:
    x_min: float = -200.0
    x_max: float = 40.0
    nx: int = 2401

    def __post_init__(self):
        if self.nx < 3:
            raise ValueError("grid needs at least 3 points")
        if not self.x_max > self.x_min:
            raise ValueError("x_max must exceed x_min")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)


@dataclass
class FieldState:
    """Solution fields at one time: u1 (and u2 for two-field systems)."""

    t: float
    u1: np.ndarray
    u2: np.ndarray | None = None

    def copy(self) -> "FieldState":
        return FieldState(self.t, self.u1.copy(), None if self.u2 is None else self.u2.copy())


@dataclass(frozen=True)
class InitialCondition:
    """Sharp-interface step data: left values for x < interface_x, right after."""

    interface_x: float = 0.0
    left: tuple[float, ...] = (0.0, 1.0)
    right: tuple[float, ...] = (0.95, 0.05)


@dataclass(frozen=True)
class SimConfig:
    model: Model
    grid: Grid1D = field(default_factory=Grid1D)
    dt: float = 0.02
    t_final: float = 200.0
    snapshot_every: float = 5.0
    initial: InitialCondition = field(default_factory=InitialCondition)
    snapshot_times: tuple[float, ...] | None = None
    diffusion_only: bool = False  # diagnostic: disable the reaction term

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_final < 0:
            raise ValueError("t_final must be nonnegative")
        if self.snapshot_times is not None:
            ts = np.asarray(self.snapshot_times)
            if ts.size and (ts.min() < 0 or ts.max() > self.t_final):
                raise ValueError("snapshot_times must lie in [0, t_final]")
        elif self.snapshot_every <= 0:
            raise ValueError("snapshot_every must be positive")

    def resolved_snapshot_times(self) -> np.ndarray:
        if self.snapshot_times is not None:
            ts = np.unique(np.asarray(self.snapshot_times, dtype=float))
        else:
            ts = np.arange(0.0, self.t_final + 0.5 * self.snapshot_every, self.snapshot_every)
            ts = ts[ts <= self.t_final]
        if ts.size == 0 or ts[-1] < self.t_final:
            ts = np.append(ts, self.t_final)
        return ts


def default_config(model: Model) -> SimConfig:
    """Reference single-run setup: domain [-200, 40] at dx=0.1, dt=0.02,
    T=200, wild type on the left and the introduced block on [0, 40]."""
    return SimConfig(
        model=model,
        grid=Grid1D(-200.0, 40.0, 2401),
        dt=0.02,
        t_final=200.0,
        snapshot_every=5.0,
        initial=InitialCondition(0.0, _left_values(model), _right_values(model)),
    )


def _left_values(model: Model) -> tuple[float, ...]:
    if model.kind in (SystemKind.SCALAR_CUBIC, SystemKind.SCALAR_RATIONAL):
        return (0.0,)
    if model.kind in FREQUENCY_KINDS:
        return (0.0, 1.0)
    return (0.0, 1.0)


def _right_values(model: Model, block: float = 0.95) -> tuple[float, ...]:
    if model.kind in (SystemKind.SCALAR_CUBIC, SystemKind.SCALAR_RATIONAL):
        return (block,)
    if model.kind in FREQUENCY_KINDS:
        return (block, 1.0)
    return (block, 1.0 - block)


def initial_state(config: SimConfig) -> FieldState:
    grid, init = config.grid, config.initial
    x = grid.x
    right = x >= init.interface_x
    nfields = config.model.nfields
    if len(init.left) != nfields or len(init.right) != nfields:
        raise ValueError(f"initial condition needs {nfields} field value(s)")
    fields = []
    for k in range(nfields):
        u = np.full(grid.nx, float(init.left[k]))
        u[right] = float(init.right[k])
        fields.append(u)
    return FieldState(0.0, fields[0], fields[1] if nfields == 2 else None)


_KIND_CODE = {
    SystemKind.DENSITY_DRIVE: backend.KIND_DENSITY,
    SystemKind.WOLBACHIA: backend.KIND_WOLBACHIA,
    SystemKind.FREQUENCY_DRIVE: backend.KIND_FREQUENCY,
    SystemKind.FREQUENCY_RATIONAL: backend.KIND_FREQUENCY,
    SystemKind.SCALAR_CUBIC: backend.KIND_SCALAR,
    SystemKind.SCALAR_RATIONAL: backend.KIND_SCALAR,
}


def kernel_params(model: Model) -> tuple[int, np.ndarray]:
    """(kind code, packed parameter vector) for the stepping kernels."""
    demo = model.demography
    base = [float(variant_code(demo.variant)), demo.r, demo.a, 0.0, 0.0, 0.0]
    kind = _KIND_CODE[model.kind]
    if model.kind is SystemKind.DENSITY_DRIVE:
        g = model.genotype
        base[3:6] = [g.omega_d, g.beta_d, g.d_d]
    elif model.kind is SystemKind.WOLBACHIA:
        base[3:5] = [model.wolbachia.f_w, model.wolbachia.omega_h]
    else:
        rational = model.kind in (SystemKind.FREQUENCY_RATIONAL, SystemKind.SCALAR_RATIONAL)
        base[3:5] = [model.s, 1.0 if rational else 0.0]
    return kind, np.asarray(base, dtype=float)


class Integrator:
    """Stateful wrapper over the advance kernel for one configuration."""

    def __init__(self, config: SimConfig):
        self.config = config
        self.kind, self.params = kernel_params(config.model)
        self.state = initial_state(config)
        self.step_index = 0
        self.max_clip = 0.0

    def advance_steps(self, nsteps: int):
        if nsteps <= 0:
            return
        cfg = self.config
        clip, bad = backend.advance(
            self.kind,
            self.state.u1,
            self.state.u2,
            int(nsteps),
            cfg.dt,
            cfg.grid.dx,
            self.params,
            not cfg.diffusion_only,
        )
        self.max_clip = max(self.max_clip, clip)
        if bad >= 0:
            t_bad = (self.step_index + bad) * cfg.dt
            u = self.state.u1
            finite = np.isfinite(u)
            if self.state.u2 is not None:
                finite &= np.isfinite(self.state.u2)
            cell = int(np.nonzero(~finite)[0][0]) if not finite.all() else 0
            raise SolverBlowupError(t_bad, cell, cfg.grid.x[cell])
        self.step_index += nsteps
        self.state.t = self.step_index * cfg.dt

    def advance_to_step(self, target: int):
        self.advance_steps(target - self.step_index)


def step(state: FieldState, config: SimConfig) -> FieldState:
    """Advance a single dt from an arbitrary state (diagnostic entry point)."""
    integ = Integrator(config)
    integ.state = state.copy()
    integ.step_index = int(round(state.t / config.dt))
    integ.advance_steps(1)
    return integ.state


def simulate(config: SimConfig) -> list[FieldState]:
    """Deterministic run returning snapshots at the requested times.

    Snapshot times are rounded to the nearest step; the final state is
    always included.  t_final = 0 returns the initial state only.
    """
    snapshots, _ = simulate_with_diagnostics(config)
    return snapshots


def simulate_with_diagnostics(config: SimConfig) -> tuple[list[FieldState], float]:
    """simulate() plus the maximum clipping magnitude applied during the run."""
    integ = Integrator(config)
    times = config.resolved_snapshot_times()
    steps = sorted({int(round(t / config.dt)) for t in times})
    total = int(round(config.t_final / config.dt))
    steps = [min(s, total) for s in steps]
    if not steps or steps[-1] != total:
        steps.append(total)
    out = []
    for target in steps:
        integ.advance_to_step(target)
        out.append(integ.state.copy())
    return out, integ.max_clip


def write_snapshots_csv(path, snapshots: list[FieldState], grid: Grid1D):
    """Snapshot export: rows t,x,u1,u2 (u2 blank for scalar models)."""
    x = grid.x
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "x", "u1", "u2"])
        for snap in snapshots:
            has_u2 = snap.u2 is not None
            for i in range(x.size):
                writer.writerow([
                    format(snap.t, ".17g"),
                    format(x[i], ".17g"),
                    format(snap.u1[i], ".17g"),
                    format(snap.u2[i], ".17g") if has_u2 else "",
                ])
