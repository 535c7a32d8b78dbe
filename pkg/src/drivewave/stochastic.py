"""Deme-based stochastic counterpart of the two-density drive system.

Space is a chain of demes with carrying capacity K.  Event rates transcribe
the deterministic reaction terms at deme granularity (density = count/K),
so the large-K limit recovers the PDE dynamics:

* birth of genotype X at the deme rate of the corresponding reaction birth
  term, each event producing a Poisson(1) offspring batch; newborns
  emigrate with a fixed probability to a uniformly chosen nearest neighbor
  (reflecting ends: a boundary deme sends all emigrants to its single
  neighbor);
* death of one individual at per-capita rate d*D(n).

A run stops when one allele disappears from the whole domain or at
t_final.  Runs are fully deterministic given the seed; sweep cells draw
their seeds from splitmix64 mixing of (base_seed, cell_index).
"""

from __future__ import annotations

import csv
import enum
import math
import multiprocessing
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from ._rng import derive_seed
from .demography import variant_code
from .models import Model, SystemKind, survival_drive_model
from .demography import Demography


class StochasticResult(enum.Enum):
    DRIVE_FIXED = "DriveFixed"  # wild type extinct
    DRIVE_LOST = "DriveLost"    # drive extinct
    TIMEOUT = "Timeout"

    @classmethod
    def from_code(cls, code: int) -> "StochasticResult":
        return {
            backend.OUTCOME_DRIVE_FIXED: cls.DRIVE_FIXED,
            backend.OUTCOME_DRIVE_LOST: cls.DRIVE_LOST,
            backend.OUTCOME_TIMEOUT: cls.TIMEOUT,
        }[code]


@dataclass(frozen=True)
class StochasticConfig:
    model: Model = field(default_factory=lambda: survival_drive_model(0.5, Demography(r=1.0)))
    deme_count: int = 100
    K: int = 1000
    emigration_prob: float = 0.1
    t_final: float = 2000.0
    seed: int = 1
    drive_fraction: float = 0.95  # initial drive share in the right-half demes
    conversion_enabled: bool = True

    def __post_init__(self):
        if self.deme_count < 2:
            raise ValueError("need at least 2 demes")
        if self.K < 1:
            raise ValueError("carrying capacity K must be >= 1")
        if not 0.0 <= self.emigration_prob <= 1.0:
            raise ValueError("emigration probability must lie in [0, 1]")
        if self.model.kind is not SystemKind.DENSITY_DRIVE:
            raise ValueError("the stochastic model mirrors the two-density drive system")


@dataclass
class StochasticOutcome:
    result: StochasticResult
    extinction_time: float | None
    events: int
    max_deme_total: int
    final_drive: np.ndarray
    final_wild: np.ndarray

    @property
    def timed_out(self) -> bool:
        return self.result is StochasticResult.TIMEOUT


def initial_counts(config: StochasticConfig) -> tuple[np.ndarray, np.ndarray]:
    """Left half all-wild at K; right half drive-majority, rounded."""
    nd = config.deme_count
    half = nd // 2
    drive = np.zeros(nd, dtype=np.int64)
    wild = np.zeros(nd, dtype=np.int64)
    wild[:half] = config.K
    n_drive = int(round(config.drive_fraction * config.K))
    drive[half:] = n_drive
    wild[half:] = config.K - n_drive
    return drive, wild


def run_stochastic(config: StochasticConfig,
                   init: tuple[np.ndarray, np.ndarray] | None = None) -> StochasticOutcome:
    """One event-driven run; deterministic given config.seed."""
    drive0, wild0 = initial_counts(config) if init is None else init
    demo = config.model.demography
    g = config.model.genotype
    code, t_end, events, max_occ, final_d, final_o = backend.gillespie_run(
        int(config.seed) & ((1 << 64) - 1),
        np.asarray(drive0, dtype=np.int64),
        np.asarray(wild0, dtype=np.int64),
        int(config.K),
        float(config.t_final),
        variant_code(demo.variant),
        demo.r,
        demo.a,
        g.omega_d,
        g.beta_d,
        g.d_d,
        2.0 if config.conversion_enabled else 1.0,
        0.0 if config.conversion_enabled else 1.0,
        config.emigration_prob,
    )
    result = StochasticResult.from_code(code)
    return StochasticOutcome(
        result=result,
        extinction_time=None if result is StochasticResult.TIMEOUT else float(t_end),
        events=int(events),
        max_deme_total=int(max_occ),
        final_drive=np.asarray(final_d),
        final_wild=np.asarray(final_o),
    )


# ---------------------------------------------------------------------------
# outcome sweep
# ---------------------------------------------------------------------------

@dataclass
class StochasticCell:
    s: float
    r: float
    seed: int
    outcome: StochasticOutcome


def _run_cell(args) -> StochasticCell:
    config, s, r, seed = args
    model = survival_drive_model(s, replace(config.model.demography, r=r))
    outcome = run_stochastic(replace(config, model=model, seed=seed))
    return StochasticCell(s, r, seed, outcome)


def stochastic_sweep(config: StochasticConfig, s_values, r_values,
                     base_seed: int = 1, workers: int = 1) -> list[StochasticCell]:
    """One run per (s, r) cell, row-major in s then r.

    Cell index k gets seed derive_seed(base_seed, k): reproducible and
    independent of worker count.
    """
    jobs = []
    k = 0
    for s in s_values:
        for r in r_values:
            jobs.append((config, float(s), float(r), derive_seed(base_seed, k)))
            k += 1
    if workers <= 1 or len(jobs) == 1:
        return [_run_cell(job) for job in jobs]
    with multiprocessing.Pool(processes=workers) as pool:
        return pool.map(_run_cell, jobs, chunksize=1)


STOCHASTIC_HEADER = ["s", "r", "seed", "result", "extinction_time", "events"]


def write_stochastic_csv(path, cells: list[StochasticCell]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(STOCHASTIC_HEADER)
        for cell in cells:
            ext = cell.outcome.extinction_time
            writer.writerow([
                format(cell.s, ".17g"),
                format(cell.r, ".17g"),
                str(cell.seed),
                cell.outcome.result.value,
                "" if ext is None else format(ext, ".17g"),
                str(cell.outcome.events),
            ])
