"""Dynamical systems: reaction terms, equilibria and parameter containers.

Six systems share one 1D diffusion backbone and differ in their reaction
terms:

* DENSITY_DRIVE      -- allele densities (n_D, n_O) with biased transmission;
* FREQUENCY_DRIVE    -- equivalent (p, n) form with the 2*grad(log n).grad(p)
                        advection on the frequency equation;
* FREQUENCY_RATIONAL -- same (p, n) backbone but the frequency reaction is the
                        density-independent rational term (advected variant);
* SCALAR_CUBIC       -- frequency-only cubic s*p(1-p)(p-theta);
* SCALAR_RATIONAL    -- frequency-only cubic divided by the mean fitness
                        1 - s + s(1-p)^2;
* WOLBACHIA          -- infected/uninfected densities (n_w, n_s) with
                        cytoplasmic incompatibility.

All frequency ratios use a regularized denominator max(n, N_FLOOR): the
systems lose Lipschitz regularity as n -> 0 and the floor prevents division
blow-up without altering the dynamics at the resolutions used.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .demography import Demography, carrying_capacity

#: Regularization floor for total-density denominators.
N_FLOOR = 1e-12


class SystemKind(enum.Enum):
    DENSITY_DRIVE = "density"
    FREQUENCY_DRIVE = "frequency"
    FREQUENCY_RATIONAL = "frequency-rational"
    SCALAR_CUBIC = "cubic"
    SCALAR_RATIONAL = "rational"
    WOLBACHIA = "wolbachia"


SCALAR_KINDS = {SystemKind.SCALAR_CUBIC, SystemKind.SCALAR_RATIONAL}
FREQUENCY_KINDS = {SystemKind.FREQUENCY_DRIVE, SystemKind.FREQUENCY_RATIONAL}


@dataclass(frozen=True)
class GenotypeParams:
    """Drive-homozygote fitness parameters relative to the wild type.

    omega_d: juvenile survival, beta_d: gamete fecundity, d_d: death rate.
    """

    omega_d: float = 1.0
    beta_d: float = 1.0
    d_d: float = 1.0

    def __post_init__(self):
        if self.omega_d < 0 or self.beta_d < 0:
            raise ValueError("survival and fecundity factors must be nonnegative")
        if self.d_d <= 0:
            raise ValueError("relative death rate must be positive")

    @classmethod
    def survival_selection(cls, s: float) -> "GenotypeParams":
        """Fitness cost s on juvenile survival: (omega, beta, d) = (1-s, 1, 1)."""
        _check_cost(s)
        return cls(omega_d=1.0 - s, beta_d=1.0, d_d=1.0)

    @classmethod
    def fecundity_selection(cls, s: float) -> "GenotypeParams":
        """Fitness cost s on gamete fecundity: (omega, beta, d) = (1, 1-s, 1)."""
        _check_cost(s)
        return cls(omega_d=1.0, beta_d=1.0 - s, d_d=1.0)


def _check_cost(s: float):
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"fitness cost s must lie in [0, 1], got {s}")


@dataclass(frozen=True)
class WolbachiaParams:
    """f_w: fertility factor of infected mothers; omega_h: hatching factor
    for incompatible crosses (infected father x uninfected mother)."""

    f_w: float = 0.9
    omega_h: float = 0.1

    def __post_init__(self):
        if not 0.0 <= self.f_w <= 1.0 or not 0.0 <= self.omega_h <= 1.0:
            raise ValueError("f_w and omega_h must lie in [0, 1]")


def wolbachia_equilibrium(params: WolbachiaParams) -> float | None:
    """Unstable interior infection frequency (1-f_w)/(1-omega_h).

    None when omega_h > f_w (the equilibrium leaves [0, 1]); omega_h = 1 is
    degenerate and rejected.
    """
    if params.omega_h >= 1.0:
        raise ValueError("omega_h = 1 is degenerate (no interior equilibrium)")
    if params.omega_h > params.f_w:
        return None
    return (1.0 - params.f_w) / (1.0 - params.omega_h)


@dataclass(frozen=True)
class Model:
    """A system tag plus its demography and genotype/infection parameters."""

    kind: SystemKind
    demography: Demography = field(default_factory=Demography)
    genotype: GenotypeParams = field(default_factory=GenotypeParams)
    wolbachia: WolbachiaParams = field(default_factory=WolbachiaParams)
    s: float = 0.0  # fitness cost used by frequency/scalar reactions

    @property
    def nfields(self) -> int:
        return 1 if self.kind in SCALAR_KINDS else 2

    def drive_carrying_capacity(self) -> float:
        """Equilibrium density of the invading type alone (0 for eradication)."""
        if self.kind is SystemKind.WOLBACHIA:
            return carrying_capacity(self.demography, self.wolbachia.f_w)
        if self.kind in SCALAR_KINDS:
            return 1.0
        return carrying_capacity(self.demography, self.genotype.omega_d * self.genotype.beta_d**2)


def survival_drive_model(s: float, demography: Demography) -> Model:
    return Model(SystemKind.DENSITY_DRIVE, demography, GenotypeParams.survival_selection(s), s=s)


def fecundity_drive_model(s: float, demography: Demography) -> Model:
    return Model(SystemKind.DENSITY_DRIVE, demography, GenotypeParams.fecundity_selection(s), s=s)


# ---------------------------------------------------------------------------
# Reaction terms.  All accept scalars or numpy arrays.
# ---------------------------------------------------------------------------

def drive_reaction(model: Model, n_d, n_o):
    """Reaction rates (dn_D/dt, dn_O/dt) of the two-density drive system."""
    g, demo = model.genotype, model.demography
    n = n_d + n_o
    nfl = np.maximum(n, N_FLOOR)
    B = demo.birth_rate(n)
    D = demo.death_rate(n)
    rate_d = n_d * (g.omega_d * g.beta_d * B * (2.0 * n_o + g.beta_d * n_d) / nfl - g.d_d * D)
    rate_o = n_o * (B * n_o / nfl - D)
    return rate_d, rate_o


def frequency_reaction(model: Model, p, n):
    """Reaction rates (dp/dt, dn/dt) and the advection coefficient 2/n.

    The frequency reaction is B(n)*p(1-p)(s*p - 2s + 1) for the drive system
    and p(1-p)(s*p - 2s + 1)/(1 - s + s(1-p)^2) for the rational variant
    (density-independent numerator, no B factor).  The advection coefficient
    multiplies grad(n).grad(p) in the frequency equation.
    """
    if np.any(np.asarray(n) <= 0):
        raise ValueError("total density must be positive; regularize before evaluating")
    s, demo = model.s, model.demography
    B = demo.birth_rate(n)
    D = demo.death_rate(n)
    cubic = p * (1.0 - p) * (s * p - 2.0 * s + 1.0)
    if model.kind is SystemKind.FREQUENCY_RATIONAL:
        rate_p = cubic / (1.0 - s + s * (1.0 - p) ** 2)
    else:
        rate_p = B * cubic
    rate_n = n * ((1.0 - s + s * (1.0 - p) ** 2) * B - D)
    return rate_p, rate_n, 2.0 / np.maximum(n, N_FLOOR)


def scalar_reaction(kind: SystemKind, s: float, p):
    """Frequency-only reaction: cubic, or cubic over the mean fitness."""
    # expanded form s*(p - (2s-1)/s) = s*p - 2s + 1 avoids the s = 0 division
    value = np.multiply(p, 1.0 - p) * (s * p - 2.0 * s + 1.0)
    if kind is SystemKind.SCALAR_CUBIC:
        return value
    if kind is not SystemKind.SCALAR_RATIONAL:
        raise ValueError(f"not a scalar system: {kind}")
    denom = 1.0 - s + s * (1.0 - np.asarray(p)) ** 2
    if np.any(denom == 0.0):
        raise ValueError("mean fitness vanishes (s = 1 and p = 1)")
    return value / denom


def wolbachia_reaction(model: Model, n_w, n_s):
    """Reaction rates (dn_w/dt, dn_s/dt) of the infected/uninfected system."""
    w, demo = model.wolbachia, model.demography
    n = n_w + n_s
    nfl = np.maximum(n, N_FLOOR)
    B = demo.birth_rate(n)
    D = demo.death_rate(n)
    pw = n_w / nfl
    ps = n_s / nfl
    rate_w = (pw * pw * w.f_w + pw * ps * w.f_w) * B * n - D * n_w
    rate_s = (ps * ps + pw * ps * w.omega_h) * B * n - D * n_s
    return rate_w, rate_s


def reaction_rates(model: Model, u1, u2=None):
    """Uniform entry point: reaction of (u1, u2) per the model kind."""
    kind = model.kind
    if kind is SystemKind.DENSITY_DRIVE:
        return drive_reaction(model, u1, u2)
    if kind in FREQUENCY_KINDS:
        rate_p, rate_n, _ = frequency_reaction(model, u1, np.maximum(u2, N_FLOOR))
        return rate_p, rate_n
    if kind is SystemKind.WOLBACHIA:
        return wolbachia_reaction(model, u1, u2)
    return scalar_reaction(kind, model.s, u1), None
