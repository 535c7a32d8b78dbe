"""Per-capita birth and death rates of the wild-type population.

Four density-dependence variants are supported, all normalized so that the
wild-type carrying capacity is 1:

==================  =========================  =======================
variant             B(n)                       D(n)
==================  =========================  =======================
LOGISTIC_B          r(1-n) + 1                 1
ALLEE_B             max(r(1-n)(n-a) + 1, 0)    1
CONST_B_LOGISTIC_D  r + 1                      1 + rn
CONST_B_ALLEE_D     r + 1                      1 + r + r(n-1)(n-a)
==================  =========================  =======================

``r`` is the wild-type intrinsic growth rate, ``a`` the Allee threshold
(weak Allee effect for a in (-1, 0], strong for a in (0, 1)).  The clamp on
the Allee birth rate applies to B only, never to B - D.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

#: Carrying-capacity root-finding tolerance.
CC_TOL = 1e-12
#: Pre-scan resolution for the Allee variants' rightmost sign change.
CC_SCAN_POINTS = 10_000


class DemographyVariant(enum.Enum):
    LOGISTIC_B = "logistic_b"
    ALLEE_B = "allee_b"
    CONST_B_LOGISTIC_D = "const_b_logistic_d"
    CONST_B_ALLEE_D = "const_b_allee_d"


_HAS_ALLEE = {DemographyVariant.ALLEE_B, DemographyVariant.CONST_B_ALLEE_D}


@dataclass(frozen=True)
class Demography:
    """Wild-type demography: variant tag plus (r, a) parameters."""

    variant: DemographyVariant = DemographyVariant.LOGISTIC_B
    r: float = 1.0
    a: float = 0.0

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError(f"growth rate r must be positive, got {self.r}")
        if self.variant in _HAS_ALLEE and not -1.0 < self.a < 1.0:
            raise ValueError(f"Allee threshold a must lie in (-1, 1), got {self.a}")

    def birth_rate(self, n):
        """Per-capita birth rate B(n), n >= 0 (scalar or array)."""
        r, a = self.r, self.a
        if self.variant is DemographyVariant.LOGISTIC_B:
            return r * (1.0 - n) + 1.0
        if self.variant is DemographyVariant.ALLEE_B:
            return np.maximum(r * (1.0 - n) * (n - a) + 1.0, 0.0)
        return r + 1.0 if np.isscalar(n) else np.full_like(np.asarray(n, float), r + 1.0)

    def death_rate(self, n):
        """Per-capita death rate D(n), n >= 0 (scalar or array)."""
        r, a = self.r, self.a
        if self.variant is DemographyVariant.CONST_B_LOGISTIC_D:
            return 1.0 + r * n
        if self.variant is DemographyVariant.CONST_B_ALLEE_D:
            return 1.0 + r + r * (n - 1.0) * (n - a)
        return 1.0 if np.isscalar(n) else np.ones_like(np.asarray(n, float))

    def net_rate(self, n, factor: float = 1.0):
        """factor * B(n) - D(n); factor is the relative growth of the focal type."""
        return factor * self.birth_rate(n) - self.death_rate(n)


def carrying_capacity(demo: Demography, factor: float = 1.0) -> float:
    """Largest n in [0, 1] with factor*B(n) - D(n) >= 0, or 0 if none.

    factor is 1 for the wild type, 1-s for a pure-drive population and f_w
    for a fully infected one.  Closed form for the logistic variants; for the
    Allee variants a 10^4-point scan locates the rightmost sign change and
    bisection refines it to ``CC_TOL``.
    """
    if factor < 0:
        raise ValueError("relative growth factor must be nonnegative")
    if factor == 0.0:
        return 0.0
    r = demo.r
    if demo.variant is DemographyVariant.LOGISTIC_B:
        # factor*(r(1-n)+1) = 1, decreasing in n
        root = 1.0 - (1.0 - factor) / (r * factor)
        return min(max(root, 0.0), 1.0)
    if demo.variant is DemographyVariant.CONST_B_LOGISTIC_D:
        # factor*(r+1) = 1 + rn, decreasing in n
        root = (factor * (r + 1.0) - 1.0) / r
        return min(max(root, 0.0), 1.0)

    phi = lambda n: demo.net_rate(n, factor)
    grid = np.linspace(0.0, 1.0, CC_SCAN_POINTS + 1)
    vals = phi(grid)
    nonneg = np.nonzero(vals >= 0.0)[0]
    if nonneg.size == 0:
        return 0.0
    k = nonneg[-1]
    if k == CC_SCAN_POINTS:
        return 1.0
    lo, hi = grid[k], grid[k + 1]
    while hi - lo > CC_TOL:
        mid = 0.5 * (lo + hi)
        if phi(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def is_eradication_drive(demo: Demography, s: float) -> bool:
    """Whether a pure-drive population with fitness cost s dies out.

    True iff max over [0,1] of (1-s)B(n) - D(n) < 0, evaluated in closed
    form per variant; equivalent to carrying_capacity(demo, 1-s) == 0.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"fitness cost s must lie in [0, 1], got {s}")
    if s == 0.0:
        return False
    if s == 1.0:
        return True
    r, a = demo.r, demo.a
    if demo.variant is DemographyVariant.LOGISTIC_B:
        return r < s / (1.0 - s)
    if demo.variant is DemographyVariant.ALLEE_B:
        return r < 4.0 * s / ((1.0 - s) * (1.0 - a) ** 2)
    if demo.variant is DemographyVariant.CONST_B_LOGISTIC_D:
        return r < s / (1.0 - s)
    # constant B, Allee on D
    if (1.0 - a) ** 2 <= 4.0 * s:
        return True
    return r < 4.0 * s / ((1.0 - a) ** 2 - 4.0 * s)


def bistability_threshold(s: float) -> float | None:
    """Unstable interior drive frequency (2s-1)/s, or None when s <= 1/2."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"fitness cost s must lie in [0, 1], got {s}")
    if s <= 0.5:
        return None
    return (2.0 * s - 1.0) / s


def variant_code(variant: DemographyVariant) -> int:
    """Integer tag used by the compiled kernels."""
    return list(DemographyVariant).index(variant)
