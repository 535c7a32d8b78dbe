"""Closed-form wave results as executable predicates and formulas.

Two families of statements about the logistic drive system are encoded:

* a nonexistence region in the (s, r) plane where every traveling wave is
  trivial (the drive profile is identically zero) and the total population
  travels as a pulled front at speed >= 2*sqrt(r);
* sign conditions for the speed of nontrivial waves, five clauses evaluated
  in a fixed order (1a, 1b, 1c give speed < 0; 2a, 2b give speed > 0).

Orientation note: speeds here follow the solver's geometry (wild type on
the left, introduced block on the right), where a successful invasion moves
the front leftward, i.e. viable <=> speed < 0.  ``cubic_wave_speed`` is the
one exception: it returns the classical closed form (2-3s)/sqrt(2s), which
measures the front in the direction of drive advance; in the solver's
orientation an invading cubic front therefore measures -cubic_wave_speed(s).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .models import SystemKind, scalar_reaction

#: Inequalities within this slack of equality are resolved toward Unknown.
TIE_TOL = 1e-12

SIGN_NEGATIVE = "Negative"
SIGN_POSITIVE = "Positive"
SIGN_UNKNOWN = "Unknown"


@dataclass(frozen=True)
class AnalyticVerdict:
    trivial_only: bool
    sign: str
    clause: str  # one of 1a, 1b, 1c, 2a, 2b, none
    speed_bounds: tuple[float, float] | None = None


def theorem1_trivial(s: float, r: float) -> bool:
    """Nonexistence region: s > 1/2 and 0 < r <= (2s-1)/(2(1-s))."""
    if not 0.0 <= s < 1.0 or r <= 0.0:
        raise ValueError("need s in [0, 1) and r > 0")
    if s <= 0.5 + TIE_TOL:
        return False
    return r <= (2.0 * s - 1.0) / (2.0 * (1.0 - s)) - TIE_TOL


def clause_1b_lower_bound(s: float) -> float:
    """Lower r-bound of the 1b negative-speed clause (s in (1/2, 2/3])."""
    theta = (2.0 * s - 1.0) / s
    ratio = (1.0 - s) * theta**3 / (2.0 - 3.0 * s + theta**3)
    return (s / (1.0 - s)) / (1.0 - ratio**0.25)


def clause_2b_upper_bound(s: float) -> float:
    """Upper r-bound of the 2b positive-speed clause (s > 2/3)."""
    num = s**3 * (3.0 * s - 2.0)
    den = (2.0 * s - 1.0) ** 3 - num
    if den <= 0.0:
        return math.inf
    return num / den


def _strict(value: float, bound: float, *, below: bool) -> bool:
    """value strictly on one side of bound with TIE_TOL slack."""
    return value <= bound - TIE_TOL if below else value >= bound + TIE_TOL


def theorem2_sign(s: float, r: float) -> AnalyticVerdict:
    """First matching sign clause in order 1a, 1b, 1c, 2a, 2b.

    1a also reports the speed upper bound -2*sqrt(1-2s).  Ties within
    TIE_TOL of a clause boundary fall through (toward Unknown).
    """
    if not 0.0 < s < 1.0 or r <= 0.0:
        raise ValueError("need s in (0, 1) and r > 0")
    trivial = theorem1_trivial(s, r)

    # 1a: s <= 1/2
    if _strict(s, 0.5, below=True):
        bound = -2.0 * math.sqrt(1.0 - 2.0 * s)
        return AnalyticVerdict(trivial, SIGN_NEGATIVE, "1a", (-math.inf, bound))

    in_mid = s >= 0.5 - TIE_TOL and _strict(s, 2.0 / 3.0, below=True)
    above_eradication = _strict(r, s / (1.0 - s), below=False)

    # 1b: s in [1/2, 2/3], r > s/(1-s), lower_bound <= r <= 4
    if in_mid and above_eradication and _strict(r, 4.0, below=True):
        if _strict(r, clause_1b_lower_bound(s), below=False):
            return AnalyticVerdict(trivial, SIGN_NEGATIVE, "1b")

    # 1c: s in [1/2, 2/3], r >= 4, quartic inequality
    if in_mid and _strict(r, 4.0, below=False):
        q = (1.0 - s / (r * (1.0 - s))) ** 4
        theta = (2.0 * s - 1.0) / s
        lhs = q * (2.0 - 3.0 * s)
        rhs = (r + 1.0 - q) * theta**3
        if lhs >= rhs + TIE_TOL:
            return AnalyticVerdict(trivial, SIGN_NEGATIVE, "1c")

    # 2a: s >= 2/3 and r <= 4
    if _strict(s, 2.0 / 3.0, below=False) and _strict(r, 4.0, below=True):
        return AnalyticVerdict(trivial, SIGN_POSITIVE, "2a")

    # 2b: s > 2/3 and r < bound
    if _strict(s, 2.0 / 3.0, below=False) and _strict(r, clause_2b_upper_bound(s), below=True):
        return AnalyticVerdict(trivial, SIGN_POSITIVE, "2b")

    return AnalyticVerdict(trivial, SIGN_UNKNOWN, "none")


def analytic_verdict(s: float, r: float) -> AnalyticVerdict:
    """theorem2_sign plus the trivial-regime speed bound c >= 2*sqrt(r)."""
    v = theorem2_sign(s, r)
    if v.trivial_only:
        return AnalyticVerdict(True, v.sign, v.clause, (kpp_speed(r), math.inf))
    return v


def cubic_wave_speed(s: float) -> float:
    """Bistable front speed (2-3s)/sqrt(2s) of the scalar cubic equation.

    Measured in the direction of drive advance (see module docstring for
    the orientation mapping); zero exactly at s = 2/3.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError("cubic speed needs s in (0, 1]")
    return (2.0 - 3.0 * s) / math.sqrt(2.0 * s)


def kpp_speed(r: float) -> float:
    """Pulled-front speed 2*sqrt(r) of the wild type invading open space."""
    if r <= 0.0:
        raise ValueError("growth rate must be positive")
    return 2.0 * math.sqrt(r)


def spreading_upper_bound(s: float, r: float) -> float | None:
    """Upper bound on the drive's spreading speed from the logistic
    supersolution; None in the uniform-extinction regime."""
    if not 0.0 < s < 1.0 or r <= 0.0:
        raise ValueError("need s in (0, 1) and r > 0")
    threshold = (2.0 * s - 1.0) / (2.0 * (1.0 - s))
    if r <= threshold:
        return None
    return 2.0 * math.sqrt(2.0 * (1.0 - s) * (r - threshold))


def scalar_reaction_integral(kind: SystemKind, s: float) -> float:
    """Integral over p in [0, 1] of the scalar reaction; its sign is the
    opposite of the bistable wave-speed sign in the solver's orientation."""
    value, _ = quad(lambda p: float(scalar_reaction(kind, s, p)), 0.0, 1.0, epsabs=1e-12)
    return value


def scalar_zero_level(kind: SystemKind, tol: float = 1e-4) -> float:
    """Fitness cost at which the scalar wave speed changes sign.

    Root of s -> integral of the reaction over [0, 1], bracketed in
    (1/2, 1) and bisected to ``tol``; 2/3 exactly for the cubic variant,
    approximately 0.697 for the rational one.
    """
    lo, hi = 0.55, 0.95
    f_lo = scalar_reaction_integral(kind, lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = scalar_reaction_integral(kind, mid)
        if (f_mid > 0.0) == (f_lo > 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
