"""Pure-Python/NumPy fallback for the hot kernels.

Semantically equivalent to the compiled module ``drivewave._kernels``:
the IMEX time stepper (implicit diffusion via a banded solve, explicit
reaction, mirrored-ghost Neumann boundaries) and the deme Gillespie loop.
The PDE stepper here leans on scipy's LAPACK banded solver instead of the
hand-rolled Thomas elimination; the Gillespie loop mirrors the compiled
event loop draw-for-draw so outcomes are backend-independent.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_banded

from ._rng import SplitMix64

BACKEND_NAME = "python"

# System kind codes shared with the compiled kernels.
KIND_DENSITY = 0
KIND_WOLBACHIA = 1
KIND_FREQUENCY = 2
KIND_SCALAR = 3

_N_FLOOR = 1e-12


def _birth(variant: int, r: float, a: float, n):
    if variant == 0:  # logistic B
        return r * (1.0 - n) + 1.0
    if variant == 1:  # Allee B, clamped
        return np.maximum(r * (1.0 - n) * (n - a) + 1.0, 0.0)
    return np.full_like(n, r + 1.0)


def _death(variant: int, r: float, a: float, n):
    if variant == 2:  # logistic D
        return 1.0 + r * n
    if variant == 3:  # Allee D
        return 1.0 + r + r * (n - 1.0) * (n - a)
    return np.ones_like(n)


def _reaction(kind: int, params, u1, u2):
    variant = int(params[0])
    r, a = params[1], params[2]
    if kind == KIND_DENSITY:
        omega_d, beta_d, d_d = params[3], params[4], params[5]
        n = u1 + u2
        nfl = np.maximum(n, _N_FLOOR)
        B = _birth(variant, r, a, n)
        D = _death(variant, r, a, n)
        r1 = u1 * (omega_d * beta_d * B * (2.0 * u2 + beta_d * u1) / nfl - d_d * D)
        r2 = u2 * (B * u2 / nfl - D)
        return r1, r2
    if kind == KIND_WOLBACHIA:
        f_w, omega_h = params[3], params[4]
        n = u1 + u2
        nfl = np.maximum(n, _N_FLOOR)
        B = _birth(variant, r, a, n)
        D = _death(variant, r, a, n)
        pw = u1 / nfl
        ps = u2 / nfl
        r1 = (pw * pw * f_w + pw * ps * f_w) * B * n - D * u1
        r2 = (ps * ps + pw * ps * omega_h) * B * n - D * u2
        return r1, r2
    if kind == KIND_FREQUENCY:
        s, rational = params[3], int(params[4])
        p, n = u1, u2
        nfl = np.maximum(n, _N_FLOOR)
        B = _birth(variant, r, a, n)
        D = _death(variant, r, a, n)
        cubic = p * (1.0 - p) * (s * p - 2.0 * s + 1.0)
        if rational:
            r1 = cubic / (1.0 - s + s * (1.0 - p) ** 2)
        else:
            r1 = B * cubic
        r2 = n * ((1.0 - s + s * (1.0 - p) ** 2) * B - D)
        return r1, r2
    # scalar
    s, rational = params[3], int(params[4])
    value = u1 * (1.0 - u1) * (s * u1 - 2.0 * s + 1.0)
    if rational:
        value = value / (1.0 - s + s * (1.0 - u1) ** 2)
    return value, None


def _banded(diag, lower, upper):
    nx = diag.shape[0]
    ab = np.zeros((3, nx))
    ab[0, 1:] = upper[:-1]
    ab[1, :] = diag
    ab[2, :-1] = lower[1:]
    return ab


def _diffusion_banded(nx: int, mu: float):
    diag = np.full(nx, 1.0 + 2.0 * mu)
    lower = np.full(nx, -mu)
    upper = np.full(nx, -mu)
    upper[0] = -2.0 * mu  # mirrored ghost at both ends
    lower[-1] = -2.0 * mu
    return _banded(diag, lower, upper)


def advance(kind, u1, u2, nsteps, dt, dx, params, react=True):
    """Advance the fields in place by nsteps IMEX steps.

    Returns (max_clip, bad_step): max_clip is the largest clipping magnitude
    applied to keep densities nonnegative / frequencies in [0, 1]; bad_step
    is -1, or the 1-based step at which a non-finite value first appeared
    (the fields are left in their offending state for diagnosis).
    """
    nx = u1.shape[0]
    mu = dt / (dx * dx)
    ab = _diffusion_banded(nx, mu)
    two_fields = u2 is not None
    densities_second = kind in (KIND_DENSITY, KIND_WOLBACHIA, KIND_FREQUENCY)
    u1_is_density = kind in (KIND_DENSITY, KIND_WOLBACHIA)
    max_clip = 0.0

    for step in range(1, nsteps + 1):
        if react:
            r1, r2 = _reaction(kind, params, u1, u2)
        else:
            r1, r2 = 0.0, 0.0 if two_fields else None
        rhs1 = u1 + dt * r1

        if kind == KIND_FREQUENCY:
            # frequency equation carries the 2*grad(log n).grad(p) advection,
            # folded into the implicit solve with the coefficient lagged at
            # the current density profile
            nfl = np.maximum(u2, _N_FLOOR)
            coef = np.zeros(nx)
            coef[1:-1] = (u2[2:] - u2[:-2]) / (2.0 * dx) * (2.0 / nfl[1:-1])
            off = coef * dt / (2.0 * dx)
            diag = np.full(nx, 1.0 + 2.0 * mu)
            lower = np.full(nx, -mu)
            upper = np.full(nx, -mu)
            upper[1:-1] -= off[1:-1]
            lower[1:-1] += off[1:-1]
            upper[0] = -2.0 * mu
            lower[-1] = -2.0 * mu
            new1 = solve_banded((1, 1), _banded(diag, lower, upper), rhs1)
            new2 = solve_banded((1, 1), ab, u2 + dt * r2)
        elif two_fields:
            rhs = np.stack([rhs1, u2 + dt * r2], axis=1)
            sol = solve_banded((1, 1), ab, rhs)
            new1, new2 = sol[:, 0], sol[:, 1]
        else:
            new1 = solve_banded((1, 1), ab, rhs1)
            new2 = None

        if u1_is_density:
            max_clip = max(max_clip, float(-new1.min()) if new1.min() < 0 else 0.0)
            np.maximum(new1, 0.0, out=new1)
        else:  # frequency field
            over = max(float(-new1.min()), float(new1.max() - 1.0))
            if over > 0:
                max_clip = max(max_clip, over)
            np.clip(new1, 0.0, 1.0, out=new1)
        if two_fields:
            if new2.min() < 0:
                max_clip = max(max_clip, float(-new2.min()))
                np.maximum(new2, 0.0, out=new2)
            u2[:] = new2
        u1[:] = new1

        ok = np.isfinite(u1).all() and (not two_fields or np.isfinite(u2).all())
        if not ok:
            return max_clip, step
    return max_clip, -1


# ---------------------------------------------------------------------------
# Gillespie deme model
# ---------------------------------------------------------------------------

_EXP_NEG1 = math.exp(-1.0)
_REFRESH_EVERY = 1 << 16

OUTCOME_DRIVE_LOST = 0
OUTCOME_DRIVE_FIXED = 1
OUTCOME_TIMEOUT = 2


def _deme_rates(di, oi, K, variant, r, a, omega_d, beta_d, d_d, conv, cross_to_wild):
    n_tot = di + oi
    if n_tot == 0:
        return 0.0, 0.0, 0.0, 0.0
    n = n_tot / K
    if variant == 0:
        B = r * (1.0 - n) + 1.0
    elif variant == 1:
        B = r * (1.0 - n) * (n - a) + 1.0
    else:
        B = r + 1.0
    if B < 0.0:
        B = 0.0  # birth rates cannot be negative at any occupancy
    if variant == 2:
        D = 1.0 + r * n
    elif variant == 3:
        D = 1.0 + r + r * (n - 1.0) * (n - a)
    else:
        D = 1.0
    b_d = omega_d * beta_d * B * di * (conv * oi + beta_d * di) / n_tot
    b_o = B * oi * (oi + cross_to_wild * di) / n_tot
    return b_d, b_o, d_d * D * di, D * oi


def gillespie_run(seed, init_d, init_o, K, t_final, variant, r, a,
                  omega_d, beta_d, d_d, conv, cross_to_wild, emig_prob):
    """Event-driven run of the deme model.  Mirrors the compiled kernel.

    Returns (outcome, t_end, events, max_deme_total, final_d, final_o).
    """
    rng = SplitMix64(seed)
    nd = len(init_d)
    d = list(init_d)
    o = list(init_o)
    rates = [list(_deme_rates(d[i], o[i], K, variant, r, a, omega_d, beta_d,
                              d_d, conv, cross_to_wild)) for i in range(nd)]
    deme_tot = [sum(rates[i]) for i in range(nd)]
    total = 0.0
    for i in range(nd):
        total += deme_tot[i]
    sum_d = sum(d)
    sum_o = sum(o)
    max_occupancy = max((d[i] + o[i]) for i in range(nd))

    t = 0.0
    events = 0
    outcome = OUTCOME_TIMEOUT
    # an allele absent from the start cannot "disappear": its extinction
    # check is disabled so a drive-only collapse still runs to DriveLost
    check_d = sum_d > 0
    check_o = sum_o > 0

    def refresh(i):
        nonlocal total
        new = list(_deme_rates(d[i], o[i], K, variant, r, a, omega_d, beta_d,
                               d_d, conv, cross_to_wild))
        total += sum(new) - deme_tot[i]
        rates[i] = new
        deme_tot[i] = sum(new)

    while True:
        if check_d and sum_d == 0:
            outcome = OUTCOME_DRIVE_LOST
            break
        if check_o and sum_o == 0:
            outcome = OUTCOME_DRIVE_FIXED
            break
        if total <= 0.0:
            break
        events += 1
        if events % _REFRESH_EVERY == 0:
            total = 0.0
            for i in range(nd):
                deme_tot[i] = rates[i][0] + rates[i][1] + rates[i][2] + rates[i][3]
                total += deme_tot[i]
        u = rng.next_double()
        t += -math.log(1.0 - u) / total
        if t > t_final:
            t = t_final
            outcome = OUTCOME_TIMEOUT
            break
        target = rng.next_double() * total
        i = 0
        acc = 0.0
        while i < nd - 1 and acc + deme_tot[i] <= target:
            acc += deme_tot[i]
            i += 1
        target -= acc
        rd = rates[i]
        if target < rd[0]:
            channel = 0
        elif target < rd[0] + rd[1]:
            channel = 1
        elif target < rd[0] + rd[1] + rd[2]:
            channel = 2
        else:
            channel = 3

        touched = {i}
        if channel <= 1:  # birth of drive (0) or wild (1) genotype
            k = 0
            prod = 1.0
            while True:
                prod *= rng.next_double()
                if prod <= _EXP_NEG1:
                    break
                k += 1
            for _ in range(k):
                dest = i
                if rng.next_double() < emig_prob:
                    if rng.next_double() < 0.5:
                        dest = i - 1 if i > 0 else i + 1
                    else:
                        dest = i + 1 if i < nd - 1 else i - 1
                if channel == 0:
                    d[dest] += 1
                    sum_d += 1
                else:
                    o[dest] += 1
                    sum_o += 1
                touched.add(dest)
                occ = d[dest] + o[dest]
                if occ > max_occupancy:
                    max_occupancy = occ
        elif channel == 2:
            d[i] -= 1
            sum_d -= 1
        else:
            o[i] -= 1
            sum_o -= 1
        for j in sorted(touched):
            refresh(j)

    return outcome, t, events, max_occupancy, np.array(d), np.array(o)
