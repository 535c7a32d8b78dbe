# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: IMEX time stepper and deme Gillespie loop.

Mirrors drivewave._kernels_py semantically; the Gillespie loop mirrors it
draw-for-draw (same splitmix64 stream, same arithmetic order) so stochastic
outcomes are identical across backends.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport exp, fabs, log
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()

BACKEND_NAME = "compiled"

KIND_DENSITY = 0
KIND_WOLBACHIA = 1
KIND_FREQUENCY = 2
KIND_SCALAR = 3

cdef double N_FLOOR = 1e-12

cdef int _OUT_LOST = 0
cdef int _OUT_FIXED = 1
cdef int _OUT_TIMEOUT = 2

OUTCOME_DRIVE_LOST = 0
OUTCOME_DRIVE_FIXED = 1
OUTCOME_TIMEOUT = 2


# ---------------------------------------------------------------------------
# IMEX stepper
# ---------------------------------------------------------------------------

cdef inline double _birth(int variant, double r, double a, double n) noexcept nogil:
    cdef double B
    if variant == 0:
        return r * (1.0 - n) + 1.0
    if variant == 1:
        B = r * (1.0 - n) * (n - a) + 1.0
        return B if B > 0.0 else 0.0
    return r + 1.0


cdef inline double _death(int variant, double r, double a, double n) noexcept nogil:
    if variant == 2:
        return 1.0 + r * n
    if variant == 3:
        return 1.0 + r + r * (n - 1.0) * (n - a)
    return 1.0


cdef int _thomas_const_factor(int nx, double mu, double[::1] w, double[::1] dhat) noexcept nogil:
    # factor I - mu*T with T the Neumann 3-point Laplacian (mirrored ghosts)
    cdef int i
    cdef double diag = 1.0 + 2.0 * mu
    cdef double up0 = -2.0 * mu
    cdef double lo = -mu
    dhat[0] = diag
    w[0] = 0.0
    for i in range(1, nx):
        if i == nx - 1:
            lo = -2.0 * mu
        else:
            lo = -mu
        w[i] = lo / dhat[i - 1]
        dhat[i] = diag - w[i] * (up0 if i == 1 else -mu)
    return 0


cdef void _thomas_const_solve(int nx, double mu, double[::1] w, double[::1] dhat,
                              double[::1] b) noexcept nogil:
    cdef int i
    cdef double up
    for i in range(1, nx):
        b[i] = b[i] - w[i] * b[i - 1]
    b[nx - 1] = b[nx - 1] / dhat[nx - 1]
    for i in range(nx - 2, -1, -1):
        up = -2.0 * mu if i == 0 else -mu
        b[i] = (b[i] - up * b[i + 1]) / dhat[i]


cdef int _thomas_general(int nx, double[::1] lo, double[::1] dg, double[::1] up,
                         double[::1] b, double[::1] scratch) noexcept nogil:
    # scratch holds the elimination multipliers
    cdef int i
    cdef double piv = dg[0]
    if piv == 0.0:
        return 1
    for i in range(1, nx):
        scratch[i] = lo[i] / piv
        piv = dg[i] - scratch[i] * up[i - 1]
        if piv == 0.0:
            return 1
        dg[i] = piv
        b[i] = b[i] - scratch[i] * b[i - 1]
    b[nx - 1] = b[nx - 1] / dg[nx - 1]
    for i in range(nx - 2, -1, -1):
        b[i] = (b[i] - up[i] * b[i + 1]) / dg[i]
    return 0


def advance(int kind, double[::1] u1, u2_obj, int nsteps, double dt, double dx,
            double[::1] params, bint react=True):
    """In-place IMEX advance; returns (max_clip, bad_step) like the fallback."""
    cdef int nx = u1.shape[0]
    cdef double mu = dt / (dx * dx)
    cdef bint two_fields = u2_obj is not None
    cdef double[::1] u2
    if two_fields:
        u2 = u2_obj
    else:
        u2 = u1  # placeholder, unused

    cdef int variant = <int> params[0]
    cdef double r = params[1]
    cdef double a = params[2]
    cdef double q3 = params[3]
    cdef double q4 = params[4]
    cdef double q5 = params[5]

    cdef cnp.ndarray rhs1_arr = np.empty(nx)
    cdef cnp.ndarray rhs2_arr = np.empty(nx)
    cdef cnp.ndarray w_arr = np.empty(nx)
    cdef cnp.ndarray dh_arr = np.empty(nx)
    cdef double[::1] rhs1 = rhs1_arr
    cdef double[::1] rhs2 = rhs2_arr
    cdef double[::1] w = w_arr
    cdef double[::1] dhat = dh_arr

    cdef cnp.ndarray lo_arr, dg_arr, up_arr, sc_arr
    cdef double[::1] lo = None, dg = None, up = None, scratch = None
    if kind == KIND_FREQUENCY:
        lo_arr = np.empty(nx); dg_arr = np.empty(nx)
        up_arr = np.empty(nx); sc_arr = np.empty(nx)
        lo = lo_arr; dg = dg_arr; up = up_arr; scratch = sc_arr

    _thomas_const_factor(nx, mu, w, dhat)

    cdef double max_clip = 0.0
    cdef int step, i, bad = -1
    cdef double n, nfl, B, D, r1, r2, v, over, coef, off, cubic, p
    cdef bint fin

    for step in range(1, nsteps + 1):
        # reaction + rhs
        for i in range(nx):
            r1 = 0.0
            r2 = 0.0
            if react:
                if kind == KIND_DENSITY:
                    n = u1[i] + u2[i]
                    nfl = n if n > N_FLOOR else N_FLOOR
                    B = _birth(variant, r, a, n)
                    D = _death(variant, r, a, n)
                    r1 = u1[i] * (q3 * q4 * B * (2.0 * u2[i] + q4 * u1[i]) / nfl - q5 * D)
                    r2 = u2[i] * (B * u2[i] / nfl - D)
                elif kind == KIND_WOLBACHIA:
                    n = u1[i] + u2[i]
                    nfl = n if n > N_FLOOR else N_FLOOR
                    B = _birth(variant, r, a, n)
                    D = _death(variant, r, a, n)
                    r1 = (u1[i] / nfl * (u1[i] / nfl) * q3 + (u1[i] / nfl) * (u2[i] / nfl) * q3) * B * n - D * u1[i]
                    r2 = ((u2[i] / nfl) * (u2[i] / nfl) + (u1[i] / nfl) * (u2[i] / nfl) * q4) * B * n - D * u2[i]
                elif kind == KIND_FREQUENCY:
                    p = u1[i]
                    n = u2[i]
                    B = _birth(variant, r, a, n)
                    D = _death(variant, r, a, n)
                    cubic = p * (1.0 - p) * (q3 * p - 2.0 * q3 + 1.0)
                    if q4 != 0.0:
                        r1 = cubic / (1.0 - q3 + q3 * (1.0 - p) * (1.0 - p))
                    else:
                        r1 = B * cubic
                    r2 = n * ((1.0 - q3 + q3 * (1.0 - p) * (1.0 - p)) * B - D)
                else:
                    p = u1[i]
                    r1 = p * (1.0 - p) * (q3 * p - 2.0 * q3 + 1.0)
                    if q4 != 0.0:
                        r1 = r1 / (1.0 - q3 + q3 * (1.0 - p) * (1.0 - p))
            rhs1[i] = u1[i] + dt * r1
            if two_fields:
                rhs2[i] = u2[i] + dt * r2

        if kind == KIND_FREQUENCY:
            # advection folded into the frequency solve, coefficient lagged
            for i in range(nx):
                dg[i] = 1.0 + 2.0 * mu
                lo[i] = -mu
                up[i] = -mu
            for i in range(1, nx - 1):
                nfl = u2[i] if u2[i] > N_FLOOR else N_FLOOR
                coef = (u2[i + 1] - u2[i - 1]) / (2.0 * dx) * (2.0 / nfl)
                off = coef * dt / (2.0 * dx)
                up[i] = up[i] - off
                lo[i] = lo[i] + off
            up[0] = -2.0 * mu
            lo[nx - 1] = -2.0 * mu
            if _thomas_general(nx, lo, dg, up, rhs1, scratch) != 0:
                return max_clip, step
            _thomas_const_solve(nx, mu, w, dhat, rhs2)
        else:
            _thomas_const_solve(nx, mu, w, dhat, rhs1)
            if two_fields:
                _thomas_const_solve(nx, mu, w, dhat, rhs2)

        # clip, copy back, check finiteness
        fin = True
        for i in range(nx):
            v = rhs1[i]
            if kind == KIND_DENSITY or kind == KIND_WOLBACHIA:
                if v < 0.0:
                    if -v > max_clip:
                        max_clip = -v
                    v = 0.0
            else:
                over = -v if v < 0.0 else (v - 1.0 if v > 1.0 else 0.0)
                if over > 0.0:
                    if over > max_clip:
                        max_clip = over
                    v = 0.0 if v < 0.0 else 1.0
            u1[i] = v
            if v != v or fabs(v) > 1e300:
                fin = False
            if two_fields:
                v = rhs2[i]
                if v < 0.0:
                    if -v > max_clip:
                        max_clip = -v
                    v = 0.0
                u2[i] = v
                if v != v or fabs(v) > 1e300:
                    fin = False
        if not fin:
            return max_clip, step

    return max_clip, -1


# ---------------------------------------------------------------------------
# Gillespie deme model
# ---------------------------------------------------------------------------

cdef double EXP_NEG1 = exp(-1.0)
cdef double INV_2_53 = 1.0 / 9007199254740992.0
cdef int REFRESH_EVERY = 1 << 16


cdef inline double _next_double(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t> 0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t> 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t> 0x94D049BB133111EB
    z = z ^ (z >> 31)
    return <double> (z >> 11) * INV_2_53


cdef inline void _rates_of(int64_t di, int64_t oi, double K, int variant,
                           double r, double a, double omega_d, double beta_d,
                           double d_d, double conv, double cross_to_wild,
                           double* out) noexcept nogil:
    cdef int64_t n_tot = di + oi
    cdef double n, B, D
    if n_tot == 0:
        out[0] = 0.0; out[1] = 0.0; out[2] = 0.0; out[3] = 0.0
        return
    n = n_tot / K
    if variant == 0:
        B = r * (1.0 - n) + 1.0
    elif variant == 1:
        B = r * (1.0 - n) * (n - a) + 1.0
    else:
        B = r + 1.0
    if B < 0.0:
        B = 0.0
    if variant == 2:
        D = 1.0 + r * n
    elif variant == 3:
        D = 1.0 + r + r * (n - 1.0) * (n - a)
    else:
        D = 1.0
    out[0] = omega_d * beta_d * B * di * (conv * oi + beta_d * di) / n_tot
    out[1] = B * oi * (oi + cross_to_wild * di) / n_tot
    out[2] = d_d * D * di
    out[3] = D * oi


def gillespie_run(object seed, init_d, init_o, long long K, double t_final,
                  int variant, double r, double a, double omega_d,
                  double beta_d, double d_d, double conv, double cross_to_wild,
                  double emig_prob):
    """Compiled mirror of the pure-Python Gillespie loop."""
    cdef uint64_t state = <uint64_t> (int(seed) & ((1 << 64) - 1))
    cdef cnp.ndarray d_arr = np.asarray(init_d, dtype=np.int64).copy()
    cdef cnp.ndarray o_arr = np.asarray(init_o, dtype=np.int64).copy()
    cdef int64_t[::1] d = d_arr
    cdef int64_t[::1] o = o_arr
    cdef int nd = d.shape[0]
    cdef double Kf = <double> K

    cdef cnp.ndarray rates_arr = np.zeros((nd, 4))
    cdef double[:, ::1] rates = rates_arr
    cdef cnp.ndarray tot_arr = np.zeros(nd)
    cdef double[::1] deme_tot = tot_arr

    cdef int i, j, channel
    cdef double total = 0.0
    cdef double new_sum, old_sum
    cdef int64_t sum_d = 0, sum_o = 0, occ, max_occupancy = 0
    cdef double buf[4]

    for i in range(nd):
        _rates_of(d[i], o[i], Kf, variant, r, a, omega_d, beta_d, d_d, conv,
                  cross_to_wild, buf)
        rates[i, 0] = buf[0]; rates[i, 1] = buf[1]
        rates[i, 2] = buf[2]; rates[i, 3] = buf[3]
        deme_tot[i] = ((buf[0] + buf[1]) + buf[2]) + buf[3]
        total += deme_tot[i]
        sum_d += d[i]
        sum_o += o[i]
        if d[i] + o[i] > max_occupancy:
            max_occupancy = d[i] + o[i]

    cdef double t = 0.0
    cdef long long events = 0
    cdef int outcome = _OUT_TIMEOUT
    cdef bint check_d = sum_d > 0
    cdef bint check_o = sum_o > 0
    cdef double u, target, acc, prod
    cdef int k, b, dest
    cdef bint touch_lo, touch_mid, touch_hi

    with nogil:
        while True:
            if check_d and sum_d == 0:
                outcome = _OUT_LOST
                break
            if check_o and sum_o == 0:
                outcome = _OUT_FIXED
                break
            if total <= 0.0:
                break
            events += 1
            if events % REFRESH_EVERY == 0:
                total = 0.0
                for i in range(nd):
                    deme_tot[i] = ((rates[i, 0] + rates[i, 1]) + rates[i, 2]) + rates[i, 3]
                    total += deme_tot[i]
            u = _next_double(&state)
            t += -log(1.0 - u) / total
            if t > t_final:
                t = t_final
                outcome = _OUT_TIMEOUT
                break
            target = _next_double(&state) * total
            i = 0
            acc = 0.0
            while i < nd - 1 and acc + deme_tot[i] <= target:
                acc += deme_tot[i]
                i += 1
            target -= acc
            if target < rates[i, 0]:
                channel = 0
            elif target < rates[i, 0] + rates[i, 1]:
                channel = 1
            elif target < rates[i, 0] + rates[i, 1] + rates[i, 2]:
                channel = 2
            else:
                channel = 3

            touch_lo = False; touch_mid = True; touch_hi = False
            if channel <= 1:
                k = 0
                prod = 1.0
                while True:
                    prod *= _next_double(&state)
                    if prod <= EXP_NEG1:
                        break
                    k += 1
                for b in range(k):
                    dest = i
                    if _next_double(&state) < emig_prob:
                        if _next_double(&state) < 0.5:
                            dest = i - 1 if i > 0 else i + 1
                        else:
                            dest = i + 1 if i < nd - 1 else i - 1
                    if channel == 0:
                        d[dest] += 1
                        sum_d += 1
                    else:
                        o[dest] += 1
                        sum_o += 1
                    if dest < i:
                        touch_lo = True
                    elif dest > i:
                        touch_hi = True
                    occ = d[dest] + o[dest]
                    if occ > max_occupancy:
                        max_occupancy = occ
            elif channel == 2:
                d[i] -= 1
                sum_d -= 1
            else:
                o[i] -= 1
                sum_o -= 1

            for j in range(i - 1, i + 2):
                if j < 0 or j >= nd:
                    continue
                if (j == i - 1 and touch_lo) or (j == i and touch_mid) or (j == i + 1 and touch_hi):
                    _rates_of(d[j], o[j], Kf, variant, r, a, omega_d, beta_d,
                              d_d, conv, cross_to_wild, buf)
                    new_sum = ((buf[0] + buf[1]) + buf[2]) + buf[3]
                    old_sum = deme_tot[j]
                    total += new_sum - old_sum
                    rates[j, 0] = buf[0]; rates[j, 1] = buf[1]
                    rates[j, 2] = buf[2]; rates[j, 3] = buf[3]
                    deme_tot[j] = new_sum
    return outcome, t, events, max_occupancy, d_arr, o_arr
