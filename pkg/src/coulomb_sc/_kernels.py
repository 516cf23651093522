"""Numerically hot cores shared by the public modules.

Every function here is nopython-compilable.  When numba is unavailable, or
disabled through ``COULOMB_SC_DISABLE_NUMBA=1``, the same source runs as
plain Python (see ``_backend``), so both backends produce identical values.

Conventions used throughout (all plain floats, no objects):

    a    -- orbit scale Kc / (2|E|); semimajor axis for E < 0
    sk   -- momentum scale sqrt(2 mu |E|) = sqrt(Kc mu / a)
    cv   -- velocity scale sqrt(2|E| / mu)
    ts   -- time scale mu a / sk = sqrt(mu a^3 / Kc)
    alpha_plus / alpha_minus -- the two Lambert combinations r + r' +- s

The one-dimensional reduced actions below are algebraically identical to
the closed arctan/log forms; they are written through the single anomaly
angle gamma(alpha) = 2 asin(sqrt(alpha/4a)), which is the numerically
stable parametrization near both endpoints.
"""

import cmath
import math

import numpy as np

from ._backend import njit, prange

# --- region / status codes shared with the scan layer ---------------------
REGION_ALLOWED = 0
REGION_CAUSTIC = 1
REGION_FORBIDDEN = 2

STATUS_OK = 0
STATUS_POLE = 1
STATUS_CAUSTIC = 2
STATUS_FOCAL = 3
STATUS_SOURCE = 4
STATUS_UNSUPPORTED = 5
STATUS_UNCONVERGED = 6

_SQRT_PI = math.sqrt(math.pi)


# ==========================================================================
# one-dimensional actions, times, velocities
# ==========================================================================

@njit(cache=True)
def gamma_angle(alpha, a):
    """Anomaly angle on the principal branch: sin^2(gamma/2) = alpha/(4a)."""
    x = alpha / (4.0 * a)
    if x >= 1.0:
        return math.pi
    if x <= 0.0:
        return 0.0
    return 2.0 * math.asin(math.sqrt(x))


@njit(cache=True)
def w_bound(alpha, a, sk):
    """Half-action W(alpha) for bound motion, 0 <= alpha <= 4a."""
    g = gamma_angle(alpha, a)
    return sk * a * (g + math.sin(g))


@njit(cache=True)
def t_bound(alpha, a, ts):
    """Half travel time t(alpha) for bound motion (Kepler equation form)."""
    g = gamma_angle(alpha, a)
    return ts * (g - math.sin(g))


@njit(cache=True)
def v_bound(alpha, a, cv):
    """Collinear speed at path coordinate alpha/2 for bound motion."""
    return cv * math.sqrt((4.0 * a - alpha) / alpha)


@njit(cache=True)
def w_scatter_attr(alpha, a, sk):
    """Half-action for E > 0, attractive (hyperbolic), anchored at alpha = 0."""
    if alpha <= 0.0:
        return 0.0
    return sk * (0.5 * math.sqrt((4.0 * a + alpha) * alpha)
                 + 2.0 * a * math.asinh(math.sqrt(alpha / (4.0 * a))))


@njit(cache=True)
def v_scatter_attr(alpha, a, cv):
    return cv * math.sqrt((4.0 * a + alpha) / alpha)


@njit(cache=True)
def w_scatter_rep(alpha, a, sk):
    """Half-action for E > 0, repulsive, allowed side alpha >= 4|a|;
    vanishes at the turning point alpha = 4|a|."""
    if alpha <= 4.0 * a:
        return 0.0
    return sk * (0.5 * math.sqrt((alpha - 4.0 * a) * alpha)
                 - 2.0 * a * math.acosh(math.sqrt(alpha / (4.0 * a))))


@njit(cache=True)
def v_scatter_rep(alpha, a, cv):
    return cv * math.sqrt((alpha - 4.0 * a) / alpha)


@njit(cache=True)
def w_rep_forbidden_mag(alpha, a, sk):
    """|Im W| for E > 0 repulsive inside the barrier (0 <= alpha <= 4|a|).

    The full action is purely imaginary, +- i * (this value); it vanishes
    at the turning point alpha = 4|a| and reaches pi |a| sk at alpha = 0.
    """
    g = gamma_angle(alpha, a)  # 2 asin(sqrt(alpha/4|a|))
    return sk * a * (math.pi - g) - sk * 0.5 * math.sqrt((4.0 * a - alpha) * alpha)


@njit(cache=True)
def w_bound_forbidden_im(alpha, a, sk):
    """Im W_+ for bound motion continued past the caustic (alpha > 4a).

    Re W_+ is the alpha-independent half-loop action pi a sk.
    """
    if alpha <= 4.0 * a:
        return 0.0
    return sk * (0.5 * math.sqrt((alpha - 4.0 * a) * alpha)
                 - 2.0 * a * math.acosh(math.sqrt(alpha / (4.0 * a))))


# ==========================================================================
# Airy function of the first kind (scalar, real argument)
# ==========================================================================

_AI0 = 0.3550280538878172392600631860041831763980  # Ai(0)  = 3^(-2/3)/Gamma(2/3)
_AIP0 = -0.2588194037928067984051835601892039634793  # Ai'(0) = -3^(-1/3)/Gamma(1/3)


def _airy_asymptotic_coeffs(m=26):
    u = np.empty(m)
    v = np.empty(m)
    u[0] = 1.0
    v[0] = 1.0
    for k in range(1, m):
        u[k] = u[k - 1] * (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k)
        v[k] = u[k] * (6.0 * k + 1.0) / (1.0 - 6.0 * k)
    return u, v


_AIRY_U, _AIRY_V = _airy_asymptotic_coeffs()


@njit(cache=True)
def airy_ai_both(x):
    """(Ai(x), Ai'(x)) by Maclaurin series for |x| <= 7 and large-argument
    expansions beyond; absolute error stays below 1e-10 on the real line."""
    if x > 7.0:
        xi = 2.0 / 3.0 * x * math.sqrt(x)
        m = 1.0
        su = 1.0
        sv = 1.0
        prev = 1.0
        for k in range(1, _AIRY_U.shape[0]):
            m = -m / xi
            tu = _AIRY_U[k] * m
            if abs(tu) > prev:
                break
            prev = abs(tu)
            su += tu
            sv += _AIRY_V[k] * m
            if abs(tu) < 1e-18:
                break
        pre = math.exp(-xi) / (2.0 * _SQRT_PI)
        q = x ** 0.25
        return pre * su / q, -pre * sv * q
    if x < -7.0:
        z = -x
        xi = 2.0 / 3.0 * z * math.sqrt(z)
        c = math.cos(xi - 0.25 * math.pi)
        s = math.sin(xi - 0.25 * math.pi)
        inv2 = 1.0 / (xi * xi)
        # even/odd tails of the oscillatory expansion
        me = 1.0
        se_u = 1.0
        se_v = 1.0
        so_u = _AIRY_U[1] / xi
        so_v = _AIRY_V[1] / xi
        mo = 1.0 / xi
        for k in range(1, (_AIRY_U.shape[0] - 1) // 2):
            me = -me * inv2
            mo = -mo * inv2
            se_u += _AIRY_U[2 * k] * me
            se_v += _AIRY_V[2 * k] * me
            so_u += _AIRY_U[2 * k + 1] * mo
            so_v += _AIRY_V[2 * k + 1] * mo
        q = z ** 0.25
        ai = (c * se_u + s * so_u) / (_SQRT_PI * q)
        aip = (s * se_v - c * so_v) * q / _SQRT_PI
        return ai, aip
    # Maclaurin: two independent solutions of y'' = x y and their derivatives
    x2 = x * x
    tf = 1.0
    f = 1.0
    fp = 0.0
    tg = x
    g = x
    gp = 1.0
    for k in range(1, 80):
        fp += tf * x2 / (3.0 * k - 1.0)
        tf = tf * x2 * x / ((3.0 * k) * (3.0 * k - 1.0))
        f += tf
        gp += tg * x2 / (3.0 * k)
        tg = tg * x2 * x / ((3.0 * k + 1.0) * (3.0 * k))
        g += tg
        if abs(tf) + abs(tg) < 1e-20 * (1.0 + abs(f) + abs(g)):
            break
    ai = _AI0 * f + _AIP0 * g
    aip = _AI0 * fp + _AIP0 * gp
    return ai, aip


# ==========================================================================
# semiclassical point evaluators (bound E < 0)
# ==========================================================================

@njit(cache=True)
def lambert_alphas(x, y, z, xp, yp, zp):
    """(r, rp, s, alpha_plus, alpha_minus) for a 3-vector pair."""
    r = math.sqrt(x * x + y * y + z * z)
    rp = math.sqrt(xp * xp + yp * yp + zp * zp)
    dx = x - xp
    dy = y - yp
    dz = z - zp
    s = math.sqrt(dx * dx + dy * dy + dz * dz)
    return r, rp, s, r + rp + s, r + rp - s


@njit(cache=True)
def sc_bound_point(r, rp, s, a, k, ndim, mu, hbar, sk, cv,
                   pref_merged, pref_elem, pglob, sinpk,
                   caustic_tol, focal_tol):
    """Semiclassical bound-state Green value at one point.

    Allowed region: merged two-path interference form (real for odd ndim).
    Forbidden region: two-path tunneling continuation with the
    positive-imaginary action branch, times the loop factor.

    Returns (value, region_code, status_code).
    """
    ap = r + rp + s
    am = r + rp - s
    four_a = 4.0 * a
    if s <= 0.0:
        return complex(np.nan, np.nan), REGION_ALLOWED, STATUS_SOURCE
    if am <= focal_tol * ap:
        region = REGION_ALLOWED if ap < four_a else REGION_FORBIDDEN
        return complex(np.nan, np.nan), region, STATUS_FOCAL
    if abs(ap - four_a) <= caustic_tol * four_a:
        return complex(np.nan, np.nan), REGION_CAUSTIC, STATUS_CAUSTIC

    p = (ndim - 1.0) / 2.0
    if ap < four_a:
        # classically allowed: merged interference of the two path families
        vp = v_bound(ap, a, cv)
        vm = v_bound(am, a, cv)
        wp = w_bound(ap, a, sk)
        wm = w_bound(am, a, sk)
        den = math.sqrt(vp * vm)
        sd1 = (mu * (vp + vm) / (2.0 * s)) ** p / den
        sd2 = (mu * (vm - vp) / (2.0 * s)) ** p / den
        w1 = wp - wm
        w2 = wp + wm
        br = (sd1 * math.cos(w1 / hbar - math.pi * ((ndim - 1.0) / 4.0 + k))
              + sd2 * math.sin(math.pi * (3.0 * (ndim - 1.0) / 4.0 + k) - w2 / hbar))
        return pref_merged * br / sinpk, REGION_ALLOWED, STATUS_OK

    # forbidden region: continue v_plus -> i w, W_plus -> pi a sk + i Im
    w_im_p = w_bound_forbidden_im(ap, a, sk)
    wtp = complex(math.pi * a * sk, w_im_p)
    wvel_p = cv * math.sqrt((ap - four_a) / ap)
    if am >= four_a:
        # doubly forbidden: continue the minus leg the same way
        w_im_m = w_bound_forbidden_im(am, a, sk)
        wtm = complex(math.pi * a * sk, w_im_m)
        vmc = complex(0.0, cv * math.sqrt((am - four_a) / am))
    else:
        wtm = complex(w_bound(am, a, sk), 0.0)
        vmc = complex(v_bound(am, a, cv), 0.0)
    vpc = complex(0.0, wvel_p)
    denc = cmath.sqrt(vpc * vmc)
    b1 = mu * (vmc + vpc) / (2.0 * s)
    b2 = mu * (vmc - vpc) / (2.0 * s)
    a1 = b1 ** p / denc
    a2 = cmath.exp(-0.5j * math.pi * (ndim - 2.0)) * b2 ** p / denc
    w1 = wtp - wtm
    w2 = wtp + wtm
    val = pref_elem * pglob * (a1 * cmath.exp(1j * w1 / hbar)
                               + a2 * cmath.exp(1j * w2 / hbar))
    return val, REGION_FORBIDDEN, STATUS_OK


@njit(cache=True)
def ua_point(r, rp, s, a, k, mu, hbar, sk, cv, w2pi, pglob, focal_tol):
    """Uniform (Airy) approximation at one point, three dimensions only.

    Both coalescing path pairs are uniformized; the loop factor multiplies
    the whole expression.  Finite and smooth across the caustic.

    Returns (value, region_code, status_code).
    """
    ap = r + rp + s
    am = r + rp - s
    four_a = 4.0 * a
    if s <= 0.0:
        return complex(np.nan, np.nan), REGION_ALLOWED, STATUS_SOURCE
    if am <= focal_tol * ap:
        region = REGION_ALLOWED if ap < four_a else REGION_FORBIDDEN
        return complex(np.nan, np.nan), region, STATUS_FOCAL
    if am >= 0.999 * four_a:
        # doubly forbidden (inner leg past the caustic too): outside the
        # uniform construction; the tunneling form covers such points
        return complex(np.nan, np.nan), REGION_FORBIDDEN, STATUS_UNSUPPORTED

    # an exact caustic hit is nudged inward by a relative 1e-7: the uniform
    # value is smooth there, the nudge error is far below its accuracy
    region = REGION_ALLOWED if ap < four_a else REGION_FORBIDDEN
    if abs(ap - four_a) < 1e-7 * four_a:
        ap = four_a * (1.0 - 1e-7)
        region = REGION_CAUSTIC

    wm = w_bound(am, a, sk)
    xi14 = (0.5 * w2pi - wm) / hbar
    xi23 = (0.5 * w2pi + wm) / hbar
    phase = cmath.exp(-1.25j * math.pi)  # common e^{-5 i pi / 4}

    if ap < four_a:
        vp = v_bound(ap, a, cv)
        vm = v_bound(am, a, cv)
        wp = w_bound(ap, a, sk)
        den = math.sqrt(vp * vm)
        q1 = mu * (vm + vp) / (2.0 * s) / den + 0.0j
        q2 = mu * (vm - vp) / (2.0 * s) / den + 0.0j
        zeta = (3.0 * (w2pi - 2.0 * wp) / (4.0 * hbar)) ** (2.0 / 3.0)
    else:
        w = cv * math.sqrt((ap - four_a) / ap)
        vmr = v_bound(am, a, cv)
        denc = cmath.sqrt(1j * w * vmr)
        q1 = mu * complex(vmr, w) / (2.0 * s) / denc
        q2 = mu * complex(vmr, -w) / (2.0 * s) / denc
        im_wp = w_bound_forbidden_im(ap, a, sk)
        zeta = -((3.0 * im_wp / (2.0 * hbar)) ** (2.0 / 3.0))

    ai, aip = airy_ai_both(-zeta)
    z4 = (zeta + 0.0j) ** 0.25
    cpre = 1.0 / (2.0 * hbar * hbar * _SQRT_PI)

    # pair of paths {direct, caustic-reflected}
    d0 = z4 * (q1 + q2) * phase
    d1 = (q1 - q2) / z4 * phase
    g14 = cmath.exp(1j * xi14) * cpre * (d0 * ai - 1j * d1 * aip)
    # pair {center-reflected, doubly-reflected}, extra e^{-i pi/2}
    d0 = z4 * (q2 + q1) * phase
    d1 = (q2 - q1) / z4 * phase
    g23 = -1j * cmath.exp(1j * xi23) * cpre * (d0 * ai - 1j * d1 * aip)

    return pglob * (g14 + g23), region, STATUS_OK


# --- array drivers ---------------------------------------------------------

@njit(cache=True, parallel=True)
def sc_bound_field(R, rp_vec, a, k, ndim, mu, hbar, sk, cv,
                   pref_merged, pref_elem, pglob, sinpk,
                   caustic_tol, focal_tol):
    """sc_bound_point mapped over rows of R (N x 3); order-independent."""
    n = R.shape[0]
    vals = np.empty(n, dtype=np.complex128)
    region = np.empty(n, dtype=np.int8)
    status = np.empty(n, dtype=np.int8)
    for i in prange(n):
        r, rr, s, _, _ = lambert_alphas(R[i, 0], R[i, 1], R[i, 2],
                                        rp_vec[0], rp_vec[1], rp_vec[2])
        v, reg, st = sc_bound_point(r, rr, s, a, k, ndim, mu, hbar, sk, cv,
                                    pref_merged, pref_elem, pglob, sinpk,
                                    caustic_tol, focal_tol)
        vals[i] = v
        region[i] = reg
        status[i] = st
    return vals, region, status


@njit(cache=True, parallel=True)
def ua_field(R, rp_vec, a, k, mu, hbar, sk, cv, w2pi, pglob, focal_tol):
    n = R.shape[0]
    vals = np.empty(n, dtype=np.complex128)
    region = np.empty(n, dtype=np.int8)
    status = np.empty(n, dtype=np.int8)
    for i in prange(n):
        r, rr, s, _, _ = lambert_alphas(R[i, 0], R[i, 1], R[i, 2],
                                        rp_vec[0], rp_vec[1], rp_vec[2])
        v, reg, st = ua_point(r, rr, s, a, k, mu, hbar, sk, cv, w2pi, pglob,
                              focal_tol)
        vals[i] = v
        region[i] = reg
        status[i] = st
    return vals, region, status


# ==========================================================================
# radial Schroedinger solver (quantum-mechanical reference, n = 3)
# ==========================================================================

@njit(cache=True)
def radial_rhs(r, l, e2, c1):
    """f(r) in u'' = -f u:  f = 2mu(E + Kc/r)/hbar^2 - l(l+1)/r^2."""
    return e2 + c1 / r - l * (l + 1.0) / (r * r)


@njit(cache=True)
def radial_rhs_prime(r, l, e2, c1):
    return -c1 / (r * r) + 2.0 * l * (l + 1.0) / (r * r * r)


@njit(cache=True)
def numerov_fill_outward(l, e2, c1, h, n, j0, u0, u1):
    """Fill u[j0..n] by the Numerov recurrence given the two start values.

    Rescales the whole populated slice whenever |u| exceeds 1e250 so that
    late entries never overflow; relative shape is preserved.
    """
    u = np.zeros(n + 1)
    u[j0] = u0
    u[j0 + 1] = u1
    h12 = h * h / 12.0
    fm = radial_rhs(j0 * h, l, e2, c1)
    f0 = radial_rhs((j0 + 1) * h, l, e2, c1)
    for j in range(j0 + 1, n):
        fp = radial_rhs((j + 1) * h, l, e2, c1)
        u[j + 1] = (2.0 * u[j] * (1.0 - 5.0 * h12 * f0)
                    - u[j - 1] * (1.0 + h12 * fm)) / (1.0 + h12 * fp)
        fm = f0
        f0 = fp
        if abs(u[j + 1]) > 1e250:
            for jj in range(j0, j + 2):
                u[jj] *= 1e-250
    return u


@njit(cache=True)
def numerov_fill_inward(l, e2, c1, h, n, j_stop, un, unm1):
    """Inward Numerov fill on [j_stop, n].

    The decaying solution grows inward; stopping at j_stop (just below the
    smallest radius the caller needs) keeps the dynamic range of the array
    inside float64 even for very large l, where a full-mesh sweep would
    span more than 616 decades and flush the outer region to zero.
    """
    u = np.zeros(n + 1)
    u[n] = un
    u[n - 1] = unm1
    h12 = h * h / 12.0
    fm = radial_rhs(n * h, l, e2, c1)
    f0 = radial_rhs((n - 1) * h, l, e2, c1)
    for j in range(n - 1, j_stop, -1):
        fp = radial_rhs((j - 1) * h, l, e2, c1)
        u[j - 1] = (2.0 * u[j] * (1.0 - 5.0 * h12 * f0)
                    - u[j + 1] * (1.0 + h12 * fm)) / (1.0 + h12 * fp)
        fm = f0
        f0 = fp
        if abs(u[j - 1]) > 1e250:
            for jj in range(j - 1, n + 1):
                u[jj] *= 1e-250
    return u


@njit(cache=True)
def ode_derivative(u, j, h, l, e2, c1):
    """u'(r_j) from neighbors with the leading ODE-aware h^2 correction
    subtracted; accurate to O(h^4) without extra stencil points."""
    r = j * h
    f = radial_rhs(r, l, e2, c1)
    fprime = radial_rhs_prime(r, l, e2, c1)
    num = (u[j + 1] - u[j - 1]) / (2.0 * h) + (h * h / 6.0) * fprime * u[j]
    return num / (1.0 - h * h * f / 6.0)


@njit(cache=True)
def wronskian_at(u, v, j, h, l, e2, c1):
    up = ode_derivative(u, j, h, l, e2, c1)
    vp = ode_derivative(v, j, h, l, e2, c1)
    return u[j] * vp - up * v[j]


@njit(cache=True)
def best_match_index(u_reg, u_irr, j0, n):
    """Mesh index where both solutions are healthiest (max |u_reg*u_irr|,
    evaluated in logs to dodge overflow)."""
    best = -1.0e308
    jbest = j0 + 1
    for j in range(j0 + 1, n):
        ar = abs(u_reg[j])
        ai = abs(u_irr[j])
        if ar > 0.0 and ai > 0.0:
            m = math.log(ar) + math.log(ai)
            if m > best:
                best = m
                jbest = j
    return jbest


@njit(cache=True)
def interp_u(u, r, h, j0, n):
    """Cubic 4-point Lagrange interpolation of u at radius r on the mesh."""
    x = r / h
    j = int(x)
    if j < j0 + 1:
        j = j0 + 1
    if j > n - 2:
        j = n - 2
    t = x - j
    um1 = u[j - 1]
    u0 = u[j]
    u1 = u[j + 1]
    u2 = u[j + 2]
    return (-t * (t - 1.0) * (t - 2.0) / 6.0 * um1
            + (t * t - 1.0) * (t - 2.0) / 2.0 * u0
            - t * (t + 1.0) * (t - 2.0) / 2.0 * u1
            + t * (t * t - 1.0) / 6.0 * u2)


@njit(cache=True)
def qm_accumulate(u_reg, u_irr, wron, h, j0, j_irr, n, l, g2mu,
                  r_small, r_large, cos_th, p_lm1, p_l, acc):
    """Add the l-th partial-wave term for every point; updates the Legendre
    recurrence state in place and returns the per-point increments."""
    npts = r_small.shape[0]
    inc = np.empty(npts)
    for i in range(npts):
        x = cos_th[i]
        if l == 0:
            pl = 1.0
            p_lm1[i] = 0.0
        elif l == 1:
            pl = x
            p_lm1[i] = 1.0
        else:
            pl = ((2.0 * l - 1.0) * x * p_l[i] - (l - 1.0) * p_lm1[i]) / l
            p_lm1[i] = p_l[i]
        p_l[i] = pl
        ur = interp_u(u_reg, r_small[i], h, j0, n)
        ui = interp_u(u_irr, r_large[i], h, j_irr, n)
        gl = g2mu * ur * ui / wron
        term = (2.0 * l + 1.0) / (4.0 * math.pi * r_small[i] * r_large[i]) * pl * gl
        acc[i] += term
        inc[i] = term
    return inc


@njit(cache=True)
def qm_accumulate_diff(u_reg, u_irr, wron, f_reg, f_irr, f_wron,
                       h, j0, j_irr, n, l, g2mu,
                       r_small, r_large, cos_th, p_lm1, p_l, acc):
    """Like qm_accumulate but adds the difference between the interacting
    and the free-particle channel (Kummer-style convergence acceleration);
    the closed-form free Green function is restored by the caller."""
    npts = r_small.shape[0]
    inc = np.empty(npts)
    for i in range(npts):
        x = cos_th[i]
        if l == 0:
            pl = 1.0
            p_lm1[i] = 0.0
        elif l == 1:
            pl = x
            p_lm1[i] = 1.0
        else:
            pl = ((2.0 * l - 1.0) * x * p_l[i] - (l - 1.0) * p_lm1[i]) / l
            p_lm1[i] = p_l[i]
        p_l[i] = pl
        gl = g2mu * (interp_u(u_reg, r_small[i], h, j0, n)
                     * interp_u(u_irr, r_large[i], h, j_irr, n) / wron
                     - interp_u(f_reg, r_small[i], h, j0, n)
                     * interp_u(f_irr, r_large[i], h, j_irr, n) / f_wron)
        term = (2.0 * l + 1.0) / (4.0 * math.pi * r_small[i] * r_large[i]) * pl * gl
        acc[i] += term
        inc[i] = term
    return inc
