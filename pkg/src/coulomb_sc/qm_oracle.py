"""Exact quantum-mechanical reference Green function for n = 3.

Partial-wave construction: for each angular momentum l the radial equation

    u'' + [2 mu (E + Kc/r)/hbar^2 - l(l+1)/r^2] u = 0

is integrated on a uniform mesh with the Numerov scheme -- outward from a
power-series boundary layer at the origin, inward from a WKB-seeded point
far beyond the outermost turning radius -- and the radial Green component
is g_l = (2 mu/hbar^2) u_reg(r_<) u_irr(r_>) / W[u_reg, u_irr].  The full
value is the Legendre sum over channels.

A numerical ODE path is used rather than closed-form confluent
hypergeometric evaluation because the arguments of interest (2r/nu with
r of order 10^3 Bohr) make naive series evaluation unstable; an
independent Whittaker-function oracle exists in the test suite at modest
arguments.

Caching: RadialSolution construction is pure; the module keeps a small
idempotent cache keyed by (l, E, mesh) that concurrent readers may share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ConvergenceError, PoleError, RegionError
from .geometry import classify_region, lambert_variables
from .model import EnergySpec, SystemParams
from .semiclassical import FieldSample, _check_pole

_SOLUTION_CACHE: dict = {}
_CACHE_MAX = 8


def legendre_p(l: int, x: float) -> float:
    """Legendre polynomial P_l(x) by upward three-term recurrence."""
    if l < 0 or int(l) != l:
        raise ValueError("l must be a nonnegative integer")
    if abs(x) > 1.0 + 1e-12:
        raise ValueError("argument must lie in [-1, 1]")
    x = min(1.0, max(-1.0, x))
    if l == 0:
        return 1.0
    pm, p = 1.0, x
    for ll in range(2, l + 1):
        pm, p = p, ((2.0 * ll - 1.0) * x * p - (ll - 1.0) * pm) / ll
    return p


def default_mesh(spec: EnergySpec, params: SystemParams, r_need: float) -> tuple[float, float]:
    """(r_max, h) giving ~1e-7 phase accuracy and a deeply decayed
    inward-integration start for all channels."""
    a = spec.a
    r_turn = 2.0 * a
    r_max = max(1.3 * r_turn, 1.2 * r_need)

    # extend until the decaying solution accumulates >= 16 e-foldings
    # between every radius of interest and the start of integration
    def kappa(r):
        return math.sqrt(
            max(0.0, 2.0 * params.mu * (abs(spec.E) - params.Kc / r)) / params.hbar**2
        )

    anchor = max(r_turn, r_need)
    for _ in range(60):
        rs = np.linspace(max(anchor, r_turn * (1.0 + 1e-9)), r_max, 200)
        efold = np.trapezoid([kappa(r) for r in rs], rs)
        if efold >= 16.0:
            break
        r_max *= 1.2
    ell0 = params.hbar**2 / (params.mu * params.Kc)  # natural length unit
    h = min(0.025 * ell0, a / 400.0)
    return float(r_max), float(h)


def _series_start(l: int, E: float, params: SystemParams, r1: float, r2: float,
                  coulomb: bool = True):
    """Regular-solution values at two startup radii from the origin series
    u = r^(l+1) sum c_k r^k, returned in a common scale with the r^(l+1)
    prefactor normalized at r2 (only the ratio matters downstream)."""
    c1 = 2.0 * params.mu * params.Kc / params.hbar**2 if coulomb else 0.0
    e2 = 2.0 * params.mu * E / params.hbar**2
    out = []
    for r in (r1, r2):
        ck2, ck1 = 0.0, 1.0
        t = 1.0
        total = 1.0
        rk = 1.0
        for k in range(1, 80):
            ck = -(c1 * ck1 + e2 * ck2) / (k * (2.0 * l + 1.0 + k))
            rk *= r
            t = ck * rk
            total += t
            ck2, ck1 = ck1, ck
            if abs(t) < 1e-18 * abs(total):
                break
        out.append(total)
    return (r1 / r2) ** (l + 1) * out[0], out[1]


@dataclass(frozen=True)
class RadialSolution:
    """Both radial solutions of one (l, E) channel on a uniform mesh.

    u_reg is regular at the origin (~ r^(l+1)); u_irr decays as r -> inf
    for E < 0 and is tabulated on [r_service, r_max] (the inward sweep
    stops where the caller no longer needs values, which keeps its huge
    inward growth inside float64 at large l).  Both are normalized at the
    healthiest overlap index, and the Wronskian u_reg u_irr' - u_reg' u_irr
    is constant on the service window.
    """

    l: int
    E: float
    params: SystemParams
    h: float
    j0: int
    j_service: int
    grid: np.ndarray
    u_reg: np.ndarray
    u_irr: np.ndarray
    wronskian: float

    def eval_reg(self, r: float) -> float:
        return K.interp_u(self.u_reg, r, self.h, self.j0, len(self.grid) - 1)

    def eval_irr(self, r: float) -> float:
        if r < (self.j_service + 2) * self.h:
            raise ValueError(
                f"u_irr tabulated for r >= {(self.j_service + 2) * self.h:.6g} "
                "only; rebuild the solution with a smaller service radius"
            )
        return K.interp_u(self.u_irr, r, self.h, self.j_service, len(self.grid) - 1)

    def wronskian_on_mesh(self, indices) -> np.ndarray:
        """Wronskian recomputed at the given mesh indices (constancy check);
        indices must lie inside the service window."""
        c1 = 2.0 * self.params.mu * self.params.Kc / self.params.hbar**2
        e2 = 2.0 * self.params.mu * self.E / self.params.hbar**2
        return np.array([
            K.wronskian_at(self.u_reg, self.u_irr, int(j), self.h, self.l, e2, c1)
            for j in indices
        ])


def solve_radial(l: int, E: float, params: SystemParams,
                 r_max: float, h: float, coulomb: bool = True,
                 r_service: float = 0.0) -> RadialSolution:
    """Integrate one channel and package both solutions (cached).

    With ``coulomb=False`` the potential is dropped (free particle plus
    centrifugal term); those channels back the convergence acceleration of
    the full partial-wave sum.  ``r_service`` is the smallest radius at
    which the decaying solution must be usable.
    """
    key = (l, E, round(r_max / h), h, params.mu, params.Kc, params.hbar,
           coulomb, round(r_service / h))
    hit = _SOLUTION_CACHE.get(key)
    if hit is not None:
        return hit
    c1 = 2.0 * params.mu * params.Kc / params.hbar**2 if coulomb else 0.0
    e2 = 2.0 * params.mu * E / params.hbar**2
    n = int(round(r_max / h))
    j0 = max(1, int(math.ceil(1.45 * math.sqrt(l * (l + 1.0)))))
    if j0 > n - 10:
        raise ValueError("mesh too coarse for this angular momentum")
    j_service = max(j0, int(r_service / h) - 6)
    u0, u1 = _series_start(l, E, params, j0 * h, (j0 + 1) * h, coulomb)
    u_reg = K.numerov_fill_outward(l, e2, c1, h, n, j0, u0, u1)
    kap = math.sqrt(max(1e-300, -K.radial_rhs((n - 0.5) * h, l, e2, c1)))
    u_irr = K.numerov_fill_inward(l, e2, c1, h, n, j_service, 1.0, math.exp(kap * h))
    jm = K.best_match_index(u_reg, u_irr, j_service, n)
    u_reg = u_reg / abs(u_reg[jm])
    u_irr = u_irr / abs(u_irr[jm])
    wron = K.wronskian_at(u_reg, u_irr, jm, h, l, e2, c1)
    sol = RadialSolution(l=l, E=E, params=params, h=h, j0=j0, j_service=j_service,
                         grid=np.arange(n + 1) * h,
                         u_reg=u_reg, u_irr=u_irr, wronskian=wron)
    if len(_SOLUTION_CACHE) >= _CACHE_MAX:
        _SOLUTION_CACHE.pop(next(iter(_SOLUTION_CACHE)))
    _SOLUTION_CACHE[key] = sol
    return sol


def _check_channel_pole(l: int, spec: EnergySpec, tol: float = 1e-9):
    nu = spec.k + 1.0
    nearest = round(nu)
    if nearest >= l + 1 and abs(nu - nearest) < tol:
        raise PoleError(
            f"E within the guard band of the l = {l} channel eigenvalue nu = {nearest}",
            k=int(nearest - 1), energy=spec.E,
        )


def radial_green(l: int, r_small: float, r_large: float, E: float,
                 params: SystemParams, r_max: float | None = None,
                 h: float | None = None) -> float:
    """Radial Green component g_l(r_<, r_>; E) for E < 0, n = 3."""
    if not 0.0 < r_small <= r_large:
        raise ValueError("need 0 < r_small <= r_large")
    if E >= 0.0:
        raise ValueError("radial_green requires E < 0")
    spec = EnergySpec.from_energy(E, params)
    _check_channel_pole(l, spec)
    if r_max is None or h is None:
        auto_rmax, auto_h = default_mesh(spec, params, r_large)
        r_max = auto_rmax if r_max is None else r_max
        h = auto_h if h is None else h
    sol = solve_radial(l, E, params, r_max, h, r_service=0.95 * r_large)
    g2mu = 2.0 * params.mu / params.hbar**2
    return g2mu * sol.eval_reg(r_small) * sol.eval_irr(r_large) / sol.wronskian


def qm_field(R, rp_vec, spec: EnergySpec, params: SystemParams,
             l_max: int = 80, r_max: float | None = None,
             h: float | None = None):
    """Partial-wave Green values at many points for one source and energy.

    Streams over channels: each l is integrated once and its contribution
    accumulated into every point, so memory stays O(mesh + points).

    Convergence acceleration: the free-particle channels (same centrifugal
    term, no Coulomb potential) are subtracted term by term and the free
    Green function -(2mu/hbar^2) exp(-kappa s)/(4 pi s) is added back in
    closed form.  The plain sum converges only conditionally (like
    l^(-1/2)) near the sphere |r| = |r'|; the subtracted series is fast
    everywhere away from the true source point.

    Returns (values, tail) where tail is the per-point relative size of the
    last few channel contributions (convergence estimate).
    """
    if params.ndim != 3:
        raise ValueError("the quantum reference is implemented for n = 3")
    if spec.E >= 0.0:
        raise ValueError("qm_field requires E < 0")
    _check_pole(spec)
    for l in range(l_max + 1):
        _check_channel_pole(l, spec)

    R = np.atleast_2d(np.asarray(R, dtype=float))
    rp = np.asarray(rp_vec, dtype=float)
    r_norm = np.linalg.norm(R, axis=1)
    rp_norm = float(np.linalg.norm(rp))
    if rp_norm <= 0.0 or np.any(r_norm <= 0.0):
        raise RegionError("points at the force center are excluded")
    s_norm = np.linalg.norm(R - rp[None, :], axis=1)
    if np.any(s_norm <= 0.0):
        raise RegionError("points at the source are excluded")
    cos_th = np.clip(R @ rp / (r_norm * rp_norm), -1.0, 1.0)
    r_small = np.minimum(r_norm, rp_norm)
    r_large = np.maximum(r_norm, rp_norm)

    if r_max is None or h is None:
        auto_rmax, auto_h = default_mesh(spec, params, float(np.max(r_large)))
        r_max = auto_rmax if r_max is None else r_max
        h = auto_h if h is None else h

    npts = len(r_small)
    acc = np.zeros(npts)
    p_lm1 = np.zeros(npts)
    p_l = np.zeros(npts)
    last = np.zeros((3, npts))
    g2mu = 2.0 * params.mu / params.hbar**2
    n = int(round(r_max / h))
    r_service = 0.95 * float(np.min(r_large))
    for l in range(l_max + 1):
        sol = solve_radial(l, spec.E, params, r_max, h, r_service=r_service)
        free = solve_radial(l, spec.E, params, r_max, h, coulomb=False,
                            r_service=r_service)
        inc = K.qm_accumulate_diff(
            sol.u_reg, sol.u_irr, sol.wronskian,
            free.u_reg, free.u_irr, free.wronskian,
            h, sol.j0, sol.j_service, n, l, g2mu,
            r_small, r_large, cos_th, p_lm1, p_l, acc)
        last[l % 3] = np.abs(inc)
    kappa = math.sqrt(2.0 * params.mu * abs(spec.E)) / params.hbar
    vals = acc - g2mu * np.exp(-kappa * s_norm) / (4.0 * math.pi * s_norm)
    scale = np.maximum(np.abs(vals), np.max(np.abs(vals)) * 1e-30 + 1e-300)
    tail = np.max(last, axis=0) / scale
    return vals, tail


def green_qm(r_vec, rp_vec, spec: EnergySpec, params: SystemParams,
             l_max: int = 80, r_max: float | None = None,
             h: float | None = None, tail_tol: float = 1e-5) -> FieldSample:
    """Exact (partial-wave) Green function at one endpoint pair, n = 3.

    Raises ConvergenceError with the tail estimate if the channel sum has
    not settled at l_max.
    """
    vals, tail = qm_field(np.asarray(r_vec, float)[None, :], rp_vec, spec, params,
                          l_max=l_max, r_max=r_max, h=h)
    if tail[0] > tail_tol:
        raise ConvergenceError(
            f"partial-wave sum unconverged at l_max = {l_max}: tail ~ {tail[0]:.2e}",
            tail=float(tail[0]),
        )
    pair = lambert_variables(r_vec, rp_vec, params)
    region = classify_region(pair, spec, params.attractive)
    return FieldSample(tuple(np.asarray(r_vec, float)), tuple(np.asarray(rp_vec, float)),
                       spec.E, "QM", complex(vals[0]), region)
