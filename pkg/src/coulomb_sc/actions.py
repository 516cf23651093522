"""Closed-form reduced actions, travel times and velocities for every
energy regime, plus the four-elementary-path table for bound motion.

Production code never integrates: all values come from the closed forms.
The defining integrals exist only as quadrature oracles in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from . import _kernels as K
from .errors import ForbiddenRegionError, RegionError
from .geometry import LambertPair, Region, classify_region
from .model import EnergySpec, SystemParams
from .vvpm import morse_index


@dataclass(frozen=True)
class BasicActions:
    """The one-dimensional building blocks at a given endpoint pair.

    w_plus/w_minus and t_plus/t_minus are the half actions/times evaluated
    at alpha_plus and alpha_minus; w_2pi/t_2pi belong to the closed orbit.
    All real in the allowed bound regime.
    """

    w_plus: complex
    w_minus: complex
    t_plus: float
    t_minus: float
    w_2pi: float
    t_2pi: float


@dataclass(frozen=True)
class PathQuantity:
    """Reduced action, travel time, Morse index and loop count of one
    elementary path (path_id 1..4)."""

    path_id: int
    W: float
    T: float
    morse: int
    loops: int


def _scales(spec: EnergySpec, params: SystemParams):
    """(sk, cv, ts) for the current energy; see _kernels docstring."""
    sk = math.sqrt(2.0 * params.mu * abs(spec.E))
    cv = math.sqrt(2.0 * abs(spec.E) / params.mu)
    ts = params.mu * spec.a / sk
    return sk, cv, ts


def velocity(alpha: float, spec: EnergySpec, params: SystemParams) -> float:
    """Collinear speed at path coordinate alpha/2, bound allowed regime.

    v = sqrt(2|E|/mu) sqrt((4a - alpha)/alpha); diverges at the force
    center (alpha -> 0) and vanishes at the turning point alpha = 4a.
    """
    if spec.E >= 0.0:
        raise ValueError("velocity: bound form requires E < 0")
    if alpha <= 0.0:
        raise RegionError("velocity diverges at the force center (alpha = 0)")
    if alpha >= 4.0 * spec.a:
        raise RegionError(
            f"alpha = {alpha} is at/beyond the turning point 4a = {4.0 * spec.a}"
        )
    _, cv, _ = _scales(spec, params)
    return K.v_bound(alpha, spec.a, cv)


def reduced_action_bound(alpha: float, spec: EnergySpec, params: SystemParams) -> float:
    """Half-action W(alpha) for bound motion, 0 <= alpha <= 4a (endpoint as limit)."""
    if spec.E >= 0.0:
        raise ValueError("reduced_action_bound requires E < 0")
    if alpha < 0.0 or alpha > 4.0 * spec.a * (1.0 + 1e-12):
        raise RegionError(f"alpha = {alpha} outside [0, 4a] = [0, {4.0 * spec.a}]")
    sk, _, _ = _scales(spec, params)
    return K.w_bound(min(alpha, 4.0 * spec.a), spec.a, sk)


def travel_time_bound(alpha: float, spec: EnergySpec, params: SystemParams) -> float:
    """Half travel time t(alpha) for bound motion; t = dW/dE at fixed alpha."""
    if spec.E >= 0.0:
        raise ValueError("travel_time_bound requires E < 0")
    if alpha < 0.0 or alpha > 4.0 * spec.a * (1.0 + 1e-12):
        raise RegionError(f"alpha = {alpha} outside [0, 4a] = [0, {4.0 * spec.a}]")
    _, _, ts = _scales(spec, params)
    return K.t_bound(min(alpha, 4.0 * spec.a), spec.a, ts)


def round_trip(spec: EnergySpec, params: SystemParams) -> tuple[float, float]:
    """(W_2pi, T_2pi) = (2 pi sqrt(mu a Kc), 2 pi sqrt(mu a^3 / Kc)) for E < 0."""
    if spec.E >= 0.0:
        raise ValueError("round_trip requires E < 0")
    w = 2.0 * math.pi * math.sqrt(params.mu * spec.a * params.Kc)
    t = 2.0 * math.pi * math.sqrt(params.mu * spec.a**3 / params.Kc)
    return w, t


def basic_actions(pair: LambertPair, spec: EnergySpec, params: SystemParams) -> BasicActions:
    """One-dimensional building blocks for a bound allowed endpoint pair."""
    region = classify_region(pair, spec, params.attractive)
    if region.tag is Region.FORBIDDEN:
        raise ForbiddenRegionError(
            "endpoint pair lies beyond the caustic; use the forbidden-region forms"
        )
    w2pi, t2pi = round_trip(spec, params)
    return BasicActions(
        w_plus=reduced_action_bound(pair.alpha_plus, spec, params),
        w_minus=reduced_action_bound(pair.alpha_minus, spec, params),
        t_plus=travel_time_bound(pair.alpha_plus, spec, params),
        t_minus=travel_time_bound(pair.alpha_minus, spec, params),
        w_2pi=w2pi,
        t_2pi=t2pi,
    )


def four_paths(pair: LambertPair, spec: EnergySpec, params: SystemParams) -> list[PathQuantity]:
    """The four elementary paths between the projected endpoints.

    1: direct                      W1 = W+ - W-          T1 = t+ - t-
    2: reflected at the center     W2 = W+ + W-          T2 = t+ + t-
    3: reflected at center+caustic W3 = W_2pi - W1       T3 = T_2pi - T1
    4: reflected at the caustic    W4 = W_2pi - W2       T4 = T_2pi - T2

    Every row satisfies T = dW/dE.  Morse indices from morse_index; adding
    a loop adds (W_2pi, T_2pi) and 2(n-1) to the index.
    """
    b = basic_actions(pair, spec, params)
    w1, t1 = b.w_plus - b.w_minus, b.t_plus - b.t_minus
    w2, t2 = b.w_plus + b.w_minus, b.t_plus + b.t_minus
    n = params.ndim
    return [
        PathQuantity(1, w1, t1, morse_index(1, n), 0),
        PathQuantity(2, w2, t2, morse_index(2, n), 0),
        PathQuantity(3, b.w_2pi - w1, b.t_2pi - t1, morse_index(3, n), 0),
        PathQuantity(4, b.w_2pi - w2, b.t_2pi - t2, morse_index(4, n), 0),
    ]


def loop_variant(pq: PathQuantity, j: int, spec: EnergySpec,
                 params: SystemParams) -> PathQuantity:
    """The same elementary path with j extra full loops attached."""
    if j < 0:
        raise ValueError("loop count must be nonnegative")
    w2pi, t2pi = round_trip(spec, params)
    return replace(
        pq,
        W=pq.W + j * w2pi,
        T=pq.T + j * t2pi,
        morse=pq.morse + j * 2 * (params.ndim - 1),
        loops=pq.loops + j,
    )


# --- scattering (E > 0) ----------------------------------------------------

def scatter_velocity(alpha: float, spec: EnergySpec, params: SystemParams,
                     repulsive: bool = False) -> float:
    """Collinear speed for unbounded motion (E > 0)."""
    if spec.E <= 0.0:
        raise ValueError("scatter_velocity requires E > 0")
    if alpha <= 0.0:
        raise RegionError("alpha must be positive")
    _, cv, _ = _scales(spec, params)
    if repulsive:
        if alpha <= 4.0 * spec.a:
            raise RegionError(
                f"repulsive allowed motion needs alpha > 4|a| = {4.0 * spec.a}"
            )
        return K.v_scatter_rep(alpha, spec.a, cv)
    return K.v_scatter_attr(alpha, spec.a, cv)


def reduced_action_scatter_attractive(alpha: float, spec: EnergySpec,
                                      params: SystemParams) -> float:
    """Half-action for E > 0 attractive motion, anchored at alpha = 0;
    monotone increasing, ~ sqrt(2 mu E) alpha / 2 for large alpha."""
    if spec.E <= 0.0:
        raise ValueError("reduced_action_scatter_attractive requires E > 0")
    if alpha < 0.0:
        raise RegionError("alpha must be nonnegative")
    sk, _, _ = _scales(spec, params)
    return K.w_scatter_attr(alpha, spec.a, sk)


def reduced_action_scatter_repulsive(alpha: float, spec: EnergySpec,
                                     params: SystemParams) -> float:
    """Half-action for E > 0 repulsive motion on the allowed side
    alpha >= 4|a|; vanishes at the turning point."""
    if spec.E <= 0.0:
        raise ValueError("reduced_action_scatter_repulsive requires E > 0")
    if alpha < 4.0 * spec.a * (1.0 - 1e-12):
        raise ForbiddenRegionError(
            f"alpha = {alpha} is inside the repulsive barrier (< 4|a| = "
            f"{4.0 * spec.a}); use reduced_action_repulsive_forbidden"
        )
    sk, _, _ = _scales(spec, params)
    return K.w_scatter_rep(max(alpha, 4.0 * spec.a), spec.a, sk)


def reduced_action_repulsive_forbidden(alpha_minus: float, spec: EnergySpec,
                                       params: SystemParams) -> tuple[complex, complex]:
    """Purely imaginary half-action inside the repulsive barrier
    (0 <= alpha_minus < 4|a|).

    Both analytic-continuation branches are returned, the decaying
    (positive-imaginary) one first; the caller selects.
    """
    if spec.E <= 0.0:
        raise ValueError("reduced_action_repulsive_forbidden requires E > 0")
    if alpha_minus < 0.0 or alpha_minus > 4.0 * spec.a * (1.0 + 1e-12):
        raise RegionError(
            f"alpha_minus = {alpha_minus} outside the barrier [0, 4|a|]"
        )
    sk, _, _ = _scales(spec, params)
    mag = K.w_rep_forbidden_mag(min(alpha_minus, 4.0 * spec.a), spec.a, sk)
    return complex(0.0, mag), complex(0.0, -mag)


def reduced_action_bound_forbidden(alpha_plus: float, spec: EnergySpec,
                                   params: SystemParams) -> tuple[complex, complex]:
    """W_+ continued past the caustic (E < 0, alpha_plus > 4a).

    The real part is the alpha-independent half-loop action pi a sqrt(2mu|E|);
    the imaginary part grows with tunnel depth.  Returned as (preferred,
    conjugate) where the preferred branch has positive imaginary part, which
    makes exp(i W/hbar) decay deep in the tunnel.  Both branches matter in
    the uniform approximation near the tunnel exit.
    """
    if spec.E >= 0.0:
        raise ValueError("reduced_action_bound_forbidden requires E < 0")
    if alpha_plus <= 4.0 * spec.a:
        raise RegionError(
            f"alpha_plus = {alpha_plus} is not beyond the caustic 4a = {4.0 * spec.a}; "
            "use reduced_action_bound"
        )
    sk, _, _ = _scales(spec, params)
    re = math.pi * spec.a * sk
    im = K.w_bound_forbidden_im(alpha_plus, spec.a, sk)
    return complex(re, im), complex(re, -im)


def kepler_transfer_time(xi: float, xi_p: float, eps: float, spec: EnergySpec,
                         params: SystemParams) -> float:
    """Transfer time between eccentric anomalies xi' -> xi on an ellipse of
    eccentricity eps: sqrt(mu a^3/Kc) (xi - eps sin xi - xi' + eps sin xi')."""
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eccentricity must satisfy 0 <= eps < 1, got {eps}")
    ts = math.sqrt(params.mu * spec.a**3 / params.Kc)
    return ts * (xi - eps * math.sin(xi) - xi_p + eps * math.sin(xi_p))
