"""Airy machinery and the uniform approximation across the caustic (n = 3).

The primitive semiclassical amplitude diverges on the caustic, where the
two members of each path pair coalesce (direct with caustic-reflected,
center-reflected with doubly-reflected).  Each pair is replaced by the
standard two-saddle Airy form; branch and phase conventions are fixed so
that the result reduces to the primitive two-path interference far inside
the allowed region and to the decaying tunneling continuation deep in the
forbidden region.  The loop factor multiplies the whole expression.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .actions import round_trip, _scales
from .errors import RegionError, UnsupportedDimensionError
from .geometry import classify_region, lambert_variables
from .model import EnergySpec, SystemParams
from .semiclassical import FieldSample, _bound_guards, loop_factor


def airy_ai(x: float) -> float:
    """Airy function of the first kind (real argument).

    Maclaurin series for |x| <= 7, large-argument expansions beyond;
    absolute error below 1e-10 everywhere on the real line.
    """
    return K.airy_ai_both(float(x))[0]


def airy_ai_prime(x: float) -> float:
    """Derivative of the Airy function of the first kind."""
    return K.airy_ai_both(float(x))[1]


@dataclass(frozen=True)
class UniformInputs:
    """Airy-form ingredients for one coalescing path pair.

    xi   -- common phase (mean action / hbar, real part in the tunnel)
    zeta -- Airy argument: positive on the allowed side, negative in the
            tunnel, zero on the caustic
    d0, d1 -- amplitude combinations multiplying Ai and Ai'
    """

    xi: float
    zeta: float
    d0: complex
    d1: complex


def uniform_inputs(r_vec, rp_vec, spec: EnergySpec,
                   params: SystemParams) -> tuple[UniformInputs, UniformInputs]:
    """The (pair14, pair23) Airy inputs at one endpoint pair; mainly for
    inspection and tests -- green_uniform uses the same construction."""
    if params.ndim != 3:
        raise UnsupportedDimensionError("uniform approximation implemented for n = 3")
    pair = lambert_variables(r_vec, rp_vec, params)
    _bound_guards(pair, spec, params)
    sk, cv, _ = _scales(spec, params)
    w2pi, _ = round_trip(spec, params)
    mu, hbar, s = params.mu, params.hbar, pair.s
    a = spec.a
    ap, am = pair.alpha_plus, pair.alpha_minus
    four_a = 4.0 * a
    if abs(ap - four_a) < 1e-7 * four_a:
        ap = four_a * (1.0 - 1e-7)
    wm = K.w_bound(am, a, sk)
    phase = np.exp(-1.25j * np.pi)
    if ap < four_a:
        vp = K.v_bound(ap, a, cv)
        vm = K.v_bound(am, a, cv)
        den = math.sqrt(vp * vm)
        q1 = complex(mu * (vm + vp) / (2.0 * s) / den)
        q2 = complex(mu * (vm - vp) / (2.0 * s) / den)
        zeta = (3.0 * (w2pi - 2.0 * K.w_bound(ap, a, sk)) / (4.0 * hbar)) ** (2.0 / 3.0)
    else:
        w = cv * math.sqrt((ap - four_a) / ap)
        vmr = K.v_bound(am, a, cv)
        den = np.sqrt(complex(0.0, w * vmr))
        q1 = mu * complex(vmr, w) / (2.0 * s) / den
        q2 = mu * complex(vmr, -w) / (2.0 * s) / den
        zeta = -((3.0 * K.w_bound_forbidden_im(ap, a, sk) / (2.0 * hbar)) ** (2.0 / 3.0))
    z4 = complex(zeta) ** 0.25
    p14 = UniformInputs(xi=(0.5 * w2pi - wm) / hbar, zeta=zeta,
                        d0=z4 * (q1 + q2) * phase, d1=(q1 - q2) / z4 * phase)
    p23 = UniformInputs(xi=(0.5 * w2pi + wm) / hbar, zeta=zeta,
                        d0=z4 * (q2 + q1) * phase, d1=(q2 - q1) / z4 * phase)
    return p14, p23


def green_uniform(r_vec, rp_vec, spec: EnergySpec, params: SystemParams) -> FieldSample:
    """Uniformly approximated bound-state Green function (n = 3).

    Finite and smooth across the caustic; merges with the primitive
    semiclassical value away from it on either side.
    """
    if params.ndim != 3:
        raise UnsupportedDimensionError("uniform approximation implemented for n = 3")
    if spec.E >= 0.0:
        raise ValueError("green_uniform requires E < 0")
    pair = lambert_variables(r_vec, rp_vec, params)
    _bound_guards(pair, spec, params)
    region = classify_region(pair, spec, params.attractive)

    sk, cv, _ = _scales(spec, params)
    w2pi, _ = round_trip(spec, params)
    pglob = loop_factor(w2pi, params.ndim, params.hbar)
    val, _, status = K.ua_point(pair.r, pair.rp, pair.s, spec.a, spec.k,
                                params.mu, params.hbar, sk, cv, w2pi, pglob,
                                1e-12)
    if status != K.STATUS_OK:
        raise RegionError(f"uniform evaluation failed with status {status}")
    return FieldSample(tuple(np.asarray(r_vec, float)), tuple(np.asarray(rp_vec, float)),
                       spec.E, "UA", val, region)
