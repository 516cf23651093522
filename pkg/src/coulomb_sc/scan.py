"""Grid scans, comparison cuts and CSV emission.

Grid points are evaluated as an order-independent parallel map (the numba
kernels use prange; each point writes its own slot), and output rows are
assembled in deterministic grid order regardless of completion order.
Per-point failures never abort a scan: they become NaN rows with a reason
column.

CSV format: header line, comma-separated, UTF-8, LF line endings, floats
in scientific notation with 17 significant digits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .actions import round_trip, _scales
from .errors import ConfigError
from .model import EnergySpec, SystemParams, energy_eigenvalue, energy_from_nu, quantization_action
from .qm_oracle import qm_field
from .semiclassical import (
    POLE_GUARD,
    _elementary_prefactor,
    _merged_prefactor,
    loop_factor,
)

AXIS_NAMES = ("x", "y", "z", "x4", "x5", "x6")

_REGION_NAMES = {K.REGION_ALLOWED: "Allowed", K.REGION_CAUSTIC: "OnCaustic",
                 K.REGION_FORBIDDEN: "Forbidden"}
_REASONS = {K.STATUS_OK: "", K.STATUS_POLE: "pole", K.STATUS_CAUSTIC: "on_caustic",
            K.STATUS_FOCAL: "focal_line", K.STATUS_SOURCE: "source_point",
            K.STATUS_UNSUPPORTED: "unsupported", K.STATUS_UNCONVERGED: "unconverged"}


def fmt(x: float) -> str:
    """One float, scientific, 17 significant digits."""
    if math.isnan(x):
        return "nan"
    return f"{x:.16e}"


@dataclass
class ScanConfig:
    """Everything a scan or cut needs; mirrors the CLI flags."""

    method: str = "sc"  # sc | ua | qm | all
    nu: float | None = None
    energy: float | None = None
    ndim: int = 3
    source: tuple = (1.0, 0.0, 0.0)
    grids: list = field(default_factory=list)  # [(axis, lo, hi, count), ...]
    fixes: dict = field(default_factory=dict)  # axis -> value
    out: str | None = None
    l_max: int = 80
    exclude_radius: float = 5.0
    caustic_tol: float = 1e-9

    def validate(self, want_grids: int):
        if self.method not in ("sc", "ua", "qm", "all"):
            raise ConfigError(f"unknown method {self.method!r}")
        if (self.nu is None) == (self.energy is None):
            raise ConfigError("exactly one of nu / energy must be given")
        if self.ndim < 2:
            raise ConfigError("ndim must be >= 2")
        if self.method in ("ua", "qm", "all") and self.ndim != 3:
            raise ConfigError(f"method {self.method!r} requires ndim = 3")
        if len(self.grids) != want_grids:
            raise ConfigError(
                f"expected {want_grids} swept axis(es), got {len(self.grids)}"
            )
        for ax, lo, hi, count in self.grids:
            if count < 2:
                raise ConfigError(f"grid axis {ax!r} needs count >= 2, got {count}")
            if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
                raise ConfigError(f"grid axis {ax!r}: bad range [{lo}, {hi}]")
            if ax not in AXIS_NAMES[: self.ndim]:
                raise ConfigError(f"axis {ax!r} not valid for ndim = {self.ndim}")
        if len(self.source) != self.ndim:
            raise ConfigError(
                f"source has {len(self.source)} components, ndim = {self.ndim}"
            )

    def energy_spec(self, params: SystemParams) -> EnergySpec:
        if self.nu is not None:
            spec = energy_from_nu(self.nu, params)
        else:
            spec = EnergySpec.from_energy(self.energy, params)
        if spec.E < 0.0 and abs(spec.k - round(spec.k)) < POLE_GUARD:
            raise ConfigError(
                f"nu = {spec.nu} sits on a bound-state pole; offset it"
            )
        return spec

    def params(self) -> SystemParams:
        return SystemParams(ndim=self.ndim)


def _axis_index(ax: str, ndim: int) -> int:
    return AXIS_NAMES[:ndim].index(ax)


def build_points(config: ScanConfig, params: SystemParams):
    """(points array, per-axis coordinate columns) in deterministic
    row-major order: first swept axis outermost."""
    axes = []
    for ax, lo, hi, count in config.grids:
        axes.append((ax, np.linspace(lo, hi, int(count))))
    base = np.zeros(params.ndim)
    for ax, val in config.fixes.items():
        base[_axis_index(ax, params.ndim)] = val
    if len(axes) == 1:
        ax, vals = axes[0]
        pts = np.tile(base, (len(vals), 1))
        pts[:, _axis_index(ax, params.ndim)] = vals
        return pts, [vals]
    (ax1, v1), (ax2, v2) = axes
    pts = np.tile(base, (len(v1) * len(v2), 1))
    c1 = np.repeat(v1, len(v2))
    c2 = np.tile(v2, len(v1))
    pts[:, _axis_index(ax1, params.ndim)] = c1
    pts[:, _axis_index(ax2, params.ndim)] = c2
    return pts, [c1, c2]


def _embed3(points: np.ndarray, ndim: int) -> np.ndarray:
    """Kernel drivers work with 3 columns; pad or reject."""
    if ndim == 3:
        return np.ascontiguousarray(points)
    if ndim == 2:
        out = np.zeros((points.shape[0], 3))
        out[:, :2] = points
        return out
    raise ConfigError("grid evaluation drivers support ndim in {2, 3}")


def eval_sc(points, source, spec: EnergySpec, params: SystemParams,
            caustic_tol: float = 1e-9):
    """Bound semiclassical field over points: (values, region, status)."""
    sk, cv, _ = _scales(spec, params)
    w2pi, _ = round_trip(spec, params)
    pts3 = _embed3(points, params.ndim)
    src3 = _embed3(np.asarray(source, float)[None, :], params.ndim)[0]
    return K.sc_bound_field(
        pts3, src3, spec.a, spec.k, params.ndim, params.mu, params.hbar, sk, cv,
        _merged_prefactor(params.ndim, params.hbar),
        _elementary_prefactor(params.ndim, params.hbar),
        loop_factor(w2pi, params.ndim, params.hbar),
        math.sin(math.pi * spec.k), caustic_tol, 1e-12,
    )


def eval_ua(points, source, spec: EnergySpec, params: SystemParams):
    if params.ndim != 3:
        raise ConfigError("the uniform approximation requires ndim = 3")
    sk, cv, _ = _scales(spec, params)
    w2pi, _ = round_trip(spec, params)
    pts3 = _embed3(points, params.ndim)
    src3 = np.asarray(source, float)
    return K.ua_field(pts3, src3, spec.a, spec.k, params.mu, params.hbar, sk, cv,
                      w2pi, loop_factor(w2pi, params.ndim, params.hbar), 1e-12)


def eval_qm(points, source, spec: EnergySpec, params: SystemParams,
            l_max: int, tail_tol: float = 1e-5):
    """Exact field over points; per-point region/status like the others."""
    vals = np.full(points.shape[0], np.nan, dtype=complex)
    region = np.zeros(points.shape[0], dtype=np.int8)
    status = np.zeros(points.shape[0], dtype=np.int8)
    src = np.asarray(source, float)
    r_norm = np.linalg.norm(points, axis=1)
    s_norm = np.linalg.norm(points - src[None, :], axis=1)
    ok = (r_norm > 0.0) & (s_norm > 0.0)
    status[~ok] = K.STATUS_SOURCE
    four_a = 4.0 * spec.a
    ap = r_norm + np.linalg.norm(src) + s_norm
    region[ap > four_a] = K.REGION_FORBIDDEN
    region[np.abs(ap - four_a) <= 1e-9 * four_a] = K.REGION_CAUSTIC
    if np.any(ok):
        v, tail = qm_field(points[ok], src, spec, params, l_max=l_max)
        vals[ok] = v
        bad = tail > tail_tol
        if np.any(bad):
            idx = np.where(ok)[0][bad]
            status[idx] = K.STATUS_UNCONVERGED
            vals[idx] = np.nan
    return vals, region, status


def run_scan(config: ScanConfig) -> str:
    """2-D scan; returns the CSV text (written to config.out when set)."""
    config.validate(want_grids=2)
    params = config.params()
    spec = config.energy_spec(params)
    points, (c1, c2) = build_points(config, params)

    methods = ["sc", "ua", "qm"] if config.method == "all" else [config.method]
    results = {}
    for m in methods:
        if m == "sc":
            results[m] = eval_sc(points, config.source, spec, params, config.caustic_tol)
        elif m == "ua":
            results[m] = eval_ua(points, config.source, spec, params)
        else:
            results[m] = eval_qm(points, config.source, spec, params, config.l_max)

    lines = ["x,y,re,im,method,region,reason"]
    for i in range(points.shape[0]):
        for m in methods:
            vals, region, status = results[m]
            lines.append(",".join([
                fmt(c1[i]), fmt(c2[i]),
                fmt(float(np.real(vals[i]))), fmt(float(np.imag(vals[i]))),
                m, _REGION_NAMES[int(region[i])], _REASONS[int(status[i])],
            ]))
    text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def run_cut(config: ScanConfig) -> str:
    """1-D comparison cut: QM reference, primitive SC, uniform UA, and the
    deviations of the latter two relative to max|QM| on the cut.

    Deviation columns are NaN inside the source exclusion radius
    (|r - r'| < exclude_radius), where the shared 1/s singularity swamps
    the comparison.
    """
    config.validate(want_grids=1)
    params = config.params()
    spec = config.energy_spec(params)
    points, (c1,) = build_points(config, params)

    sc_vals, sc_region, sc_status = eval_sc(points, config.source, spec, params,
                                            config.caustic_tol)
    ua_vals, _, ua_status = eval_ua(points, config.source, spec, params)
    qm_vals, _, qm_status = eval_qm(points, config.source, spec, params, config.l_max)

    s = np.linalg.norm(points - np.asarray(config.source, float)[None, :], axis=1)
    excluded = s < config.exclude_radius
    qm_ref = np.where(np.asarray([st == K.STATUS_OK for st in qm_status]) & ~excluded,
                      np.real(qm_vals), np.nan)
    scale = np.nanmax(np.abs(qm_ref))
    if not math.isfinite(scale) or scale == 0.0:
        raise ConfigError("no usable reference values on the cut")

    dev_sc = (np.real(sc_vals) - np.real(qm_vals)) / scale
    dev_ua = (np.real(ua_vals) - np.real(qm_vals)) / scale
    dev_sc[excluded] = np.nan
    dev_ua[excluded] = np.nan

    lines = ["x,G_qm,G_sc,G_ua,dev_sc,dev_ua"]
    for i in range(points.shape[0]):
        lines.append(",".join([
            fmt(c1[i]), fmt(float(np.real(qm_vals[i]))),
            fmt(float(np.real(sc_vals[i]))), fmt(float(np.real(ua_vals[i]))),
            fmt(float(dev_sc[i])), fmt(float(dev_ua[i])),
        ]))
    text = "\n".join(lines) + "\n"
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def eigenvalue_table(kmax: int, params: SystemParams) -> list[tuple[int, float, float]]:
    """(k, E_k, W_2pi) rows for k = 0..kmax."""
    if kmax < 0:
        raise ConfigError("kmax must be >= 0")
    return [(k, energy_eigenvalue(k, params), quantization_action(k, params))
            for k in range(kmax + 1)]


def load_json_config(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data
