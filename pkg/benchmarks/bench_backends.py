#!/usr/bin/env python3
"""Benchmark: numba-compiled kernels vs the pure-NumPy fallback.

Each workload runs in a fresh subprocess so the backend choice
(COULOMB_SC_DISABLE_NUMBA, read at import time) is clean, with one warmup
pass before timing to exclude JIT compilation.

Usage:
    python benchmarks/bench_backends.py            # both backends, table
    python benchmarks/bench_backends.py --inproc   # current backend only
"""

import argparse
import json
import os
import subprocess
import sys
import textwrap
import time

WORKLOADS = {
    "sc_field_200x200": textwrap.dedent("""
        import numpy as np
        import coulomb_sc as cs
        from coulomb_sc.scan import eval_sc
        par = cs.AU
        spec = cs.energy_from_nu(29.2, par)
        rp = np.array([1232.0, 0.0, 0.0])
        xs = np.linspace(-600.0, 1900.0, 200)
        ys = np.linspace(-1300.0, 1300.0, 200)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel(), np.zeros(X.size)], axis=1)
        def work():
            vals, region, status = eval_sc(pts, rp, spec, par)
            return float(np.nansum(np.abs(vals)))
    """),
    "ua_field_200x200": textwrap.dedent("""
        import numpy as np
        import coulomb_sc as cs
        from coulomb_sc.scan import eval_ua
        par = cs.AU
        spec = cs.energy_from_nu(29.2, par)
        rp = np.array([1232.0, 0.0, 0.0])
        xs = np.linspace(-600.0, 1900.0, 200)
        ys = np.linspace(-1300.0, 1300.0, 200)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        pts = np.stack([X.ravel(), Y.ravel(), np.zeros(X.size)], axis=1)
        def work():
            vals, region, status = eval_ua(pts, rp, spec, par)
            return float(np.nansum(np.abs(vals)))
    """),
    "qm_radial_sweep": textwrap.dedent("""
        import numpy as np
        import coulomb_sc as cs
        from coulomb_sc.qm_oracle import qm_field, _SOLUTION_CACHE
        par = cs.AU
        spec = cs.energy_from_nu(9.7, par)
        rp = np.array([50.0, 0.0, 0.0])
        xs = np.linspace(-80.0, 160.0, 200)
        pts = np.stack([xs, np.full_like(xs, 30.0), np.zeros_like(xs)], axis=1)
        def work():
            _SOLUTION_CACHE.clear()   # time the integrations, not the cache
            vals, tail = qm_field(pts, rp, spec, par, l_max=40)
            return float(np.nansum(np.abs(vals)))
    """),
}

DRIVER = """
{setup}
import json, time
work()  # warmup (includes JIT compilation when numba is active)
t0 = time.perf_counter()
for _ in range({repeats}):
    checksum = work()
dt = (time.perf_counter() - t0) / {repeats}
import coulomb_sc
print(json.dumps({{"backend": coulomb_sc.backend_name(), "seconds": dt,
                   "checksum": checksum}}))
"""


def run_one(name, disable_numba, repeats):
    env = dict(os.environ)
    env["COULOMB_SC_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    code = DRIVER.format(setup=WORKLOADS[name], repeats=repeats)
    proc = subprocess.run([sys.executable, "-c", code], env=env,
                          capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"{name} failed:\n{proc.stderr}")
    return json.loads(proc.stdout.splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--inproc", action="store_true",
                    help="time only the backend selected by the environment")
    args = ap.parse_args()

    if args.inproc:
        for name in WORKLOADS:
            res = run_one(name, disable_numba=False, repeats=args.repeats)
            print(f"{name:20s} {res['backend']:>6s} {res['seconds']*1e3:10.1f} ms")
        return

    print(f"{'workload':20s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
    for name in WORKLOADS:
        fast = run_one(name, disable_numba=False, repeats=args.repeats)
        slow = run_one(name, disable_numba=True, repeats=1)
        if abs(fast["checksum"] - slow["checksum"]) > 1e-9 * abs(slow["checksum"]):
            raise RuntimeError(f"{name}: backend checksums disagree")
        ratio = slow["seconds"] / fast["seconds"]
        print(f"{name:20s} {fast['seconds']*1e3:10.1f} ms {slow['seconds']*1e3:10.1f} ms "
              f"{ratio:8.1f}x")


if __name__ == "__main__":
    main()
