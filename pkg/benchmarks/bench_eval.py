#!/usr/bin/env python3
"""Benchmark: compiled tape kernel vs pure-Python backend.

Workloads dominated by pointwise expression evaluation, on a generic
non-diagonal 3-metric whose curvature does not simplify away (the Ricci
tape is ~1200 instructions):

  * batch:      Ricci tensor on one large batch of sample points;
  * per-check:  Ricci tensor on many 100-point batches (the pattern the
                verification suites produce);
  * geodesic:   RK4 integration, 10^4 steps with four single-point
                Christoffel-tape calls per step.

The backend is fixed at import time, so each lane runs in a subprocess with
RIEMCHECK_PURE set accordingly.

    python benchmarks/bench_eval.py [--points 20000] [--steps 10000]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def _generic_metric():
    import numpy as np
    from riemcheck.geometry import Chart, MetricField

    chart = Chart("G", ["x1", "x2", "x3"])
    e = chart.parse
    mat = np.empty((3, 3), dtype=object)
    mat[0, 0] = e("1 + 0.3*sin(x1)*exp(0.2*x2)")
    mat[1, 1] = e("1 + 0.2*cos(x3)^2")
    mat[2, 2] = e("1 + 0.25*x1^2*x2")
    mat[0, 1] = mat[1, 0] = e("0.1*x1*x3")
    mat[0, 2] = mat[2, 0] = e("0.15*sin(x2*x3)")
    mat[1, 2] = mat[2, 1] = e("0.05*exp(x1*x2)")
    return MetricField(chart, mat)


def run_lane(points, steps):
    import numpy as np
    from riemcheck.expr import backend_name
    from riemcheck.geometry import geodesic_integrate

    out = {"backend": backend_name()}
    g = _generic_metric()
    ric_tape = g.ricci().tape()
    out["ricci_instructions"] = int(ric_tape.nregs)
    rng = np.random.default_rng(0)
    X = rng.uniform(0.1, 1.0, size=(points, 3))
    ric_tape.evaluate(X[:128])  # warm-up

    t0 = time.perf_counter()
    ric_tape.evaluate(X)
    out["batch_seconds"] = time.perf_counter() - t0
    out["batch_points"] = points

    reps = max(1, points // 100)
    t0 = time.perf_counter()
    for k in range(reps):
        ric_tape.evaluate(X[k % (points // 100) * 100:][:100])
    out["percheck_seconds"] = time.perf_counter() - t0
    out["percheck_batches"] = reps

    g.christoffel()  # build outside the timed region
    t0 = time.perf_counter()
    geodesic_integrate(g, {"x1": 0.4, "x2": 0.5, "x3": 0.6},
                       np.array([0.4, 0.3, 0.2]),
                       t_end=steps * 1e-4, dt=1e-4, record_every=10 ** 9)
    out["geodesic_seconds"] = time.perf_counter() - t0
    out["geodesic_steps"] = steps
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=20000)
    ap.add_argument("--steps", type=int, default=10000)
    ap.add_argument("--lane", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.lane:
        json.dump(run_lane(args.points, args.steps), sys.stdout)
        return 0

    lanes = {}
    for pure in (False, True):
        env = dict(os.environ)
        env["RIEMCHECK_PURE"] = "1" if pure else "0"
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--lane",
             "--points", str(args.points), "--steps", str(args.steps)],
            env=env, capture_output=True, text=True, check=True)
        lane = json.loads(proc.stdout)
        lanes[lane["backend"]] = lane

    if "compiled" not in lanes:
        print("compiled kernel not built; pure lane only:")
        print(json.dumps(lanes, indent=2))
        return 0

    c, p = lanes["compiled"], lanes["pure"]
    print(f"Ricci tape: {c['ricci_instructions']} instructions "
          "(generic non-diagonal 3-metric)")
    print()
    print(f"{'workload':<36}{'compiled':>11}{'pure':>11}{'speedup':>9}")
    for key, label in (
            ("batch_seconds", f"one batch of {c['batch_points']} points"),
            ("percheck_seconds", f"{c['percheck_batches']} batches of 100 points"),
            ("geodesic_seconds", f"geodesic RK4, {c['geodesic_steps']} steps")):
        ratio = p[key] / c[key] if c[key] > 0 else float("inf")
        print(f"{label:<36}{c[key]:>10.3f}s{p[key]:>10.3f}s{ratio:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
