"""Time the numba kernels against the plain-Python fallback.

Each backend runs in its own interpreter (the backend is fixed at import), and
the first batch is discarded so the numba timing excludes compilation.

    python3 benchmarks/bench_walk.py --reps 2000 --delta 2.7 --eps 1e-3
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from besselhit import backend
from besselhit.rng import RngStream
from besselhit.walk import WalkConfig, run_many
from besselhit.oracles import EulerConfig, euler_hitting_times
a = json.loads(sys.argv[1])
cfg = WalkConfig(a["delta"], a["level"], gamma=a["gamma"], epsilon=a["eps"])
run_many(cfg, RngStream(0), 2)
euler_hitting_times(0.0, 1.0, 2.0, EulerConfig(1e-2, 1.0), RngStream(0), 2)
out = {"backend": backend()}
for name, job in (
    ("walk", lambda: run_many(cfg, RngStream(a["seed"]), a["reps"])),
    ("euler", lambda: euler_hitting_times(0.0, 1.0, 2.0, EulerConfig(a["dt"], 50.0), RngStream(a["seed"]), a["euler_reps"])),
):
    best = float("inf")
    for _ in range(a["repeat"]):
        t0 = time.perf_counter()
        job()
        best = min(best, time.perf_counter() - t0)
    out[name] = best
print(json.dumps(out))
"""


def time_backend(args, disable):
    env = dict(os.environ)
    env.pop("BESSELHIT_NO_NUMBA", None)
    if disable:
        env["BESSELHIT_NO_NUMBA"] = "1"
    payload = json.dumps(vars(args))
    r = subprocess.run([sys.executable, "-c", WORKER, payload], capture_output=True, text=True, env=env)
    if r.returncode != 0:
        sys.exit(r.stderr)
    return json.loads(r.stdout)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--delta", type=float, default=2.7)
    p.add_argument("--level", type=float, default=5.0)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--reps", type=int, default=2000, help="walk runs per batch")
    p.add_argument("--euler-reps", type=int, default=50, help="Euler paths per batch")
    p.add_argument("--dt", type=float, default=1e-3, help="Euler step")
    p.add_argument("--repeat", type=int, default=3, help="batches timed per backend (best kept)")
    p.add_argument("--seed", type=int, default=2024)
    args = p.parse_args(argv)

    fast = time_backend(args, disable=False)
    slow = time_backend(args, disable=True)
    if fast["backend"] != "numba":
        print("numba unavailable: both timings use the fallback")
    print(f"{'kernel':<8}{'numba [s]':>12}{'python [s]':>12}{'speedup':>10}")
    for name in ("walk", "euler"):
        print(f"{name:<8}{fast[name]:>12.4f}{slow[name]:>12.4f}{slow[name] / fast[name]:>9.1f}x")


if __name__ == "__main__":
    main()
