"""The numba kernels and their plain-Python fallback must agree bit for bit."""

import json
import os
import subprocess
import sys

SCRIPT = r"""
import json
from besselhit import backend
from besselhit.rng import RngStream
from besselhit.walk import WalkConfig, run_many, sample_path
from besselhit.oracles import EulerConfig, euler_hitting_times
out = {"backend": backend()}
b = run_many(WalkConfig(2.7, 2.0, epsilon=1e-2), RngStream(5), 6)
out["theta"] = [x.hex() for x in b.theta.tolist()]
out["draws"] = b.draws.tolist()
p = sample_path(WalkConfig(1.0, 1.0, epsilon=1e-2, use_fast_first_step=True), RngStream(6))
out["path"] = [x.hex() for x in p.r.tolist()]
s = RngStream(7)
out["gamma"] = [x.hex() for x in s.gamma(0.3, 5).tolist() + s.gamma(4.0, 5).tolist()]
out["sphere"] = s.sphere_first_coordinate(5, 4).tolist()
t, c = euler_hitting_times(0.0, 0.5, 1.5, EulerConfig(1e-3, 5.0), RngStream(8), 3)
out["euler"] = [x.hex() for x in t.tolist()]
print(json.dumps(out))
"""


def _run(disable):
    env = dict(os.environ)
    env.pop("BESSELHIT_NO_NUMBA", None)
    if disable:
        env["BESSELHIT_NO_NUMBA"] = "1"
    r = subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, env=env, timeout=600)
    assert r.returncode == 0, r.stderr
    return json.loads(r.stdout)


def test_fallback_is_bit_identical():
    fast, slow = _run(False), _run(True)
    assert fast.pop("backend") == "numba"
    assert slow.pop("backend") == "python"
    assert fast == slow
