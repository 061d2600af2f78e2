"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter (the backend is fixed at import).
Usage: python benchmarks/bench_backends.py [--n 200] [--p 0.05] [--steps 20000]
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import hashlib, json, sys, time
from curveball import _backend
from curveball.chains import Chain, ChainKind
from curveball.generators import gen_erdos_renyi
from curveball.partition import sample_two_partitions
n, p, steps = int(sys.argv[1]), float(sys.argv[2]), int(sys.argv[3])
g = gen_erdos_renyi(n, p, True, 1)
out = {"backend": _backend.BACKEND}
for kind in ["directed-curveball", "global-directed-curveball", "adjusted-switching"]:
    k = ChainKind(kind)
    c = Chain(g, k, 1); c.advance(1)  # compile / warm up
    c = Chain(g, k, 1)
    t = time.perf_counter()
    c.advance(steps if not k.is_global else max(1, steps // 100))
    out[kind] = time.perf_counter() - t
    out[kind + ":edges"] = hashlib.sha1(repr(c.state().key()).encode()).hexdigest()
sample_two_partitions(n, 1, 1)
t = time.perf_counter(); sample_two_partitions(n, 1000, 1); out["partitions"] = time.perf_counter() - t
print(json.dumps(out))
"""


def run(backend, args):
    env = dict(os.environ, CURVEBALL_BACKEND=backend)
    res = subprocess.run([sys.executable, "-c", CHILD, str(args.n), str(args.p), str(args.steps)],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--p", type=float, default=0.05)
    ap.add_argument("--steps", type=int, default=20000)
    args = ap.parse_args()
    fast, slow = run("numba", args), run("numpy", args)
    print(f"{'task':28s} {'numba s':>10s} {'numpy s':>10s} {'speedup':>8s}")
    for key in fast:
        if key == "backend" or key.endswith(":edges"):
            continue
        print(f"{key:28s} {fast[key]:10.4f} {slow[key]:10.4f} {slow[key] / fast[key]:8.1f}")
    same = all(fast[k] == slow[k] for k in fast if k.endswith(":edges"))
    print("identical states:", same)


if __name__ == "__main__":
    main()
