"""Time the numba kernels against the pure-Python fallback.

The fallback is timed in a child process started with GRAVDIST_DISABLE_NUMBA=1,
since the flag is read once at import.

Usage: python3 benchmarks/bench_kernels.py [--years 20] [--repeat 3]
"""
import argparse
import json
import os
import subprocess
import sys
import time

from gravdist import IntegratorSpec, Method, integrate_ode, load_preset
from gravdist._accel import NUMBA_OK


def time_methods(years, repeat):
    p = load_preset("Phase1").params
    out = {}
    for m in Method:
        spec = IntegratorSpec(m, 1e-3, 100)
        integrate_ode((0.3, 0.25), p, 0.01, spec)  # compile / warm up
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            integrate_ode((0.3, 0.25), p, years, spec)
            best = min(best, time.perf_counter() - t0)
        out[m.value] = best
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--years", type=float, default=20.0)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.child:
        print(json.dumps(time_methods(args.years, 1)))
        return

    fast = time_methods(args.years, args.repeat)
    env = dict(os.environ, GRAVDIST_DISABLE_NUMBA="1")
    child = subprocess.run([sys.executable, __file__, "--child", "--years", str(args.years)],
                           env=env, capture_output=True, text=True, check=True)
    slow = json.loads(child.stdout)

    if not NUMBA_OK:
        print("numba unavailable or disabled; both columns are the Python fallback")
    print(f"{int(round(args.years / 1e-3))} steps of dt=1e-3, Phase1 preset")
    print(f"{'method':<14}{'numba [s]':>12}{'python [s]':>12}{'speedup':>10}")
    for name, t_jit in fast.items():
        t_py = slow[name]
        print(f"{name:<14}{t_jit:>12.4f}{t_py:>12.3f}{t_py / t_jit:>9.0f}x")


if __name__ == "__main__":
    main()
