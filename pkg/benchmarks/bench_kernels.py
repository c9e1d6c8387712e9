"""Compare the compiled and pure-Python interaction kernels.

Times one ``interaction_field`` call on random layouts of N agents with two
obstacles, then a full line-formation run under each backend (in separate
processes, since the backend is fixed at import).

    python3 benchmarks/bench_kernels.py [--sizes 9 50 200] [--repeat 5]
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from unicycle_formation import kernels

RUN_SNIPPET = (
    "import time;"
    "from unicycle_formation import kernels;"
    "from unicycle_formation.engine import run;"
    "from unicycle_formation.scenario import load_scenario;"
    "s = load_scenario('line_formation');"
    "t = time.perf_counter(); run(s);"
    "print(kernels.BACKEND, time.perf_counter() - t)"
)


def layout(n, seed=0):
    rng = np.random.default_rng(seed)
    # density of about one agent per 4 m^2 keeps many pairs inside the gate
    side = 2.0 * np.sqrt(n)
    xs = rng.uniform(0, side, n).tolist()
    ys = rng.uniform(0, side, n).tolist()
    obs = [(-5.0, -5.0, 2.0), (side + 5.0, side / 2, 3.0)]
    return xs, ys, obs


def bench_call(mod, n, repeat):
    xs, ys, obs = layout(n)
    number = max(1, 20000 // (n * n))
    best = min(timeit.repeat(lambda: mod.interaction_field(xs, ys, obs, 3.0, 2.0, 4.0),
                             number=number, repeat=repeat))
    return best / number


def bench_run(backend):
    env = dict(os.environ)
    if backend == "python":
        env[kernels.ENV_FLAG] = "1"
    else:
        env.pop(kernels.ENV_FLAG, None)
    out = subprocess.run([sys.executable, "-c", RUN_SNIPPET], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[2, 9, 25, 50, 100, 200])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--no-run", action="store_true", help="skip the full-run timing")
    args = p.parse_args(argv)

    py = kernels.load_backend("python")
    try:
        cy = kernels.load_backend("cython")
    except ImportError:
        print("compiled kernel not built; only the Python backend is available")
        cy = None

    print(f"{'N':>5} {'python [us]':>12} {'cython [us]':>12} {'speedup':>8}")
    for n in args.sizes:
        t_py = bench_call(py, n, args.repeat)
        if cy is None:
            print(f"{n:>5} {t_py * 1e6:>12.1f} {'-':>12} {'-':>8}")
            continue
        t_cy = bench_call(cy, n, args.repeat)
        print(f"{n:>5} {t_py * 1e6:>12.1f} {t_cy * 1e6:>12.1f} {t_py / t_cy:>7.1f}x")

    if not args.no_run:
        print("\nfull line-formation run (9 agents, 3001 steps):")
        for backend in ("python", "cython"):
            if backend == "cython" and cy is None:
                continue
            name, secs = bench_run(backend)
            print(f"  {name:<7} {secs:6.2f} s")


if __name__ == "__main__":
    main()
