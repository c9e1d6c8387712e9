import math
import os
import subprocess
import sys

import numpy as np
import pytest

from unicycle_formation import kernels
from unicycle_formation.avoidance import Obstacle, obstacle_projection
from unicycle_formation.geometry import Vec2
from unicycle_formation.potential import PotentialParams, total_force, total_system_potential

python_kernel = kernels.load_backend("python")
try:
    cython_kernel = kernels.load_backend("cython")
except ImportError:  # extension not built
    cython_kernel = None

needs_cython = pytest.mark.skipif(cython_kernel is None, reason="compiled kernel not built")


def random_case(rng, n, n_obs):
    xs = rng.uniform(-5, 5, n)
    ys = rng.uniform(-5, 5, n)
    obs = [(float(rng.uniform(-8, 8)), float(rng.uniform(-8, 8)), float(rng.uniform(0.3, 2)))
           for _ in range(n_obs)]
    return xs.tolist(), ys.tolist(), obs


def same_bits(a, b):
    if isinstance(a, (list, tuple)):
        return len(a) == len(b) and all(same_bits(x, y) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return float(a).hex() == float(b).hex()
    return a == b


@needs_cython
def test_backends_bit_identical():
    rng = np.random.default_rng(5)
    for trial in range(300):
        n = int(rng.integers(1, 25))
        xs, ys, obs = random_case(rng, n, int(rng.integers(0, 4)))
        a = python_kernel.interaction_field(xs, ys, obs, 3.0, 2.0, 4.0)
        b = cython_kernel.interaction_field(xs, ys, obs, 3.0, 2.0, 4.0)
        assert same_bits(list(a), list(b)), trial


@needs_cython
def test_backends_agree_on_faults():
    for mod in (python_kernel, cython_kernel):
        out = mod.interaction_field([0.0, 0.0], [1.0, 1.0], [], 3.0, 2.0, 4.0)
        assert out[8] == 0
        out = mod.interaction_field([5.0, 0.5], [0.0, 0.0], [(0.0, 0.0, 1.0)], 3.0, 2.0, 4.0)
        assert out[7] == 1
        out = mod.interaction_field([], [], [], 3.0, 2.0, 4.0)
        assert out[5] == math.inf and out[6] == math.inf


def test_kernel_matches_reference_functions():
    params = PotentialParams(3.0, 1.0, 2.0, 4.0)
    rng = np.random.default_rng(6)
    for _ in range(100):
        xs, ys, obs = random_case(rng, int(rng.integers(1, 8)), int(rng.integers(0, 3)))
        pts = [Vec2(x, y) for x, y in zip(xs, ys)]
        obstacles = [Obstacle(Vec2(cx, cy), r) for cx, cy, r in obs]
        if any(o.surface_distance(p) <= 0 for o in obstacles for p in pts):
            continue
        virtual = [
            [obstacle_projection(p, o) for o in obstacles if o.surface_distance(p) < params.b]
            for p in pts
        ]
        fx, fy, threat, va, va_virtual, *_ = kernels.interaction_field(xs, ys, obs, 3.0, 2.0, 4.0)
        for i in range(len(pts)):
            f = total_force(i, pts, virtual[i], params)
            assert fx[i] == pytest.approx(f.x, rel=1e-12, abs=1e-12)
            assert fy[i] == pytest.approx(f.y, rel=1e-12, abs=1e-12)
        assert va == pytest.approx(total_system_potential(pts, None, params), rel=1e-12)
        assert va + va_virtual == pytest.approx(
            total_system_potential(pts, virtual, params), rel=1e-12, abs=1e-12
        )


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


def test_env_flag_forces_python():
    env = dict(os.environ, **{kernels.ENV_FLAG: "1"})
    proc = subprocess.run(
        [sys.executable, "-c", "from unicycle_formation import kernels; print(kernels.BACKEND)"],
        capture_output=True, text=True, env=env,
    )
    assert proc.stdout.strip() == "python"


@needs_cython
def test_default_backend_is_compiled():
    assert kernels.BACKEND == "cython"
