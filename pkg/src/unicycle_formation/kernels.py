"""Backend selection for the interaction kernel.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``UNICYCLE_FORMATION_PURE_PYTHON=1`` is set, the
pure-Python twin is loaded. Both produce bit-identical results.
"""

import importlib
import os

ENV_FLAG = "UNICYCLE_FORMATION_PURE_PYTHON"


def load_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "cython":
        return importlib.import_module("._kernels", __package__)
    if name == "python":
        return importlib.import_module("._kernels_py", __package__)
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    if os.environ.get(ENV_FLAG) != "1":
        try:
            return "cython", load_backend("cython")
        except ImportError:
            pass
    return "python", load_backend("python")


BACKEND, _mod = _select()
interaction_field = _mod.interaction_field
