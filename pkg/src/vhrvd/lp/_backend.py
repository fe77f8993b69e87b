"""Selects the pivot kernel: compiled extension if importable, numpy otherwise.

Set ``VHRVD_PURE_PYTHON=1`` to force the numpy kernel.
"""

import os

from vhrvd.lp import _kernel_py

OPTIMAL = _kernel_py.OPTIMAL
UNBOUNDED = _kernel_py.UNBOUNDED
BUDGET = _kernel_py.BUDGET

run_pivots_py = _kernel_py.run_pivots

try:
    from vhrvd.lp._kernel import run_pivots as run_pivots_c
except ImportError:  # extension not built
    run_pivots_c = None

if run_pivots_c is not None and not os.environ.get("VHRVD_PURE_PYTHON"):
    run_pivots = run_pivots_c
    NAME = "cython"
else:
    run_pivots = run_pivots_py
    NAME = "python"


def use(name):
    """Switch the active kernel (``"cython"`` or ``"python"``); for tests and benchmarks."""
    global run_pivots, NAME
    if name == "cython":
        if run_pivots_c is None:
            raise RuntimeError("compiled kernel vhrvd.lp._kernel is not built")
        run_pivots = run_pivots_c
    elif name == "python":
        run_pivots = run_pivots_py
    else:
        raise ValueError(f"unknown kernel {name!r}")
    NAME = name
