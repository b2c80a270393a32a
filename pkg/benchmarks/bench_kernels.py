"""Compare the compiled and pure-Python dispersion kernels.

Run with ``python benchmarks/bench_kernels.py``.  Each kernel is timed on
the same inputs for both backends and the largest output difference is
reported alongside the speedup.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np
from scipy.optimize import brentq

from iwave import _pykernels as py

try:
    from iwave import _ckernels as cy
except ImportError:  # extension not built
    cy = None

ARGS = (0.5, 1.0, 1.2, 0.3, 0.9, 0.4, 0.3, 0.95, 1.1, 1)
BRACKETS = ()


def _brackets():
    """Sign-change brackets of width 0.5 for the benchmark residual."""
    grid = np.arange(-6.0, 6.0, 0.5)
    f = py.mode_residual_array(*ARGS, grid)
    return tuple(float(v) for v, a, b in zip(grid, f, f[1:]) if a * b < 0)


def cases(n: int):
    global BRACKETS
    BRACKETS = _brackets()
    rng = np.random.default_rng(0)
    s = np.linspace(-6.0, 6.0, n)
    a = np.linspace(1e-3, 6.0, n)
    xs = rng.uniform(-3.0, 3.0, 1000)
    return {
        "mode_residual_array": lambda m: m.mode_residual_array(*ARGS, s),
        "branch_l2sq_array": lambda m: m.branch_l2sq_array(0.5, 1.0, 1.2, 0.3, a),
        "mode_residual (scalar loop)": lambda m: [m.mode_residual(*ARGS, float(v)) for v in xs],
        "brentq on mode_residual": lambda m: [brentq(lambda v: m.mode_residual(*ARGS, v), lo, lo + 0.5, xtol=1e-14)
                                              for lo in BRACKETS],
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=4096, help="array length")
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    if cy is None:
        print("compiled backend unavailable; build with `pip install --no-build-isolation -e .`")
        return
    print(f"{'kernel':30s} {'python [ms]':>12s} {'cython [ms]':>12s} {'speedup':>8s} {'max |diff|':>11s}")
    for name, fn in cases(args.n).items():
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        tc = min(timeit.repeat(lambda: fn(cy), number=1, repeat=args.repeat)) * 1e3
        diff = float(np.nanmax(np.abs(np.asarray(fn(py), float) - np.asarray(fn(cy), float))))
        print(f"{name:30s} {tp:12.3f} {tc:12.3f} {tp / tc:8.1f} {diff:11.2e}")


if __name__ == "__main__":
    main()
