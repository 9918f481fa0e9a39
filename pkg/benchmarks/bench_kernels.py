"""Time the compiled modular kernels against the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``.  Also times a full
exact inversion (unitary Gram, d=5) through each backend.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from wgcalc import _kernels_py

try:
    from wgcalc import _kernels as compiled
except ImportError:
    compiled = None

P = 2147483629


def _bench(fn, *args, repeat: int = 5) -> float:
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def kernel_table(sizes):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        a = rng.integers(0, P, size=(n, n), dtype=np.int64)
        py = _bench(_kernels_py.inverse_mod_p, a, P)
        cy = _bench(compiled.inverse_mod_p, a, P) if compiled else float("nan")
        rows.append(("inverse_mod_p", n, py, cy))
        b = a[: n // 2]
        b = np.vstack([b, b])  # rank n/2
        py = _bench(_kernels_py.pivot_columns_mod_p, b, P)
        cy = _bench(compiled.pivot_columns_mod_p, b, P) if compiled else float("nan")
        rows.append(("pivot_columns_mod_p", n, py, cy))
    return rows


def inversion_timing():
    """Exact inverse of the d=5 unitary Gram at N=7 with each backend."""
    from wgcalc import kernels
    from wgcalc.exactalg import invert_rational
    from wgcalc.weingarten import gram_unitary

    G = gram_unitary(5).matrix.evaluate(7)
    out = {}
    for name, mod in (("python", _kernels_py), ("cython", compiled)):
        if mod is None:
            continue
        saved = kernels.inverse_mod_p
        kernels.inverse_mod_p = mod.inverse_mod_p
        try:
            out[name] = _bench(invert_rational, G, repeat=3)
        finally:
            kernels.inverse_mod_p = saved
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[24, 60, 120, 240])
    args = ap.parse_args(argv)
    if compiled is None:
        print("compiled extension not built; only the fallback is timed")
    print(f"{'kernel':22s} {'n':>5s} {'numpy [ms]':>11s} {'cython [ms]':>12s} {'speedup':>8s}")
    for name, n, py, cy in kernel_table(args.sizes):
        print(f"{name:22s} {n:5d} {1e3 * py:11.2f} {1e3 * cy:12.2f} {py / cy:8.1f}x")
    t = inversion_timing()
    print("\nexact inverse of the d=5 unitary Gram at N=7 (120x120):")
    for name, sec in t.items():
        print(f"  {name:7s} {sec:.3f} s")


if __name__ == "__main__":
    main()
