"""Compare the numba and numpy kernel backends.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--groups B3 D3 B4]

Each workload is run once per backend to warm up (numba compiles on first
call), then timed ``--repeat`` times; the best time is reported.  The outputs
of the two backends are compared for equality before timing.
"""

import argparse
import time

import numpy as np

from weylhp import _kernels as K
from weylhp.beg import beg_reduced_orbit, hp0_report
from weylhp.sl2 import invariant_hw0_basis
from weylhp.weyl import WeylGroup


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_workload(w, degree):
    """E_n on every invariant hw0 basis vector of one degree."""
    basis = invariant_hw0_basis(w, degree)
    reduced = list(basis.reduced)

    def run():
        return [beg_reduced_orbit(w, e, c) for e, c in reduced]

    return run


def same_output(a, b):
    return len(a) == len(b) and all(
        np.array_equal(ea, eb) and np.array_equal(ca, cb) for (ea, ca), (eb, cb) in zip(a, b)
    )


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--groups", nargs="+", default=["B3", "D3", "B4", "D4"])
    ap.add_argument("--degree", type=int, default=None, help="kernel workload degree (default 4(n-1))")
    args = ap.parse_args(argv)
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    original = K.get_backend()
    print(f"{'workload':<28}{'numba s':>10}{'numpy s':>10}{'speedup':>9}")
    try:
        for name in args.groups:
            w = WeylGroup.parse(name)
            d = args.degree if args.degree is not None else 4 * (w.rank - 1)
            workloads = [
                (f"{name} kernels deg {d}", kernel_workload(w, d)),
                (f"{name} hp0 report", lambda w=w: hp0_report(w)),
            ]
            for label, fn in workloads:
                results, times = {}, {}
                for backend in ("numba", "numpy"):
                    K.set_backend(backend)
                    results[backend] = fn()
                    times[backend] = best_of(fn, args.repeat)
                if label.endswith("hp0 report"):
                    agree = results["numba"].to_dict(timing=False) == results["numpy"].to_dict(timing=False)
                else:
                    agree = same_output(results["numba"], results["numpy"])
                if not agree:
                    raise SystemExit(f"{label}: backends disagree")
                ratio = times["numpy"] / times["numba"] if times["numba"] else float("nan")
                print(f"{label:<28}{times['numba']:>10.3f}{times['numpy']:>10.3f}{ratio:>8.1f}x")
    finally:
        K.set_backend(original)


if __name__ == "__main__":
    main()
