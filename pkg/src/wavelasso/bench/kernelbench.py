"""Timing comparison of the compiled kernels against the numpy fallback."""

import time

import numpy as np

from .. import dwt, grouping
from ..backend import BACKEND, available_backends, get_kernels


def _time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(n1d, side):
    rng = np.random.default_rng(0)
    x1 = rng.standard_normal(n1d)
    levels1 = n1d.bit_length() - 1
    img = rng.standard_normal((side, side))
    levels2 = side.bit_length() - 1

    layout = dwt.Layout2D(side, side, levels2)
    gs = grouping.make_groups(grouping.build_quadtree(layout), "pc4", layout)
    repmap = grouping.make_replication_map(gs)
    v = rng.standard_normal(repmap.total_replicas)
    starts, lens = repmap.group_starts, repmap.group_lens

    taps = np.exp(-0.5 * (np.arange(-3, 4) ** 2))
    taps = np.outer(taps, taps)
    taps /= taps.sum()

    coeffs1 = rng.standard_normal(n1d)
    packed2 = rng.standard_normal((side, side))
    big = rng.standard_normal(side * side)

    return [
        (f"haar1d_forward n={n1d}", lambda k: k.haar1d_forward(x1, levels1)),
        (f"haar1d_inverse n={n1d}", lambda k: k.haar1d_inverse(coeffs1, levels1)),
        (f"haar2d_forward {side}x{side}", lambda k: k.haar2d_forward(img, levels2)),
        (f"haar2d_inverse {side}x{side}", lambda k: k.haar2d_inverse(packed2, levels2)),
        (f"soft_threshold n={side * side}", lambda k: k.soft_threshold(big, 0.1)),
        (
            f"group_shrink {len(lens)} groups",
            lambda k: k.group_shrink(v, starts, lens, 0.1),
        ),
        (
            f"group_norm_sum {len(lens)} groups",
            lambda k: k.group_norm_sum(v, starts, lens),
        ),
        (f"conv2d_circular {side}x{side} 7x7", lambda k: k.conv2d_circular(img, taps)),
    ]


def run_kernel_bench(n1d=4096, side=128, repeats=5):
    """Time every kernel under each available backend.

    Returns (rows, lines): structured timings and a printable table.  The
    active backend for package-level code is chosen at import; set
    WAVELASSO_BACKEND=python to force the fallback end to end.
    """
    backends = available_backends()
    rows = []
    lines = [
        f"kernel benchmark (best of {repeats}); active backend: {BACKEND}",
        f"{'kernel':38s} " + " ".join(f"{b + ' (ms)':>14s}" for b in backends)
        + ("  speedup" if len(backends) == 2 else ""),
    ]
    for name, call in _cases(n1d, side):
        timings = {}
        for backend in backends:
            kern = get_kernels(backend)
            call(kern)  # warm up / JIT caches
            timings[backend] = _time(lambda: call(kern), repeats)
        rows.append({"kernel": name, **{b: timings[b] for b in backends}})
        cells = " ".join(f"{1e3 * timings[b]:14.3f}" for b in backends)
        if len(backends) == 2:
            ratio = timings["python"] / max(timings["compiled"], 1e-12)
            cells += f"  {ratio:6.1f}x"
        lines.append(f"{name:38s} {cells}")
    return rows, lines
