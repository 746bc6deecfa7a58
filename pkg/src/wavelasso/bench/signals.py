"""Seeded generators for synthetic test signals and images."""

import numpy as np

from ..errors import DimensionError


def gen_piecewise_constant(n, max_jumps, seed):
    """Random piecewise-constant signal of length ``n``.

    The jump count is uniform on {0..max_jumps}, jump locations are drawn
    uniformly without replacement from the ``n - 1`` interior boundaries,
    and segment values are iid standard normal.
    """
    if n < 2 or n & (n - 1):
        raise DimensionError(f"signal length must be a power of two, got {n}")
    if max_jumps >= n:
        raise ValueError(f"max_jumps={max_jumps} must be < n={n}")
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, max_jumps + 1))
    locs = np.sort(rng.choice(np.arange(1, n), size=k, replace=False))
    values = rng.standard_normal(k + 1)
    x = np.empty(n, dtype=np.float64)
    bounds = np.concatenate(([0], locs, [n]))
    for seg in range(k + 1):
        x[bounds[seg] : bounds[seg + 1]] = values[seg]
    return x


def gen_toy_image(shape, seed, n_rects=None):
    """Random axis-aligned rectangles on a constant zero background.

    ``n_rects`` defaults to a uniform draw from {2..5}; rectangles are
    painted in order with iid standard-normal intensities, so later ones
    occlude earlier ones.
    """
    rows, cols = shape
    if rows != cols:
        raise DimensionError(f"toy images are square, got {shape}")
    if rows < 4 or rows & (rows - 1):
        raise DimensionError(f"side must be a power of two >= 4, got {rows}")
    rng = np.random.default_rng(seed)
    if n_rects is None:
        n_rects = int(rng.integers(2, 6))
    img = np.zeros(shape, dtype=np.float64)
    for _ in range(n_rects):
        r0, r1 = np.sort(rng.choice(rows + 1, size=2, replace=False))
        c0, c1 = np.sort(rng.choice(cols + 1, size=2, replace=False))
        img[r0:r1, c0:c1] = rng.standard_normal()
    return img
