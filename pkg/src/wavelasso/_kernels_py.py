"""Pure-numpy implementations of the numerical kernels.

This module mirrors the compiled extension ``wavelasso._core`` function for
function; `wavelasso.backend` picks one of the two at import time.  All
kernels take and return C-contiguous float64 arrays and never modify their
inputs.
"""

import numpy as np

_SQRT2 = np.sqrt(2.0)


def haar1d_forward(x, levels):
    """Multilevel orthonormal Haar analysis of a 1-D signal.

    Output packing: ``[approx | detail level J | ... | detail level 1]``,
    i.e. the detail block of level ``l`` occupies ``[n >> l, n >> (l-1))``.
    """
    out = np.array(x, dtype=np.float64, copy=True)
    n = out.shape[0]
    for lvl in range(levels):
        active = n >> lvl
        a = out[0:active:2]
        b = out[1:active:2]
        s = (a + b) / _SQRT2
        d = (a - b) / _SQRT2
        out[: active // 2] = s
        out[active // 2 : active] = d
    return out


def haar1d_inverse(c, levels):
    """Inverse of :func:`haar1d_forward`."""
    out = np.array(c, dtype=np.float64, copy=True)
    n = out.shape[0]
    for lvl in range(levels - 1, -1, -1):
        active = n >> lvl
        s = out[: active // 2].copy()
        d = out[active // 2 : active].copy()
        out[0:active:2] = (s + d) / _SQRT2
        out[1:active:2] = (s - d) / _SQRT2
    return out


def haar2d_forward(a, levels):
    """Separable multilevel orthonormal Haar analysis of a 2-D image.

    Per level the active top-left block is transformed along rows, then
    along columns, leaving the four quadrants
    ``[[approx, horizontal], [vertical, diagonal]]`` packed in place.
    """
    out = np.array(a, dtype=np.float64, copy=True)
    rows, cols = out.shape
    for lvl in range(levels):
        h = rows >> lvl
        w = cols >> lvl
        blk = out[:h, :w]
        left = (blk[:, 0:w:2] + blk[:, 1:w:2]) / _SQRT2
        right = (blk[:, 0:w:2] - blk[:, 1:w:2]) / _SQRT2
        blk[:, : w // 2] = left
        blk[:, w // 2 :] = right
        top = (blk[0:h:2, :] + blk[1:h:2, :]) / _SQRT2
        bottom = (blk[0:h:2, :] - blk[1:h:2, :]) / _SQRT2
        blk[: h // 2, :] = top
        blk[h // 2 :, :] = bottom
    return out


def haar2d_inverse(p, levels):
    """Inverse of :func:`haar2d_forward`."""
    out = np.array(p, dtype=np.float64, copy=True)
    rows, cols = out.shape
    for lvl in range(levels - 1, -1, -1):
        h = rows >> lvl
        w = cols >> lvl
        blk = out[:h, :w]
        top = blk[: h // 2, :].copy()
        bottom = blk[h // 2 :, :].copy()
        blk[0:h:2, :] = (top + bottom) / _SQRT2
        blk[1:h:2, :] = (top - bottom) / _SQRT2
        left = blk[:, : w // 2].copy()
        right = blk[:, w // 2 :].copy()
        blk[:, 0:w:2] = (left + right) / _SQRT2
        blk[:, 1:w:2] = (left - right) / _SQRT2
    return out


def soft_threshold(v, t):
    """Componentwise ``sign(v) * max(|v| - t, 0)``."""
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def group_shrink(v, starts, lens, t):
    """Block soft threshold over contiguous disjoint segments of ``v``.

    Each segment ``v[starts[i] : starts[i] + lens[i]]`` is scaled by
    ``max(1 - t / ||segment||_2, 0)``; a zero-norm segment stays zero.
    Segment arrays must tile ``v`` exactly.
    """
    v = np.asarray(v, dtype=np.float64)
    norms = np.sqrt(np.add.reduceat(v * v, starts))
    with np.errstate(divide="ignore", invalid="ignore"):
        factors = np.where(norms > t, 1.0 - t / norms, 0.0)
    return v * np.repeat(factors, lens)


def group_norm_sum(v, starts, lens):
    """Sum of the euclidean norms of contiguous segments of ``v``."""
    v = np.asarray(v, dtype=np.float64)
    return float(np.sqrt(np.add.reduceat(v * v, starts)).sum())


def conv2d_circular(img, taps):
    """2-D circular convolution of ``img`` with a centered odd-sized kernel."""
    img = np.asarray(img, dtype=np.float64)
    taps = np.asarray(taps, dtype=np.float64)
    kr = taps.shape[0] // 2
    kc = taps.shape[1] // 2
    out = np.zeros_like(img)
    for u in range(taps.shape[0]):
        for w in range(taps.shape[1]):
            tap = taps[u, w]
            if tap == 0.0:
                continue
            out += tap * np.roll(img, (u - kr, w - kc), axis=(0, 1))
    return out
