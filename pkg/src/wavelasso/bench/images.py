"""Helpers for obtaining and resizing benchmark images."""

import numpy as np

from ..errors import DimensionError


def block_mean_resize(img, size):
    """Downsample a square image to ``size x size`` by block averaging."""
    img = np.asarray(img, dtype=np.float64)
    rows, cols = img.shape
    if rows % size or cols % size:
        raise DimensionError(f"shape {img.shape} not divisible by target size {size}")
    br, bc = rows // size, cols // size
    return img.reshape(size, br, size, bc).mean(axis=(1, 3))


def camera_image(size=128):
    """The scikit-image camera test photo, block-averaged to ``size`` and
    scaled to [0, 1].

    Raises RuntimeError when scikit-image is not installed; any grayscale
    PGM can be supplied to the harness instead.
    """
    try:
        from skimage import data
    except ImportError as exc:
        raise RuntimeError(
            "scikit-image is required to materialize the bundled camera photo; "
            "alternatively pass any 8-bit grayscale PGM via --config image=..."
        ) from exc
    img = data.camera().astype(np.float64) / 255.0
    return block_mean_resize(img, size)
