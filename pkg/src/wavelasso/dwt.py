"""Orthonormal multilevel Haar wavelet transform for 1-D signals and 2-D images.

Coefficient vectors are flat float64 arrays with a fixed block layout
described by a :class:`Layout1D` or :class:`Layout2D`:

* 1-D, ``n`` samples, ``J`` levels::

      [ approx (n >> J) | detail J | detail J-1 | ... | detail 1 ]

  so the detail block of level ``l`` (1 = finest) occupies
  ``[n >> l, n >> (l-1))``.

* 2-D, ``rows x cols``, ``J`` levels::

      [ approx | level J: h, v, d | level J-1: h, v, d | ... | level 1 ]

  with each subband stored row-major.  Orientations are labelled
  ``"horizontal"`` (row high-pass), ``"vertical"`` (column high-pass) and
  ``"diagonal"``.

The transform is an isometry: ``forward`` is the adjoint (and inverse) of
``inverse``/``synthesize``.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .backend import kernels
from .errors import DimensionError, LayoutError

ORIENTATIONS = ("horizontal", "vertical", "diagonal")


def _check_pow2(value, what):
    if value < 2 or value & (value - 1):
        raise DimensionError(f"{what} must be a power of two >= 2, got {value}")


@dataclass(frozen=True)
class Layout1D:
    """Block layout of a 1-D multilevel Haar coefficient vector."""

    n: int
    levels: int

    def __post_init__(self):
        _check_pow2(self.n, "signal length")
        max_levels = self.n.bit_length() - 1
        if not 1 <= self.levels <= max_levels:
            raise DimensionError(
                f"levels must be in [1, {max_levels}] for length {self.n}, got {self.levels}"
            )

    @property
    def size(self):
        return self.n

    @property
    def ndim(self):
        return 1

    @property
    def shape(self):
        return (self.n,)

    @property
    def approx_size(self):
        return self.n >> self.levels

    @property
    def approx_slice(self):
        return slice(0, self.approx_size)

    def detail_size(self, level):
        self._check_level(level)
        return self.n >> level

    def detail_slice(self, level):
        """Flat slice of the detail block at ``level`` (1 = finest)."""
        self._check_level(level)
        return slice(self.n >> level, self.n >> (level - 1))

    def detail_index(self, level, pos):
        self._check_level(level)
        if not 0 <= pos < (self.n >> level):
            raise IndexError(f"position {pos} out of range for level {level}")
        return (self.n >> level) + pos

    def locate(self, flat):
        """Map a flat index to ("approx", pos) or ("detail", level, pos)."""
        if not 0 <= flat < self.n:
            raise IndexError(f"flat index {flat} out of range")
        if flat < self.approx_size:
            return ("approx", flat)
        level = self.n.bit_length() - int(flat).bit_length()
        return ("detail", level, flat - (self.n >> level))

    def _check_level(self, level):
        if not 1 <= level <= self.levels:
            raise IndexError(f"level {level} outside [1, {self.levels}]")


@dataclass(frozen=True)
class Layout2D:
    """Block layout of a 2-D multilevel Haar coefficient vector."""

    rows: int
    cols: int
    levels: int

    def __post_init__(self):
        _check_pow2(self.rows, "row count")
        _check_pow2(self.cols, "column count")
        max_levels = min(self.rows, self.cols).bit_length() - 1
        if not 1 <= self.levels <= max_levels:
            raise DimensionError(
                f"levels must be in [1, {max_levels}] for shape "
                f"({self.rows}, {self.cols}), got {self.levels}"
            )

    @property
    def size(self):
        return self.rows * self.cols

    @property
    def ndim(self):
        return 2

    @property
    def shape(self):
        return (self.rows, self.cols)

    @property
    def approx_size(self):
        return (self.rows >> self.levels) * (self.cols >> self.levels)

    @property
    def approx_slice(self):
        return slice(0, self.approx_size)

    @property
    def detail_count(self):
        return self.size - self.approx_size

    def subband_shape(self, level):
        self._check_level(level)
        return (self.rows >> level, self.cols >> level)

    def detail_slice(self, level, orientation):
        """Flat slice of one orientation subband at ``level`` (1 = finest)."""
        offset, count = self._band(level, orientation)
        return slice(offset, offset + count)

    def detail_index(self, level, orientation, r, c):
        offset, _ = self._band(level, orientation)
        br, bc = self.subband_shape(level)
        if not (0 <= r < br and 0 <= c < bc):
            raise IndexError(f"position ({r}, {c}) out of range at level {level}")
        return offset + r * bc + c

    def locate(self, flat):
        """Map a flat index to ("approx", r, c) or ("detail", level, orientation, r, c)."""
        if not 0 <= flat < self.size:
            raise IndexError(f"flat index {flat} out of range")
        if flat < self.approx_size:
            ac = self.cols >> self.levels
            return ("approx", flat // ac, flat % ac)
        offset = self.approx_size
        for level in range(self.levels, 0, -1):
            br, bc = self.subband_shape(level)
            for orientation in ORIENTATIONS:
                count = br * bc
                if flat < offset + count:
                    rel = flat - offset
                    return ("detail", level, orientation, rel // bc, rel % bc)
                offset += count
        raise AssertionError("unreachable")

    def _band(self, level, orientation):
        self._check_level(level)
        try:
            oi = ORIENTATIONS.index(orientation)
        except ValueError:
            raise LayoutError(f"unknown orientation {orientation!r}") from None
        br, bc = self.subband_shape(level)
        count = br * bc
        # blocks for levels J..level+1 precede; each level holds 3 subbands
        offset = self.approx_size
        for lv in range(self.levels, level, -1):
            sr, sc = self.subband_shape(lv)
            offset += 3 * sr * sc
        return offset + oi * count, count

    def _check_level(self, level):
        if not 1 <= level <= self.levels:
            raise IndexError(f"level {level} outside [1, {self.levels}]")


@lru_cache(maxsize=32)
def _mallat_permutation(rows, cols, levels):
    """Indices such that flat_vector = packed_image.ravel()[perm]."""
    grid = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    blocks = [grid[: rows >> levels, : cols >> levels].ravel()]
    for level in range(levels, 0, -1):
        br = rows >> level
        bc = cols >> level
        blocks.append(grid[:br, bc : 2 * bc].ravel())  # horizontal
        blocks.append(grid[br : 2 * br, :bc].ravel())  # vertical
        blocks.append(grid[br : 2 * br, bc : 2 * bc].ravel())  # diagonal
    return np.concatenate(blocks)


@dataclass
class CoeffVector:
    """Flat wavelet coefficient vector plus its block layout."""

    data: np.ndarray
    layout: Layout1D | Layout2D

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        if self.data.ndim != 1 or self.data.shape[0] != self.layout.size:
            raise LayoutError(
                f"data length {self.data.shape} does not match layout size {self.layout.size}"
            )

    def copy(self):
        return CoeffVector(self.data.copy(), self.layout)


def _default_levels(shape):
    return min(shape).bit_length() - 1


def analyze(x, layout):
    """Forward transform on a plain array, returning the flat coefficient array."""
    x = np.asarray(x, dtype=np.float64)
    if isinstance(layout, Layout1D):
        if x.shape != (layout.n,):
            raise DimensionError(f"expected shape ({layout.n},), got {x.shape}")
        return kernels.haar1d_forward(x, layout.levels)
    if x.shape != (layout.rows, layout.cols):
        raise DimensionError(f"expected shape {(layout.rows, layout.cols)}, got {x.shape}")
    packed = kernels.haar2d_forward(x, layout.levels)
    perm = _mallat_permutation(layout.rows, layout.cols, layout.levels)
    return packed.ravel()[perm]


def synthesize(coeffs, layout):
    """Inverse transform on a plain flat array, returning the signal/image."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.shape != (layout.size,):
        raise LayoutError(f"expected {layout.size} coefficients, got shape {coeffs.shape}")
    if isinstance(layout, Layout1D):
        return kernels.haar1d_inverse(coeffs, layout.levels)
    perm = _mallat_permutation(layout.rows, layout.cols, layout.levels)
    packed = np.empty(layout.size, dtype=np.float64)
    packed[perm] = coeffs
    return kernels.haar2d_inverse(packed.reshape(layout.rows, layout.cols), layout.levels)


def forward(x, levels=None):
    """Orthonormal multilevel Haar analysis of a 1-D signal.

    Parameters
    ----------
    x : array, shape (n,)
        Real signal; n must be a power of two divisible by ``2**levels``.
    levels : int, optional
        Decomposition depth; defaults to the full depth ``log2(n)``.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError(f"forward expects a 1-D signal, got ndim={x.ndim}")
    if levels is None:
        levels = _default_levels(x.shape)
    layout = Layout1D(x.shape[0], levels)
    return CoeffVector(analyze(x, layout), layout)


def inverse(theta):
    """Reconstruct the 1-D signal from its coefficient vector."""
    if not isinstance(theta.layout, Layout1D):
        raise LayoutError("inverse expects a 1-D layout; use inverse2d for images")
    return synthesize(theta.data, theta.layout)


def forward2d(x, levels=None):
    """Separable orthonormal multilevel Haar analysis of a 2-D image."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionError(f"forward2d expects a 2-D image, got ndim={x.ndim}")
    if levels is None:
        levels = _default_levels(x.shape)
    layout = Layout2D(x.shape[0], x.shape[1], levels)
    return CoeffVector(analyze(x, layout), layout)


def inverse2d(theta):
    """Reconstruct the 2-D image from its coefficient vector."""
    if not isinstance(theta.layout, Layout2D):
        raise LayoutError("inverse2d expects a 2-D layout")
    return synthesize(theta.data, theta.layout)
