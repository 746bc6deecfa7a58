"""Matrix-free linear operators with verified adjoints.

Operators map flat float64 vectors to flat float64 vectors; images are
vectorized row-major.  Every constructor here produces an operator whose
``adjoint`` is the exact transpose of ``apply`` (circular boundary handling
makes the convolution adjoint exact), which :func:`adjoint_mismatch` can
certify numerically.
"""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .backend import kernels
from .dwt import analyze, synthesize
from .errors import CapacityError, DimensionError, KernelSizeError

DEFAULT_MEMORY_BUDGET = 1 << 30  # bytes of dense-matrix storage


@dataclass
class LinearOperator:
    """Forward/adjoint callable pair with explicit dimensions."""

    apply: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]
    domain_dim: int
    range_dim: int

    def __call__(self, x):
        return self.apply(x)


def identity(n):
    return LinearOperator(lambda x: np.asarray(x, dtype=np.float64).copy(),
                          lambda u: np.asarray(u, dtype=np.float64).copy(), n, n)


def from_matrix(mat):
    mat = np.asarray(mat, dtype=np.float64)
    m, n = mat.shape
    return LinearOperator(lambda x: mat @ x, lambda u: mat.T @ u, n, m)


@dataclass
class GaussianMatrix:
    """Dense iid standard-normal matrix, reproducible from its seed."""

    entries: np.ndarray
    seed: int

    @classmethod
    def draw(cls, m, n, seed):
        rng = np.random.default_rng(seed)
        return cls(rng.standard_normal((m, n)), seed)


def gaussian_sensing(m, n, seed, memory_budget=DEFAULT_MEMORY_BUDGET):
    """Dense m x n sensing operator with iid N(0, 1) entries.

    Entries are unit variance (no 1/m normalization); regularization grids
    absorb the scale.  Raises :class:`CapacityError` when the dense storage
    would exceed ``memory_budget`` bytes.
    """
    if m < 1 or n < 1:
        raise DimensionError(f"matrix dimensions must be positive, got {(m, n)}")
    if 8 * m * n > memory_budget:
        raise CapacityError(
            f"{m} x {n} dense matrix needs {8 * m * n} bytes, budget is {memory_budget}"
        )
    return from_matrix(GaussianMatrix.draw(m, n, seed).entries)


@dataclass
class BlurKernel:
    """Normalized, symmetric, truncated 2-D Gaussian point-spread function."""

    taps: np.ndarray
    variance: float
    radius: int

    @classmethod
    def gaussian(cls, variance, radius=None):
        if variance <= 0:
            raise ValueError(f"blur variance must be positive, got {variance}")
        if radius is None:
            radius = 3 * int(np.ceil(np.sqrt(variance)))
        offsets = np.arange(-radius, radius + 1, dtype=np.float64)
        profile = np.exp(-(offsets**2) / (2.0 * variance))
        taps = np.outer(profile, profile)
        taps /= taps.sum()
        return cls(taps, float(variance), int(radius))


def gaussian_blur(shape, variance, radius=None):
    """Circular 2-D convolution with a normalized Gaussian kernel.

    The kernel is symmetric and the boundary circular, so the operator is
    self-adjoint.  ``radius`` defaults to three standard deviations
    (taps renormalized after truncation).
    """
    rows, cols = shape
    kernel = BlurKernel.gaussian(variance, radius)
    if kernel.radius >= min(rows, cols) / 2:
        raise KernelSizeError(
            f"kernel radius {kernel.radius} too large for image shape {shape}"
        )
    taps = kernel.taps
    n = rows * cols

    def apply(x):
        return kernels.conv2d_circular(
            np.asarray(x, dtype=np.float64).reshape(rows, cols), taps
        ).ravel()

    # symmetric taps: convolving with the flipped kernel is the same map
    return LinearOperator(apply, apply, n, n)


def compose_with_synthesis(L, layout):
    """The operator ``theta -> L(synthesize(theta))`` with exact adjoint.

    The transform is orthonormal, so the adjoint is ``u -> analyze(L^T u)``.
    """
    if L.domain_dim != layout.size:
        raise DimensionError(
            f"operator domain {L.domain_dim} != layout size {layout.size}"
        )

    if layout.ndim == 1:
        def apply(theta):
            return L.apply(synthesize(theta, layout))

        def adjoint(u):
            return analyze(L.adjoint(u), layout)
    else:
        shape = layout.shape

        def apply(theta):
            return L.apply(synthesize(theta, layout).ravel())

        def adjoint(u):
            return analyze(np.asarray(L.adjoint(u)).reshape(shape), layout)

    return LinearOperator(apply, adjoint, layout.size, L.range_dim)


def replicate_columns(A, repmap):
    """Column-replicated operator over the replica index space.

    Applying sums replica values onto their original coordinate first
    (duplicated columns contribute additively); the adjoint copies each
    coordinate of ``A^T u`` to all of its replicas.
    """
    if repmap.n != A.domain_dim:
        raise IndexError(
            f"replication map covers {repmap.n} coordinates, operator domain is {A.domain_dim}"
        )
    return LinearOperator(
        lambda v: A.apply(repmap.collapse(v)),
        lambda u: repmap.expand(A.adjoint(u)),
        repmap.total_replicas,
        A.range_dim,
    )


def adjoint_mismatch(op, n_pairs=20, seed=0):
    """Max relative defect of <Ax, u> == <x, A^T u> over random pairs."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_pairs):
        x = rng.standard_normal(op.domain_dim)
        u = rng.standard_normal(op.range_dim)
        lhs = float(np.dot(op.apply(x), u))
        rhs = float(np.dot(x, op.adjoint(u)))
        scale = max(np.linalg.norm(x) * np.linalg.norm(u), 1e-300)
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def spectral_norm_estimate(op, iters=20, seed=0):
    """Power-iteration estimate of the operator 2-norm."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(op.domain_dim)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(iters):
        w = op.adjoint(op.apply(v))
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        sigma = np.sqrt(nw)
        v = w / nw
    return float(sigma)
