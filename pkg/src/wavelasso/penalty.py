"""Sparsity penalties, their proximal operators, and penalty-ratio reporting.

Three penalties appear throughout the package:

* ``l1``: coordinatewise absolute sum (soft-threshold prox);
* group l2 over *disjoint* groups: sum of group euclidean norms (block
  shrinkage prox) -- solvers always see this disjoint form, on the
  replicated index space;
* the replication penalty induced on original coordinates: the minimum of
  the disjoint group penalty over all ways of splitting each coefficient
  across its replicas (:func:`latent_group_norm`).

Overlapping groups are allowed only in :func:`eval_group`, which evaluates
the sum of group norms with every coefficient at full value in each group
it belongs to.
"""

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .backend import kernels
from .dwt import CoeffVector
from .errors import DimensionError, GroupOverlapError

__all__ = [
    "PenaltySpec",
    "PenaltyRatios",
    "eval_l1",
    "eval_group",
    "prox_l1",
    "prox_group",
    "latent_group_norm",
    "scramble_details",
    "penalty_ratio",
]


def eval_l1(v):
    """Sum of absolute values (exactly rounded, so permutation invariant)."""
    return math.fsum(np.abs(np.asarray(v, dtype=np.float64)))


def eval_group(v, groups):
    """Sum of euclidean group norms; groups may overlap."""
    v = np.asarray(v, dtype=np.float64)
    n = v.shape[0]
    norms = []
    for g in groups:
        g = np.asarray(g, dtype=np.int64)
        if g.size and (g.min() < 0 or g.max() >= n):
            raise IndexError("group index out of range")
        norms.append(float(np.linalg.norm(v[g])))
    return math.fsum(norms)


def prox_l1(v, t):
    """Soft threshold: exact minimizer of 0.5*||u - v||^2 + t*||u||_1."""
    if t < 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    return kernels.soft_threshold(np.ascontiguousarray(v, dtype=np.float64), float(t))


def _pack_groups(groups):
    """Concatenate disjoint groups; returns (perm, starts, lens)."""
    arrs = [np.asarray(g, dtype=np.int64) for g in groups]
    perm = np.concatenate(arrs) if arrs else np.empty(0, dtype=np.int64)
    if np.unique(perm).size != perm.size:
        raise GroupOverlapError("groups must be disjoint for the block prox")
    lens = np.array([a.size for a in arrs], dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(lens)[:-1])) if lens.size else lens
    return perm, starts, lens


def prox_group(v, t, groups):
    """Block soft threshold over disjoint groups.

    Each group subvector is scaled by ``max(1 - t/||v_g||, 0)``; coordinates
    outside every group are returned unchanged (no penalty on them).
    Overlapping groups raise :class:`GroupOverlapError`: the closed form is
    only valid on the replicated, disjoint structure.
    """
    if t < 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    v = np.ascontiguousarray(v, dtype=np.float64)
    perm, starts, lens = _pack_groups(groups)
    if perm.size and perm.max() >= v.shape[0]:
        raise IndexError("group index out of range")
    if perm.size == v.shape[0] and np.array_equal(perm, np.arange(v.shape[0])):
        return kernels.group_shrink(v, starts, lens, float(t))
    out = v.copy()
    out[perm] = kernels.group_shrink(np.ascontiguousarray(v[perm]), starts, lens, float(t))
    return out


@dataclass
class PenaltySpec:
    """A weighted penalty: ``weight * l1`` or ``weight * sum of group norms``.

    For ``kind="group_l2"`` the groups must be disjoint; the prox and value
    run on a precomputed contiguous packing.
    """

    kind: str
    weight: float
    groups: list | None = None
    _perm: np.ndarray = field(init=False, repr=False)
    _starts: np.ndarray = field(init=False, repr=False)
    _lens: np.ndarray = field(init=False, repr=False)
    _contiguous: bool = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in ("l1", "group_l2"):
            raise ValueError(f"unknown penalty kind {self.kind!r}")
        if self.weight < 0:
            raise ValueError(f"penalty weight must be nonnegative, got {self.weight}")
        if self.kind == "group_l2":
            if self.groups is None:
                raise ValueError("group_l2 penalty needs groups")
            self._perm, self._starts, self._lens = _pack_groups(self.groups)
            self._contiguous = bool(
                np.array_equal(self._perm, np.arange(self._perm.size))
            )
        else:
            self._perm = self._starts = self._lens = np.empty(0, dtype=np.int64)
            self._contiguous = True

    def raw_value(self, v):
        """Penalty value without the weight factor (fast path, not fsum)."""
        v = np.asarray(v, dtype=np.float64)
        if self.kind == "l1":
            return float(np.abs(v).sum())
        if self._contiguous and self._perm.size == v.shape[0]:
            return kernels.group_norm_sum(v, self._starts, self._lens)
        return kernels.group_norm_sum(
            np.ascontiguousarray(v[self._perm]), self._starts, self._lens
        )

    def value(self, v):
        return self.weight * self.raw_value(v)

    def prox(self, v, t):
        """Minimizer of 0.5*||u - v||^2 + t*weight*penalty(u)."""
        thresh = t * self.weight
        if self.kind == "l1":
            return prox_l1(v, thresh)
        v = np.ascontiguousarray(v, dtype=np.float64)
        if self._contiguous and self._perm.size == v.shape[0]:
            return kernels.group_shrink(v, self._starts, self._lens, float(thresh))
        out = v.copy()
        out[self._perm] = kernels.group_shrink(
            np.ascontiguousarray(v[self._perm]), self._starts, self._lens, float(thresh)
        )
        return out


def latent_group_norm(theta, repmap, tol=1e-10, max_iters=4000):
    """Replication penalty of ``theta``: min over splittings of the group norm sum.

    Minimizes ``sum_g ||xtilde_g||_2`` over all replica vectors satisfying
    ``collapse(xtilde) = theta`` (each coefficient's replicas sum to its
    value), by ADMM alternating between the affine projection and block
    shrinkage.  The reported value is always evaluated at a feasible point,
    so it is a valid upper bound that converges to the minimum.
    """
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape[0] != repmap.n:
        raise DimensionError(
            f"theta length {theta.shape[0]} != replication map size {repmap.n}"
        )
    scale = float(np.linalg.norm(theta))
    if scale == 0.0:
        return 0.0
    target = theta / scale
    counts = repmap.counts.astype(np.float64)
    starts = repmap.group_starts
    lens = repmap.group_lens

    def project(v):
        return v + repmap.expand((target - repmap.collapse(v)) / counts)

    x = project(repmap.expand(target) / repmap.expand(counts))
    z = x.copy()
    u = np.zeros_like(x)
    sqrt_r = np.sqrt(x.shape[0])
    for _ in range(max_iters):
        x = project(z - u)
        z_prev = z
        z = kernels.group_shrink(np.ascontiguousarray(x + u), starts, lens, 1.0)
        u = u + x - z
        primal = np.linalg.norm(x - z)
        dual = np.linalg.norm(z - z_prev)
        if primal <= tol * sqrt_r and dual <= tol * sqrt_r:
            break
    return scale * kernels.group_norm_sum(np.ascontiguousarray(x), starts, lens)


def scramble_details(theta, seed):
    """Uniform random permutation of the detail coefficients (scaling fixed)."""
    rng = np.random.default_rng(seed)
    data = theta.data.copy()
    detail = np.arange(theta.layout.approx_size, theta.layout.size)
    data[detail] = theta.data[rng.permutation(detail)]
    return CoeffVector(data, theta.layout)


class PenaltyRatios(NamedTuple):
    l1: float
    group: float
    replication: float


def penalty_ratio(theta_structured, theta_scrambled, gs, repmap):
    """Penalty ratios structured/scrambled for l1, overlapping-group, replication.

    The l1 ratio is exactly 1 for any permutation; the group ratios drop
    below 1 when the structured vector concentrates energy inside
    parent-child groups.  The group ratio uses the overlapping groups at
    full coefficient value; the replication ratio uses
    :func:`latent_group_norm`.
    """
    a = np.asarray(theta_structured, dtype=np.float64)
    b = np.asarray(theta_scrambled, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    if not np.array_equal(np.sort(a), np.sort(b)):
        raise ValueError("scrambled vector is not a permutation of the structured one")
    ratio_l1 = eval_l1(a) / eval_l1(b)
    ratio_group = eval_group(a, gs.groups) / eval_group(b, gs.groups)
    ratio_rep = latent_group_norm(a, repmap) / latent_group_norm(b, repmap)
    return PenaltyRatios(ratio_l1, ratio_group, ratio_rep)
