"""Parent-child coefficient groups over wavelet trees, and their replication.

Detail coefficients of a multilevel Haar transform form a binary tree (1-D)
or one quadtree per orientation (2-D): a coefficient at level ``l > 1`` is
the parent of the co-located coefficients at level ``l - 1``.  Groups tie a
parent to its children, either all at once (``pc4``) or pairwise (``pc2`` /
``pc2_1d``).  Because a coefficient may appear in several groups, solvers
work on a *replicated* index space where each (group, member) incidence gets
its own copy; :class:`ReplicationMap` is the bookkeeping between the two
spaces.
"""

from dataclasses import dataclass, field

import numpy as np

from .dwt import ORIENTATIONS, Layout1D, Layout2D
from .errors import SchemeError

PC4 = "pc4"
PC2 = "pc2"
PC2_1D = "pc2_1d"
SCHEMES = (PC4, PC2, PC2_1D)


def build_binary_tree(layout):
    """Parent-child edges of the 1-D detail tree, as a sorted (E, 2) array.

    The detail at level ``l > 1``, position ``k`` is the parent of the
    level ``l - 1`` details at positions ``2k`` and ``2k + 1``.
    """
    if not isinstance(layout, Layout1D):
        raise SchemeError("build_binary_tree needs a 1-D layout")
    if layout.levels < 2:
        raise SchemeError("no parent-child edges: decomposition depth must be >= 2")
    edges = []
    for level in range(layout.levels, 1, -1):
        base_p = layout.n >> level
        base_c = layout.n >> (level - 1)
        for k in range(layout.detail_size(level)):
            parent = base_p + k
            edges.append((parent, base_c + 2 * k))
            edges.append((parent, base_c + 2 * k + 1))
    return np.array(edges, dtype=np.int64)


def build_quadtree(layout):
    """Parent-child edges of the 2-D detail quadtrees, as a sorted (E, 2) array.

    The detail at level ``l > 1``, orientation ``o``, position ``(r, c)`` is
    the parent of the four level ``l - 1`` details of orientation ``o`` at
    positions ``(2r, 2c), (2r, 2c+1), (2r+1, 2c), (2r+1, 2c+1)``.
    """
    if not isinstance(layout, Layout2D):
        raise SchemeError("build_quadtree needs a 2-D layout")
    if layout.levels < 2:
        raise SchemeError("no parent-child edges: decomposition depth must be >= 2")
    edges = []
    for level in range(layout.levels, 1, -1):
        pr, pc = layout.subband_shape(level)
        for orientation in ORIENTATIONS:
            for r in range(pr):
                for c in range(pc):
                    parent = layout.detail_index(level, orientation, r, c)
                    for dr in (0, 1):
                        for dc in (0, 1):
                            child = layout.detail_index(
                                level - 1, orientation, 2 * r + dr, 2 * c + dc
                            )
                            edges.append((parent, child))
    return np.array(edges, dtype=np.int64)


@dataclass
class GroupStructure:
    """A list of index groups over original coefficient indices.

    Groups may overlap (a coefficient is typically both a child and a
    parent).  Ordering is deterministic: sorted by parent index, children
    ascending within a group.
    """

    groups: list
    scheme: str
    layout: Layout1D | Layout2D

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise SchemeError(f"unknown scheme {self.scheme!r}")
        self.groups = [np.asarray(g, dtype=np.int64) for g in self.groups]
        n = self.layout.size
        for g in self.groups:
            if g.size == 0:
                raise SchemeError("empty group")
            if g.min() < 0 or g.max() >= n:
                raise IndexError("group index out of range")

    @property
    def n(self):
        return self.layout.size

    def member_indices(self):
        """Sorted unique indices participating in at least one group."""
        if not self.groups:
            return np.empty(0, dtype=np.int64)
        return np.unique(np.concatenate(self.groups))

    def to_text(self):
        """One group per line, space-separated indices (debug/fixture format)."""
        return "\n".join(" ".join(str(i) for i in g) for g in self.groups) + "\n"

    @classmethod
    def from_text(cls, text, scheme, layout):
        groups = [
            np.array([int(tok) for tok in line.split()], dtype=np.int64)
            for line in text.splitlines()
            if line.strip()
        ]
        return cls(groups, scheme, layout)


def make_groups(edges, scheme, layout):
    """Build the group structure for a tree edge list.

    ``pc4``: one group per parent, [parent, child0..child3] (2-D only).
    ``pc2`` / ``pc2_1d``: one group per edge, [parent, child].
    """
    edges = np.asarray(edges, dtype=np.int64)
    if scheme == PC4:
        if not isinstance(layout, Layout2D):
            raise SchemeError("pc4 grouping requires a 2-D layout")
        groups = []
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges = edges[order]
        parents, starts = np.unique(edges[:, 0], return_index=True)
        bounds = np.append(starts, edges.shape[0])
        for i, parent in enumerate(parents):
            children = edges[bounds[i] : bounds[i + 1], 1]
            if children.size != 4:
                raise SchemeError(
                    f"pc4 expects 4 children per parent, parent {parent} has {children.size}"
                )
            groups.append(np.concatenate(([parent], np.sort(children))))
    elif scheme in (PC2, PC2_1D):
        if scheme == PC2 and not isinstance(layout, Layout2D):
            raise SchemeError("pc2 grouping requires a 2-D layout; use pc2_1d for signals")
        if scheme == PC2_1D and not isinstance(layout, Layout1D):
            raise SchemeError("pc2_1d grouping requires a 1-D layout")
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        groups = [edges[i].copy() for i in order]
    else:
        raise SchemeError(f"unknown scheme {scheme!r}")
    return GroupStructure(groups, scheme, layout)


def scheme_for(layout, name):
    """Normalize a CLI grouping name ("pc4"/"pc2") for the layout dimension."""
    name = name.lower()
    if isinstance(layout, Layout1D):
        if name in (PC2, PC2_1D):
            return PC2_1D
        raise SchemeError(f"scheme {name!r} not available for 1-D layouts")
    if name in (PC4, PC2):
        return name
    raise SchemeError(f"unknown scheme {name!r}")


@dataclass
class ReplicationMap:
    """Bookkeeping between original coefficients and their per-group replicas.

    Replica indices are laid out group by group (members in group order),
    followed by one singleton replica for every coefficient that belongs to
    no group, so the replicated groups tile ``[0, total_replicas)``.
    """

    replica_of: np.ndarray
    group_starts: np.ndarray
    group_lens: np.ndarray
    n: int
    _orig_ptr: np.ndarray = field(init=False, repr=False)
    _orig_replicas: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.replica_of = np.asarray(self.replica_of, dtype=np.int64)
        self.group_starts = np.asarray(self.group_starts, dtype=np.int64)
        self.group_lens = np.asarray(self.group_lens, dtype=np.int64)
        if self.replica_of.min(initial=0) < 0 or self.replica_of.max(initial=-1) >= self.n:
            raise IndexError("replica map index out of range")
        order = np.argsort(self.replica_of, kind="stable")
        counts = np.bincount(self.replica_of, minlength=self.n)
        self._orig_replicas = order
        self._orig_ptr = np.concatenate(([0], np.cumsum(counts)))

    @property
    def total_replicas(self):
        return int(self.replica_of.shape[0])

    @property
    def counts(self):
        """|J_i| for every original index i."""
        return np.diff(self._orig_ptr)

    def J(self, i):
        """Replica indices of original coefficient ``i``."""
        return self._orig_replicas[self._orig_ptr[i] : self._orig_ptr[i + 1]]

    def replicated_groups(self):
        """The disjoint groups over replica indices (including singletons)."""
        return [
            np.arange(s, s + l, dtype=np.int64)
            for s, l in zip(self.group_starts, self.group_lens)
        ]

    def expand(self, v):
        """Copy each original coordinate to all of its replicas."""
        v = np.asarray(v, dtype=np.float64)
        return v[self.replica_of]

    def collapse(self, u):
        """Sum replica values back onto their original coordinate."""
        u = np.asarray(u, dtype=np.float64)
        return np.bincount(self.replica_of, weights=u, minlength=self.n)


def make_replication_map(gs, n=None):
    """Replicate a group structure: one replica per (group, member) incidence.

    Coefficients in no group (e.g. scaling coefficients) get a singleton
    replica so the replicated groups cover every coordinate and the group
    penalty stays a norm on the full vector.
    """
    if n is None:
        n = gs.n
    elif n != gs.n:
        raise IndexError(f"n={n} does not match layout size {gs.n}")
    origin_blocks = list(gs.groups)
    grouped = np.zeros(n, dtype=bool)
    for g in gs.groups:
        grouped[g] = True
    singletons = np.flatnonzero(~grouped)
    origin_blocks.extend(np.array([i], dtype=np.int64) for i in singletons)

    lens = np.array([b.size for b in origin_blocks], dtype=np.int64)
    starts = np.concatenate(([0], np.cumsum(lens)[:-1])) if lens.size else np.empty(0, np.int64)
    replica_of = (
        np.concatenate(origin_blocks) if origin_blocks else np.empty(0, dtype=np.int64)
    )
    return ReplicationMap(replica_of, starts, lens, n)
