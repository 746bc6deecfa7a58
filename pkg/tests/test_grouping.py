import numpy as np
import pytest

from wavelasso import dwt, grouping
from wavelasso.errors import SchemeError


def subband_parent_count(n, levels):
    # oracle: parents are the details at levels 2..J; count subband sizes
    return 3 * sum((n >> lv) ** 2 for lv in range(2, levels + 1))


def test_quadtree_4x4():
    layout = dwt.Layout2D(4, 4, 2)
    edges = grouping.build_quadtree(layout)
    gs4 = grouping.make_groups(edges, "pc4", layout)
    gs2 = grouping.make_groups(edges, "pc2", layout)
    assert len(gs4.groups) == 3  # one parent per orientation
    assert len(gs2.groups) == 12
    for g in gs4.groups:
        assert g.size == 5
    for g in gs2.groups:
        assert g.size == 2


def test_quadtree_64():
    layout = dwt.Layout2D(64, 64, 6)
    edges = grouping.build_quadtree(layout)
    gs = grouping.make_groups(edges, "pc4", layout)
    expected = subband_parent_count(64, 6)
    assert expected == 1023  # frozen from the subband-size oracle
    assert len(gs.groups) == expected
    assert edges.shape[0] == 4 * expected


def test_quadtree_parent_child_positions():
    layout = dwt.Layout2D(16, 16, 4)
    edges = grouping.build_quadtree(layout)
    children = {}
    for p, c in edges:
        children.setdefault(int(p), []).append(int(c))
    for p, kids in children.items():
        kind, level, orientation, r, c = layout.locate(p)
        assert kind == "detail" and level >= 2
        expected = {
            layout.detail_index(level - 1, orientation, 2 * r + dr, 2 * c + dc)
            for dr in (0, 1)
            for dc in (0, 1)
        }
        assert set(kids) == expected


def test_every_fine_detail_has_one_parent():
    layout = dwt.Layout2D(16, 16, 4)
    edges = grouping.build_quadtree(layout)
    child_parent = {}
    for p, c in edges:
        assert c not in child_parent  # no node has two parents
        child_parent[int(c)] = int(p)
    for level in range(1, 4):  # all but the coarsest level
        for orientation in dwt.ORIENTATIONS:
            sl = layout.detail_slice(level, orientation)
            for flat in range(sl.start, sl.stop):
                assert flat in child_parent
    # coarsest details are parents only
    for orientation in dwt.ORIENTATIONS:
        sl = layout.detail_slice(4, orientation)
        for flat in range(sl.start, sl.stop):
            assert flat not in child_parent


def test_binary_tree_counts():
    layout = dwt.Layout1D(1024, 10)
    edges = grouping.build_binary_tree(layout)
    detail_nodes = 1024 - (1024 >> 10)
    assert detail_nodes == 1023
    assert edges.shape[0] == 1022  # frozen from node/edge enumeration
    gs = grouping.make_groups(edges, "pc2_1d", layout)
    assert len(gs.groups) == 1022


def test_binary_tree_small():
    layout = dwt.Layout1D(4, 2)
    edges = grouping.build_binary_tree(layout)
    assert edges.shape[0] == 2
    np.testing.assert_array_equal(edges, [[1, 2], [1, 3]])


def test_binary_tree_no_double_parent():
    layout = dwt.Layout1D(64, 6)
    edges = grouping.build_binary_tree(layout)
    children = edges[:, 1]
    assert np.unique(children).size == children.size


def test_tree_depth_errors():
    with pytest.raises(SchemeError):
        grouping.build_binary_tree(dwt.Layout1D(8, 1))
    with pytest.raises(SchemeError):
        grouping.build_quadtree(dwt.Layout2D(8, 8, 1))
    with pytest.raises(SchemeError):
        grouping.build_quadtree(dwt.Layout1D(8, 3))


def test_scheme_compatibility_errors():
    layout1 = dwt.Layout1D(16, 4)
    edges1 = grouping.build_binary_tree(layout1)
    with pytest.raises(SchemeError):
        grouping.make_groups(edges1, "pc4", layout1)
    with pytest.raises(SchemeError):
        grouping.make_groups(edges1, "pc2", layout1)
    layout2 = dwt.Layout2D(8, 8, 3)
    edges2 = grouping.build_quadtree(layout2)
    with pytest.raises(SchemeError):
        grouping.make_groups(edges2, "pc2_1d", layout2)


def test_group_ordering_deterministic():
    layout = dwt.Layout2D(16, 16, 4)
    edges = grouping.build_quadtree(layout)
    a = grouping.make_groups(edges, "pc4", layout)
    b = grouping.make_groups(edges[::-1], "pc4", layout)
    assert len(a.groups) == len(b.groups)
    for ga, gb in zip(a.groups, b.groups):
        np.testing.assert_array_equal(ga, gb)
    parents = [g[0] for g in a.groups]
    assert parents == sorted(parents)


def test_replication_counts_1d():
    layout = dwt.Layout1D(1024, 10)
    gs = grouping.make_groups(grouping.build_binary_tree(layout), "pc2_1d", layout)
    rm = grouping.make_replication_map(gs)
    # an interior detail: one parent edge above, two child edges below
    kind, level, pos = layout.locate(layout.detail_index(5, 3))
    assert kind == "detail" and 1 < level < 10
    assert len(rm.J(layout.detail_index(5, 3))) == 3
    # scaling coefficient joins no group -> singleton replica
    assert len(rm.J(0)) == 1
    total = sum(g.size for g in gs.groups) + 1  # one ungrouped coefficient
    assert rm.total_replicas == total == 2045


def test_replication_groups_partition():
    layout = dwt.Layout2D(16, 16, 4)
    gs = grouping.make_groups(grouping.build_quadtree(layout), "pc4", layout)
    rm = grouping.make_replication_map(gs)
    seen = np.concatenate(rm.replicated_groups())
    assert seen.size == rm.total_replicas
    np.testing.assert_array_equal(np.sort(seen), np.arange(rm.total_replicas))


def test_replication_count_matches_incidence():
    layout = dwt.Layout2D(8, 8, 3)
    gs = grouping.make_groups(grouping.build_quadtree(layout), "pc4", layout)
    rm = grouping.make_replication_map(gs)
    incidence = np.zeros(64, dtype=int)
    for g in gs.groups:
        incidence[g] += 1
    expected = np.maximum(incidence, 1)  # ungrouped get a singleton
    np.testing.assert_array_equal(rm.counts, expected)


def test_collapse_expand_consistency(rng):
    layout = dwt.Layout1D(64, 6)
    gs = grouping.make_groups(grouping.build_binary_tree(layout), "pc2_1d", layout)
    rm = grouping.make_replication_map(gs)
    v = rng.standard_normal(64)
    np.testing.assert_allclose(rm.collapse(rm.expand(v)), rm.counts * v, atol=1e-12)


def test_text_serialization_roundtrip():
    layout = dwt.Layout1D(16, 4)
    gs = grouping.make_groups(grouping.build_binary_tree(layout), "pc2_1d", layout)
    text = gs.to_text()
    back = grouping.GroupStructure.from_text(text, gs.scheme, layout)
    assert len(back.groups) == len(gs.groups)
    for ga, gb in zip(gs.groups, back.groups):
        np.testing.assert_array_equal(ga, gb)


def test_scheme_for_normalization():
    lay1 = dwt.Layout1D(16, 4)
    lay2 = dwt.Layout2D(8, 8, 3)
    assert grouping.scheme_for(lay1, "pc2") == "pc2_1d"
    assert grouping.scheme_for(lay2, "pc2") == "pc2"
    assert grouping.scheme_for(lay2, "pc4") == "pc4"
    with pytest.raises(SchemeError):
        grouping.scheme_for(lay1, "pc4")
