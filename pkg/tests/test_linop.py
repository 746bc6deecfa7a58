import numpy as np
import pytest

from wavelasso import dwt, grouping, linop
from wavelasso.errors import CapacityError, DimensionError, KernelSizeError

from oracles import dense_matrix_of


def test_gaussian_sensing_columns():
    op = linop.gaussian_sensing(2, 2, seed=11)
    mat = linop.GaussianMatrix.draw(2, 2, seed=11).entries
    e1 = np.array([1.0, 0.0])
    np.testing.assert_allclose(op.apply(e1), mat[:, 0])
    np.testing.assert_allclose(op.adjoint(e1), mat[0, :])


def test_gaussian_sensing_deterministic():
    a = linop.GaussianMatrix.draw(5, 7, seed=3).entries
    b = linop.GaussianMatrix.draw(5, 7, seed=3).entries
    assert np.array_equal(a, b)
    c = linop.GaussianMatrix.draw(5, 7, seed=4).entries
    assert not np.array_equal(a, c)


def test_gaussian_sensing_adjoint_identity():
    op = linop.gaussian_sensing(13, 29, seed=0)
    assert linop.adjoint_mismatch(op, n_pairs=20, seed=1) < 1e-10


def test_gaussian_entry_statistics():
    # law of large numbers at 800*4096 entries
    mat = linop.GaussianMatrix.draw(800, 4096, seed=123).entries
    assert -0.01 < mat.mean() < 0.01
    assert 0.95 < mat.var() < 1.05


def test_gaussian_capacity_error():
    with pytest.raises(CapacityError):
        linop.gaussian_sensing(10_000, 10_000, seed=0, memory_budget=1 << 20)


def test_blur_preserves_constants():
    op = linop.gaussian_blur((8, 8), variance=1.0)
    const = np.full(64, 2.3)
    np.testing.assert_allclose(op.apply(const), const, atol=1e-12)


def test_blur_impulse_response_is_centered_kernel():
    kernel = linop.BlurKernel.gaussian(1.0)
    op = linop.gaussian_blur((16, 16), variance=1.0)
    impulse = np.zeros((16, 16))
    impulse[5, 9] = 1.0
    out = op.apply(impulse.ravel()).reshape(16, 16)
    expected = np.zeros((16, 16))
    r = kernel.radius
    for u in range(2 * r + 1):
        for w in range(2 * r + 1):
            expected[(5 + u - r) % 16, (9 + w - r) % 16] += kernel.taps[u, w]
    np.testing.assert_allclose(out, expected, atol=1e-14)


def test_blur_kernel_properties():
    k = linop.BlurKernel.gaussian(2.0)
    assert k.radius == 3 * int(np.ceil(np.sqrt(2.0)))
    assert k.taps.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all(k.taps >= 0)
    np.testing.assert_allclose(k.taps, k.taps[::-1, ::-1], atol=0)


def test_blur_self_adjoint(rng):
    op = linop.gaussian_blur((16, 16), variance=1.0)
    x = rng.standard_normal(256)
    np.testing.assert_allclose(op.apply(x), op.adjoint(x), atol=1e-10)
    assert linop.adjoint_mismatch(op, n_pairs=20, seed=2) < 1e-12


def test_blur_kernel_size_error():
    with pytest.raises(KernelSizeError):
        linop.gaussian_blur((8, 8), variance=4.0)  # radius 6 >= 8/2


def test_compose_identity_is_synthesis(rng):
    layout = dwt.Layout1D(32, 5)
    A = linop.compose_with_synthesis(linop.identity(32), layout)
    theta = rng.standard_normal(32)
    np.testing.assert_allclose(A.apply(theta), dwt.synthesize(theta, layout), atol=1e-12)


def test_compose_on_basis_vectors():
    layout = dwt.Layout2D(8, 8, 3)
    L = linop.gaussian_sensing(10, 64, seed=9)
    A = linop.compose_with_synthesis(L, layout)
    for k in (0, 5, 63):
        e = np.zeros(64)
        e[k] = 1.0
        atom = dwt.synthesize(e, layout).ravel()
        np.testing.assert_allclose(A.apply(e), L.apply(atom), atol=1e-12)


def test_compose_adjoint_identity(rng):
    layout = dwt.Layout2D(16, 16, 4)
    L = linop.gaussian_sensing(40, 256, seed=17)
    A = linop.compose_with_synthesis(L, layout)
    assert linop.adjoint_mismatch(A, n_pairs=20, seed=3) < 1e-8


def test_compose_dimension_mismatch():
    with pytest.raises(DimensionError):
        linop.compose_with_synthesis(linop.identity(16), dwt.Layout1D(32, 4))


def _pc2_repmap(n=16, levels=4):
    layout = dwt.Layout1D(n, levels)
    gs = grouping.make_groups(grouping.build_binary_tree(layout), "pc2_1d", layout)
    return grouping.make_replication_map(gs)


def test_replicate_identity_repmap_is_same_operator(rng):
    # every coefficient in exactly one singleton group -> replication is a no-op
    layout = dwt.Layout1D(8, 3)
    gs = grouping.GroupStructure([np.array([i]) for i in range(8)], "pc2_1d", layout)
    repmap = grouping.make_replication_map(gs)
    assert repmap.total_replicas == 8
    A = linop.gaussian_sensing(5, 8, seed=2)
    At = linop.replicate_columns(A, repmap)
    v = rng.standard_normal(8)
    np.testing.assert_allclose(At.apply(v), A.apply(v), atol=1e-12)


def test_replicate_columns_sums_replicas():
    repmap = _pc2_repmap()
    A = linop.gaussian_sensing(6, 16, seed=5)
    At = linop.replicate_columns(A, repmap)
    i = 3  # an interior detail coefficient: several replicas
    replicas = repmap.J(i)
    assert len(replicas) >= 2
    vt = np.zeros(repmap.total_replicas)
    vt[replicas[0]] = 0.7
    vt[replicas[1]] = -0.2
    v = np.zeros(16)
    v[i] = 0.5
    np.testing.assert_allclose(At.apply(vt), A.apply(v), atol=1e-12)


def test_replicate_adjoint_identity():
    repmap = _pc2_repmap()
    A = linop.gaussian_sensing(12, 16, seed=8)
    At = linop.replicate_columns(A, repmap)
    assert linop.adjoint_mismatch(At, n_pairs=20, seed=4) < 1e-8


def test_replicated_matrix_matches_column_duplication():
    # oracle: materialize both matrices; replicated columns literally repeat
    repmap = _pc2_repmap(8, 3)
    A = linop.gaussian_sensing(5, 8, seed=21)
    At = linop.replicate_columns(A, repmap)
    dense_A = dense_matrix_of(A)
    dense_At = dense_matrix_of(At)
    for r in range(repmap.total_replicas):
        np.testing.assert_allclose(dense_At[:, r], dense_A[:, repmap.replica_of[r]])


def test_collapse_expand_roundtrip(rng):
    repmap = _pc2_repmap()
    v = rng.standard_normal(16)
    np.testing.assert_allclose(
        repmap.collapse(repmap.expand(v)), repmap.counts * v, atol=1e-12
    )


def test_all_operator_kinds_pass_adjoint_identity():
    layout = dwt.Layout2D(8, 8, 3)
    repmap = _pc2_repmap(16, 4)
    ops = [
        linop.gaussian_sensing(7, 13, seed=1),
        linop.gaussian_blur((8, 8), variance=0.5),
        linop.compose_with_synthesis(linop.gaussian_sensing(9, 64, seed=2), layout),
        linop.replicate_columns(linop.gaussian_sensing(6, 16, seed=3), repmap),
    ]
    for op in ops:
        assert linop.adjoint_mismatch(op, n_pairs=20, seed=6) < 1e-8


def test_operator_linearity(rng):
    op = linop.gaussian_blur((8, 8), variance=1.0)
    x = rng.standard_normal(64)
    z = rng.standard_normal(64)
    lhs = op.apply(1.5 * x - 0.5 * z)
    rhs = 1.5 * op.apply(x) - 0.5 * op.apply(z)
    np.testing.assert_allclose(lhs, rhs, atol=1e-10)


def test_spectral_norm_estimate_matches_svd():
    mat = linop.GaussianMatrix.draw(20, 30, seed=44).entries
    op = linop.from_matrix(mat)
    est = linop.spectral_norm_estimate(op, iters=200, seed=0)
    assert est == pytest.approx(np.linalg.svd(mat, compute_uv=False)[0], rel=1e-6)
