import numpy as np
import pytest
import scipy.sparse as sp
from numpy.testing import assert_allclose

from mvfuse.datagen import generate_blobs
from mvfuse.spectral import (
    Labels,
    eigengap,
    kmeans,
    normalized_affinity,
    spectral_embed,
)


def two_cliques(size=4):
    S = np.zeros((2 * size, 2 * size))
    for block in (slice(0, size), slice(size, 2 * size)):
        S[block, block] = 1.0
    np.fill_diagonal(S, 0.0)
    return S


class TestNormalizedAffinity:
    def test_two_node_path_is_unchanged(self):
        S = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert_allclose(normalized_affinity(S), S)

    def test_scale_cancels(self):
        S = np.array([[0.0, 1.0], [1.0, 0.0]])
        assert_allclose(normalized_affinity(2.0 * S), normalized_affinity(S))

    def test_isolated_node_gets_zero_row(self):
        S = np.zeros((3, 3))
        S[0, 1] = S[1, 0] = 1.0
        N = normalized_affinity(S)
        assert_allclose(N[2], 0.0)
        assert_allclose(N[:, 2], 0.0)

    def test_sparse_input_round_trip(self):
        S = two_cliques(3)
        N_dense = normalized_affinity(S)
        N_sparse = normalized_affinity(sp.csr_matrix(S))
        assert sp.issparse(N_sparse)
        assert_allclose(N_sparse.toarray(), N_dense)

    def test_rejects_asymmetric_and_negative(self):
        with pytest.raises(ValueError):
            normalized_affinity(np.array([[0.0, 1.0], [0.5, 0.0]]))
        with pytest.raises(ValueError):
            normalized_affinity(np.array([[0.0, -1.0], [-1.0, 0.0]]))


class TestSpectralEmbed:
    def test_two_cliques_block_structure(self):
        emb = spectral_embed(two_cliques(), n_c=2)
        X = emb.X
        for block in (range(0, 4), range(4, 8)):
            rows = X[list(block)]
            signs = np.sign(rows @ rows[0])
            aligned = signs[:, None] * rows
            assert_allclose(aligned, np.broadcast_to(rows[0], rows.shape), atol=1e-8)
        assert abs(X[0] @ X[4]) < 1e-8

    def test_three_components_top_eigenvalues_are_one(self):
        S = np.zeros((9, 9))
        for block in (slice(0, 3), slice(3, 6), slice(6, 9)):
            S[block, block] = 1.0
        np.fill_diagonal(S, 0.0)
        emb = spectral_embed(S, n_c=3)
        assert_allclose(emb.eigenvalues[:3], 1.0, atol=1e-10)

    def test_eigenvalues_bounded_by_one_dense_oracle(self):
        rng = np.random.Generator(np.random.Philox(17))
        for _ in range(10):
            n = int(rng.integers(10, 50))
            M = rng.uniform(0.0, 1.0, size=(n, n))
            S = np.triu(M, 1)
            S = S + S.T
            emb = spectral_embed(S, n_c=3)
            N = normalized_affinity(S)
            vals = np.linalg.eigvalsh(N)
            assert vals.min() >= -1.0 - 1e-10 and vals.max() <= 1.0 + 1e-10
            assert_allclose(emb.eigenvalues[0], vals[-1], atol=1e-10)

    def test_rows_unit_norm_and_zero_rows_flagged(self):
        S = np.zeros((5, 5))
        S[0, 1] = S[1, 0] = 1.0
        S[2, 3] = S[3, 2] = 1.0
        emb = spectral_embed(S, n_c=2)
        norms = np.linalg.norm(emb.X, axis=1)
        assert_allclose(norms[[0, 1, 2, 3]], 1.0, atol=1e-8)
        assert 4 in emb.zero_rows
        assert_allclose(emb.X[4], 0.0)

    def test_validation(self):
        S = two_cliques(2)
        with pytest.raises(ValueError):
            spectral_embed(S, n_c=1)
        with pytest.raises(ValueError):
            spectral_embed(S, n_c=10)

    def test_eigengap_diagnostic(self):
        emb = spectral_embed(two_cliques(), n_c=2)
        gap = eigengap(emb, 2)
        assert gap is not None and gap > 0.1


class TestKmeans:
    def test_separated_pairs_cocluster(self):
        X = np.array([[0.0, 0.0], [0.1, 0.0], [10.0, 0.0], [10.1, 0.0]])
        labels = kmeans(X, 2, restarts=3, seed=1).assignment
        assert labels[0] == labels[1]
        assert labels[2] == labels[3]
        assert labels[0] != labels[2]

    def test_identical_points_leave_empty_cluster(self):
        X = np.ones((6, 2))
        with pytest.warns(UserWarning, match="distinct"):
            labels = kmeans(X, 2, seed=0).assignment
        assert len(np.unique(labels)) == 1

    def test_blob_recovery_over_seeds(self):
        x, truth = generate_blobs(n=90, n_c=3, dim=4, separation=40.0, seed=3)
        for seed in range(20):
            labels = kmeans(x, 3, restarts=10, max_iter=1000, seed=seed)
            same = labels.assignment[:, None] == labels.assignment[None, :]
            expected = truth.assignment[:, None] == truth.assignment[None, :]
            assert np.array_equal(same, expected), f"seed {seed}"

    def test_deterministic_given_seed(self):
        rng = np.random.Generator(np.random.Philox(19))
        X = rng.normal(size=(40, 3))
        a = kmeans(X, 4, seed=11).assignment
        b = kmeans(X, 4, seed=11).assignment
        assert np.array_equal(a, b)

    def test_accepts_embedding(self):
        emb = spectral_embed(two_cliques(), n_c=2)
        labels = kmeans(emb, 2, seed=0).assignment
        assert labels[0] == labels[1] == labels[2] == labels[3]
        assert labels[4] == labels[5] == labels[6] == labels[7]
        assert labels[0] != labels[4]

    def test_validation(self):
        X = np.zeros((3, 2))
        with pytest.raises(ValueError):
            kmeans(X, 2, restarts=0)
        with pytest.raises(ValueError):
            kmeans(X, 5)


class TestScaleInvarianceOfLabels:
    def test_labels_equal_for_scaled_affinity(self):
        S = two_cliques()
        rng = np.random.Generator(np.random.Philox(23))
        noise = rng.uniform(0.0, 0.05, size=S.shape)
        S = S + np.triu(noise, 1) + np.triu(noise, 1).T
        for c in (0.01, 100.0):
            a = kmeans(spectral_embed(S, 2), 2, seed=5).assignment
            b = kmeans(spectral_embed(c * S, 2), 2, seed=5).assignment
            assert np.array_equal(a, b)


class TestLabelsType:
    def test_bounds_checked(self):
        with pytest.raises(ValueError):
            Labels(assignment=np.array([0, 3]), n_clusters=2)
        with pytest.raises(ValueError):
            Labels(assignment=np.array([-1, 0]), n_clusters=2)
