"""Spectral clustering on a fused similarity graph.

Follows the classic normalized-cut recipe: symmetrically normalize the
affinity matrix, embed nodes with the leading eigenvectors, unit-normalize
the embedding rows and run k-means on them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

_DEGREE_EPS = 1e-12
_DENSE_EIG_LIMIT = 2000


@dataclass
class Embedding:
    """Row-per-node spectral embedding.

    X rows are unit length except for isolated nodes, whose all-zero rows are
    left untouched and listed in zero_rows. eigenvalues holds the leading
    eigenvalues of the normalized affinity in descending order (one more than
    the embedding width when available, so the spectral gap can be read off).
    """

    X: np.ndarray
    eigenvalues: np.ndarray
    zero_rows: np.ndarray


@dataclass
class Labels:
    """Cluster ids in [0, n_clusters) for each node."""

    assignment: np.ndarray
    n_clusters: int

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int64).ravel()
        if self.assignment.size and self.assignment.max() >= self.n_clusters:
            raise ValueError("cluster id out of range")
        if self.assignment.size and self.assignment.min() < 0:
            raise ValueError("negative cluster id")

    def __len__(self) -> int:
        return len(self.assignment)


def normalized_affinity(S):
    """D^{-1/2} S D^{-1/2} with D the degree matrix.

    Accepts a dense array or a scipy sparse matrix (returned in kind).
    Isolated nodes (degree below 1e-12) get zero rows and columns instead of
    a division blow-up.
    """
    sparse = sp.issparse(S)
    if sparse:
        S = S.tocsr()
        if (S != S.T).nnz > 0 and abs(S - S.T).max() > 1e-10:
            raise ValueError("affinity matrix must be symmetric")
        if S.nnz and S.data.min() < 0:
            raise ValueError("affinity matrix must be nonnegative")
        deg = np.asarray(S.sum(axis=1)).ravel()
    else:
        S = np.asarray(S, dtype=float)
        if np.max(np.abs(S - S.T), initial=0.0) > 1e-10:
            raise ValueError("affinity matrix must be symmetric")
        if np.any(S < 0):
            raise ValueError("affinity matrix must be nonnegative")
        deg = S.sum(axis=1)

    inv_sqrt = np.where(deg > _DEGREE_EPS, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    if sparse:
        Dinv = sp.diags(inv_sqrt)
        return Dinv @ S @ Dinv
    return S * inv_sqrt[:, None] * inv_sqrt[None, :]


def spectral_embed(S, n_c: int) -> Embedding:
    """Embed nodes with the eigenvectors of the n_c largest eigenvalues of
    the normalized affinity, rows unit-normalized."""
    n = S.shape[0]
    if n_c < 2:
        raise ValueError("need at least 2 clusters")
    if n_c > n:
        raise ValueError(f"n_c={n_c} exceeds the number of nodes {n}")

    N = normalized_affinity(S)
    want = min(n_c + 1, n)  # one extra eigenvalue for the gap diagnostic
    if n <= _DENSE_EIG_LIMIT or want >= n - 1:
        dense = N.toarray() if sp.issparse(N) else N
        vals, vecs = np.linalg.eigh(dense)
        vals = vals[::-1][:want]
        vecs = vecs[:, ::-1][:, :n_c]
    else:
        vals, vecs = spla.eigsh(N, k=want, which="LA", tol=1e-8)
        order = np.argsort(vals)[::-1]
        vals = vals[order]
        vecs = vecs[:, order[:n_c]]

    norms = np.linalg.norm(vecs, axis=1)
    zero_rows = np.flatnonzero(norms <= _DEGREE_EPS)
    safe = np.where(norms > _DEGREE_EPS, norms, 1.0)
    X = vecs / safe[:, None]
    return Embedding(X=X, eigenvalues=np.asarray(vals, dtype=float), zero_rows=zero_rows)


def eigengap(emb: Embedding, n_c: int) -> float | None:
    """Difference between the n_c-th and (n_c+1)-th eigenvalues, if known."""
    if len(emb.eigenvalues) <= n_c:
        return None
    return float(emb.eigenvalues[n_c - 1] - emb.eigenvalues[n_c])


def _plusplus_init(X: np.ndarray, n_c: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeding; collapses to repeated centers only when fewer than
    n_c distinct rows exist."""
    n = X.shape[0]
    centers = np.empty((n_c, X.shape[1]))
    idx = int(rng.integers(n))
    centers[0] = X[idx]
    d2 = np.sum((X - centers[0]) ** 2, axis=1)
    for m in range(1, n_c):
        total = d2.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centers[m] = X[idx]
        d2 = np.minimum(d2, np.sum((X - centers[m]) ** 2, axis=1))
    return centers


def kmeans(
    X,
    n_c: int,
    restarts: int = 10,
    max_iter: int = 1000,
    seed: int = 0,
) -> Labels:
    """Best-of-restarts Lloyd k-means with k-means++ seeding.

    Accepts an Embedding or a plain (n, d) array. Deterministic for a given
    seed; ties between equal-objective restarts keep the earliest restart.
    Degenerate inputs (fewer distinct rows than clusters) leave some clusters
    empty and are reported with a warning rather than an error.
    """
    if isinstance(X, Embedding):
        X = X.X
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError("X must be 2-D")
    n = X.shape[0]
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if n_c < 1 or n_c > n:
        raise ValueError(f"n_c must be in [1, {n}]")

    distinct = len(np.unique(X, axis=0))
    if distinct < n_c:
        warnings.warn(
            f"only {distinct} distinct rows for {n_c} clusters; "
            "duplicates share a cluster and some clusters stay empty",
            stacklevel=2,
        )

    rng = np.random.Generator(np.random.Philox(seed))
    best_labels: np.ndarray | None = None
    best_wcss = np.inf
    for _ in range(restarts):
        centers = _plusplus_init(X, n_c, rng)
        labels = np.zeros(n, dtype=np.int64)
        for _ in range(max_iter):
            d2 = np.sum((X[:, None, :] - centers[None, :, :]) ** 2, axis=2)
            new_labels = np.argmin(d2, axis=1)
            for m in range(n_c):
                members = X[new_labels == m]
                if len(members):  # empty clusters keep their center
                    centers[m] = members.mean(axis=0)
            if np.array_equal(new_labels, labels):
                labels = new_labels
                break
            labels = new_labels
        wcss = float(np.sum((X - centers[labels]) ** 2))
        if wcss < best_wcss:
            best_wcss = wcss
            best_labels = labels
    return Labels(assignment=best_labels, n_clusters=n_c)
