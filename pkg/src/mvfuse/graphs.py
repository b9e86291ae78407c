"""Per-view kNN graphs with a shared edge set, and the dense multi-view packing.

Every view of a dataset gives one weighted graph over the same nodes. To fuse
them we force all views onto one common edge-index set (the union of each
view's directed kNN edges) and pack the weights into a single dense v-by-n_e
matrix, one row per view, one column per retained edge.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

SIMILARITY = "similarity"
DISTANCE = "distance"

_EPS = 1e-12


@dataclass
class SparseViewGraph:
    """One view's weighted adjacency as a map (i, j) -> nonnegative weight.

    Ordered pairs, no self loops. `semantics` says whether weights mean
    similarity (bigger = closer) or distance (smaller = closer).
    """

    n: int
    edges: dict[tuple[int, int], float]
    semantics: str = SIMILARITY

    def __post_init__(self):
        if self.semantics not in (SIMILARITY, DISTANCE):
            raise ValueError(f"unknown semantics {self.semantics!r}")
        if self.n <= 0:
            raise ValueError("node count must be positive")
        for (i, j), w in self.edges.items():
            if i == j:
                raise ValueError(f"self loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"node pair {(i, j)} out of range [0, {self.n})")
            if w < 0:
                raise ValueError(f"negative weight {w} at {(i, j)}")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def weights(self) -> np.ndarray:
        """Edge weights in lexicographic pair order."""
        return np.array([self.edges[p] for p in sorted(self.edges)], dtype=float)

    def to_dense(self) -> np.ndarray:
        """Dense n-by-n matrix with zeros for absent edges."""
        m = np.zeros((self.n, self.n))
        for (i, j), w in self.edges.items():
            m[i, j] = w
        return m

    @classmethod
    def from_dense(cls, m: np.ndarray, semantics: str = SIMILARITY) -> "SparseViewGraph":
        """Keep the nonzero off-diagonal entries of a dense matrix."""
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("dense adjacency must be square")
        ii, jj = np.nonzero(m)
        edges = {(int(i), int(j)): float(m[i, j]) for i, j in zip(ii, jj) if i != j}
        return cls(n=m.shape[0], edges=edges, semantics=semantics)


@dataclass
class EdgeIndexSet:
    """The shared edge-pair set, as an (n_e, 2) int array sorted lexicographically."""

    pairs: np.ndarray
    n: int

    def __post_init__(self):
        self.pairs = np.asarray(self.pairs, dtype=np.int64).reshape(-1, 2)
        order = np.lexsort((self.pairs[:, 1], self.pairs[:, 0]))
        self.pairs = self.pairs[order]
        if np.any(self.pairs[:, 0] == self.pairs[:, 1]):
            raise ValueError("self pairs are not allowed")
        if self.pairs.min(initial=0) < 0 or self.pairs.max(initial=-1) >= self.n:
            raise ValueError("pair index out of range")
        if len(np.unique(self.pairs, axis=0)) != len(self.pairs):
            raise ValueError("duplicate pairs")

    @property
    def n_e(self) -> int:
        return len(self.pairs)

    def as_tuples(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in self.pairs]


@dataclass
class MultiViewDenseGraph:
    """All views' weights on the shared edge set: W is v-by-n_e, row per view."""

    index: EdgeIndexSet
    W: np.ndarray

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=float)
        if self.W.ndim != 2:
            raise ValueError("W must be a v-by-n_e matrix")
        if self.W.shape[1] != self.index.n_e:
            raise ValueError(
                f"W has {self.W.shape[1]} columns but the index set has {self.index.n_e} pairs"
            )
        if np.any(self.W < 0):
            raise ValueError("W must be nonnegative")

    @property
    def v(self) -> int:
        return self.W.shape[0]

    @property
    def n_e(self) -> int:
        return self.W.shape[1]


def pairwise_distances(x: np.ndarray, metric: str = "euclidean") -> np.ndarray:
    """Exact pairwise distance matrix for row-vector features.

    metric "euclidean" or "cosine"; cosine treats zero rows as unit norm
    so the result stays finite.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 2:
        raise ValueError("feature matrix must be 2-D")
    if metric == "euclidean":
        return cdist(x, x)
    if metric == "cosine":
        norms = np.maximum(np.linalg.norm(x, axis=1), _EPS)
        sim = (x @ x.T) / np.outer(norms, norms)
        return np.maximum(1.0 - sim, 0.0)
    raise ValueError(f"unknown metric {metric!r}")


def build_shared_knn(
    views: list[np.ndarray],
    k: int,
    metric: str = "euclidean",
    views_are: str = "features",
) -> list[SparseViewGraph]:
    """Directed kNN distance graphs over the union neighbor set of all views.

    An edge (i, j) is kept, in every view, as soon as j is among the k nearest
    neighbors of i in at least one view; each view then carries its own
    distance on every kept edge, so all returned graphs share one edge set.
    Ties in the kNN selection go to the smaller node index. A square matrix is
    ambiguous between features and distances, hence the explicit `views_are`
    flag ("features" or "distances").
    """
    if len(views) == 0:
        raise ValueError("need at least one view")
    if views_are not in ("features", "distances"):
        raise ValueError(f"views_are must be 'features' or 'distances', got {views_are!r}")

    dists = []
    for idx, view in enumerate(views):
        view = np.asarray(view, dtype=float)
        if views_are == "distances":
            if view.ndim != 2 or view.shape[0] != view.shape[1]:
                raise ValueError(f"view {idx}: distance matrix must be square")
            if np.any(view < 0):
                raise ValueError(f"view {idx}: distances must be nonnegative")
            dists.append(view)
        else:
            dists.append(pairwise_distances(view, metric))

    n = dists[0].shape[0]
    for idx, d in enumerate(dists):
        if d.shape[0] != n:
            raise ValueError(f"view {idx} has {d.shape[0]} nodes, expected {n}")
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")

    # Union of directed kNN edges. Stable argsort on distance keeps ties in
    # ascending node-index order.
    keep = np.zeros((n, n), dtype=bool)
    for d in dists:
        d = d.copy()
        np.fill_diagonal(d, np.inf)
        nearest = np.argsort(d, axis=1, kind="stable")[:, :k]
        rows = np.repeat(np.arange(n), k)
        keep[rows, nearest.ravel()] = True

    ii, jj = np.nonzero(keep)
    graphs = []
    for d in dists:
        edges = {(int(i), int(j)): float(d[i, j]) for i, j in zip(ii, jj)}
        graphs.append(SparseViewGraph(n=n, edges=edges, semantics=DISTANCE))
    return graphs


def normalize_knn_distances(g: SparseViewGraph) -> SparseViewGraph:
    """Standardize a distance graph's edge weights to max((d - mu)/sigma + 1, 0).

    mu and sigma are the mean and population standard deviation over this
    graph's own edges. If sigma is (numerically) zero every edge becomes 1.
    """
    if g.n_edges == 0:
        raise ValueError("graph has no edges")
    pairs = sorted(g.edges)
    w = np.array([g.edges[p] for p in pairs], dtype=float)
    sigma = w.std()
    if sigma < _EPS:
        out = np.ones_like(w)
    else:
        out = np.maximum((w - w.mean()) / sigma + 1.0, 0.0)
    return SparseViewGraph(
        n=g.n, edges=dict(zip(pairs, out.tolist())), semantics=DISTANCE
    )


def gaussian_kernel(g: SparseViewGraph, rho: float | str = "mean") -> SparseViewGraph:
    """Map distances to similarities with d -> exp(-d^2 / (2 rho^2)).

    rho="mean" uses the mean edge weight of `g` as the bandwidth, falling
    back to 1 when that mean is numerically zero.
    """
    pairs = sorted(g.edges)
    w = np.array([g.edges[p] for p in pairs], dtype=float)
    if isinstance(rho, str):
        if rho != "mean":
            raise ValueError(f"rho must be a positive number or 'mean', got {rho!r}")
        if len(w) == 0:
            raise ValueError("rho='mean' needs at least one edge")
        bandwidth = float(w.mean())
        if bandwidth < _EPS:
            bandwidth = 1.0
    else:
        bandwidth = float(rho)
        if bandwidth <= 0:
            raise ValueError(f"rho must be positive, got {bandwidth}")
    out = np.exp(-(w**2) / (2.0 * bandwidth**2))
    return SparseViewGraph(
        n=g.n, edges=dict(zip(pairs, out.tolist())), semantics=SIMILARITY
    )


def build_mvdr(views: list[SparseViewGraph]) -> MultiViewDenseGraph:
    """Pack views sharing one edge set into the dense v-by-n_e representation."""
    if len(views) == 0:
        raise ValueError("need at least one view")
    n = views[0].n
    pairs = sorted(views[0].edges)
    for idx, g in enumerate(views[1:], start=1):
        if g.n != n:
            raise ValueError(f"view {idx} has {g.n} nodes, expected {n}")
        if sorted(g.edges) != pairs:
            raise ValueError(f"view {idx} does not share the common edge set")
    index = EdgeIndexSet(pairs=np.array(pairs, dtype=np.int64).reshape(-1, 2), n=n)
    W = np.array([[g.edges[p] for p in pairs] for g in views], dtype=float)
    return MultiViewDenseGraph(index=index, W=W)


def row_normalize(mv: MultiViewDenseGraph) -> MultiViewDenseGraph:
    """Scale each view's row to sum to 1. A view with no edge mass is an error."""
    sums = mv.W.sum(axis=1)
    if np.any(sums <= 0):
        bad = int(np.flatnonzero(sums <= 0)[0])
        raise ValueError(f"view {bad} has zero total edge weight")
    return MultiViewDenseGraph(index=mv.index, W=mv.W / sums[:, None])


def scatter_to_sparse(
    s: np.ndarray, index: EdgeIndexSet, n: int, semantics: str = SIMILARITY
) -> SparseViewGraph:
    """Spread an edge-weight vector back onto its (i, j) pairs."""
    s = np.asarray(s, dtype=float).ravel()
    if len(s) != index.n_e:
        raise ValueError(f"vector has {len(s)} entries, index set has {index.n_e} pairs")
    edges = {
        (int(i), int(j)): float(w) for (i, j), w in zip(index.pairs, s)
    }
    return SparseViewGraph(n=n, edges=edges, semantics=semantics)


def scatter_to_dense(s: np.ndarray, index: EdgeIndexSet, n: int) -> np.ndarray:
    """Spread an edge-weight vector into a dense n-by-n matrix."""
    s = np.asarray(s, dtype=float).ravel()
    if len(s) != index.n_e:
        raise ValueError(f"vector has {len(s)} entries, index set has {index.n_e} pairs")
    m = np.zeros((n, n))
    m[index.pairs[:, 0], index.pairs[:, 1]] = s
    return m
