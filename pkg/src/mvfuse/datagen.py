"""Deterministic synthetic multi-view data for tests and robustness studies.

All randomness comes from numpy's Philox bit generator (counter-based), so a
given seed reproduces the same data on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import SIMILARITY, SparseViewGraph
from .spectral import Labels


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _cluster_labels(n: int, n_c: int) -> np.ndarray:
    # balanced clusters, the last one absorbs the remainder
    sizes = [n // n_c] * n_c
    sizes[-1] += n - sum(sizes)
    return np.repeat(np.arange(n_c), sizes)


@dataclass
class SyntheticSpec:
    """Planted-cluster multi-view similarity graphs, optionally corrupted.

    Clean views carry block-structured weights: p_in inside a cluster and
    p_out across clusters, each scaled by a mild random jitter. Views listed
    in corrupt_views additionally receive positive exponential noise of scale
    noise_scale on a corrupt_rate fraction of their cross-cluster entries, so
    corrupted cross-cluster weights routinely overtake genuine neighbors.
    """

    n: int
    n_c: int
    v: int
    p_in: float = 0.9
    p_out: float = 0.05
    corrupt_views: tuple[int, ...] = ()
    corrupt_rate: float = 0.0
    noise_scale: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 2 or self.n_c < 1 or self.v < 1:
            raise ValueError("need n >= 2, n_c >= 1, v >= 1")
        if self.n_c > self.n:
            raise ValueError("more clusters than nodes")
        if not 0.0 <= self.corrupt_rate <= 1.0:
            raise ValueError(f"corrupt_rate must be in [0, 1], got {self.corrupt_rate}")
        if self.p_in < 0 or self.p_out < 0 or self.noise_scale < 0:
            raise ValueError("p_in, p_out and noise_scale must be nonnegative")
        self.corrupt_views = tuple(int(i) for i in self.corrupt_views)
        if any(i < 0 or i >= self.v for i in self.corrupt_views):
            raise ValueError("corrupt_views indices must lie in [0, v)")


def generate_multiview(spec: SyntheticSpec) -> tuple[list[SparseViewGraph], Labels]:
    """Draw v similarity graphs over one node set with planted clusters."""
    rng = _rng(spec.seed)
    labels = _cluster_labels(spec.n, spec.n_c)
    same = labels[:, None] == labels[None, :]
    base = np.where(same, spec.p_in, spec.p_out)
    iu = np.triu_indices(spec.n, k=1)
    cross_u = ~same[iu]

    views = []
    for view_idx in range(spec.v):
        w = np.zeros((spec.n, spec.n))
        w[iu] = base[iu] * rng.uniform(0.9, 1.1, size=len(iu[0]))
        if view_idx in spec.corrupt_views and spec.corrupt_rate > 0:
            hit = cross_u & (rng.random(len(iu[0])) < spec.corrupt_rate)
            w[iu] = w[iu] + hit * rng.exponential(spec.noise_scale, size=len(iu[0]))
        w = w + w.T
        views.append(SparseViewGraph.from_dense(w, semantics=SIMILARITY))
    return views, Labels(assignment=labels, n_clusters=spec.n_c)


def generate_blobs(
    n: int, n_c: int, dim: int, separation: float, seed: int = 0
) -> tuple[np.ndarray, Labels]:
    """Unit-variance Gaussian blobs whose centroids sit at least `separation`
    apart (placed along the first axis)."""
    if n < n_c or n_c < 1 or dim < 1:
        raise ValueError("need n >= n_c >= 1 and dim >= 1")
    rng = _rng(seed)
    labels = _cluster_labels(n, n_c)
    centers = np.zeros((n_c, dim))
    centers[:, 0] = separation * np.arange(n_c)
    x = centers[labels] + rng.standard_normal((n, dim))
    return x, Labels(assignment=labels, n_clusters=n_c)


def similarity_to_distance_views(views: list[SparseViewGraph]) -> list[np.ndarray]:
    """Flip similarity graphs into dense distance matrices (max-weight minus
    weight per view, zero diagonal), the form the fusion pipelines ingest."""
    out = []
    for g in views:
        m = g.to_dense()
        d = m.max() - m
        np.fill_diagonal(d, 0.0)
        out.append(d)
    return out
