"""Clustering agreement scores: NMI, ARI, accuracy, purity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .spectral import Labels


def _as_ids(labels) -> np.ndarray:
    if isinstance(labels, Labels):
        return labels.assignment
    return np.asarray(labels, dtype=np.int64).ravel()


@dataclass
class ContingencyTable:
    """Predicted-by-true cluster co-occurrence counts."""

    counts: np.ndarray

    @property
    def n(self) -> int:
        return int(self.counts.sum())


def contingency_table(pred, truth) -> ContingencyTable:
    p, t = _as_ids(pred), _as_ids(truth)
    if len(p) != len(t):
        raise ValueError(f"label lengths differ: {len(p)} vs {len(t)}")
    if len(p) == 0:
        raise ValueError("empty labelings")
    _, pi = np.unique(p, return_inverse=True)
    _, ti = np.unique(t, return_inverse=True)
    counts = np.zeros((pi.max() + 1, ti.max() + 1), dtype=np.int64)
    np.add.at(counts, (pi, ti), 1)
    return ContingencyTable(counts=counts)


def nmi(pred, truth) -> float:
    """Mutual information normalized by the geometric mean of the entropies.

    If both labelings are a single cluster they are identical partitions and
    score 1; if exactly one has zero entropy the score is 0.
    """
    table = contingency_table(pred, truth).counts
    n = table.sum()
    p_rows = table.sum(axis=1) / n
    p_cols = table.sum(axis=0) / n
    h_rows = -np.sum(p_rows * np.log(p_rows, where=p_rows > 0, out=np.zeros_like(p_rows)))
    h_cols = -np.sum(p_cols * np.log(p_cols, where=p_cols > 0, out=np.zeros_like(p_cols)))
    if h_rows == 0.0 and h_cols == 0.0:
        return 1.0
    if h_rows == 0.0 or h_cols == 0.0:
        return 0.0
    p = table / n
    outer = np.outer(p_rows, p_cols)
    nz = p > 0
    mi = float(np.sum(p[nz] * np.log(p[nz] / outer[nz])))
    return float(np.clip(mi / np.sqrt(h_rows * h_cols), 0.0, 1.0))


def ari(pred, truth) -> float:
    """Pair-counting Rand index adjusted for chance."""
    table = contingency_table(pred, truth).counts
    n = table.sum()
    if n < 2:
        raise ValueError("ARI needs at least 2 samples")

    def pairs(x):
        return float(np.sum(x * (x - 1) / 2))

    agree = pairs(table)
    rows = pairs(table.sum(axis=1))
    cols = pairs(table.sum(axis=0))
    total = n * (n - 1) / 2
    expected = rows * cols / total
    maximum = (rows + cols) / 2
    if maximum == expected:  # e.g. both labelings all-singletons
        return 1.0
    return float((agree - expected) / (maximum - expected))


def acc(pred, truth) -> float:
    """Fraction matched under the best one-to-one cluster-label mapping."""
    table = contingency_table(pred, truth).counts
    k = max(table.shape)
    padded = np.zeros((k, k), dtype=np.int64)
    padded[: table.shape[0], : table.shape[1]] = table
    rows, cols = linear_sum_assignment(-padded)
    return float(padded[rows, cols].sum() / table.sum())


def purity(pred, truth) -> float:
    """Average over predicted clusters of their dominant true-label share."""
    table = contingency_table(pred, truth).counts
    return float(table.max(axis=1).sum() / table.sum())


def all_scores(pred, truth) -> dict[str, float]:
    return {
        "nmi": nmi(pred, truth),
        "ari": ari(pred, truth),
        "acc": acc(pred, truth),
        "purity": purity(pred, truth),
    }
