"""Learning one consistent graph from many views.

Each view's edge-weight row W_i splits into a consistent part A_i plus an
inconsistent remainder W_i - A_i. The objective couples three pieces:

    sum_i lam_i * || alpha_i * A_i - s ||^2
  + sum_{i,l} B_il * lam_i * lam_l * alpha_i * alpha_l * <W_i - A_i, W_l - A_l>

where B has beta on its diagonal and gamma off it, alpha lies on the
probability simplex, s is the fused edge-weight vector and
0 <= A <= W elementwise. The optimizer alternates three exact or descending
subproblem updates: a simplex QP in alpha (away-step Frank-Wolfe), the
closed-form global minimizer in s, and one batched box QP sweep in A (d.c.
iteration). Every sweep weakly decreases the objective.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import MultiViewDenseGraph, row_normalize
from .qpsolvers import BatchBoxQP, SimplexQP, afw_solve, dca_solve


@dataclass
class FusionParams:
    """Knobs for the alternating optimizer.

    beta penalizes the magnitude of each view's inconsistent part, gamma
    penalizes inconsistency shared across views (keeping it sparse across
    views), and lam holds strictly positive per-view importance weights
    (None means all ones).
    """

    beta: float = 1.0
    gamma: float = 1e4
    lam: np.ndarray | None = None
    max_outer: int = 50
    rel_tol: float = 1e-6
    afw_eps: float = 1e-8
    dca_iters: int = 3

    def __post_init__(self):
        if self.beta < 0 or self.gamma < 0:
            raise ValueError("beta and gamma must be nonnegative")
        if self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")
        if self.rel_tol < 0:
            raise ValueError("rel_tol must be nonnegative")
        if self.dca_iters < 1:
            raise ValueError("dca_iters must be >= 1")
        if self.lam is not None:
            self.lam = np.asarray(self.lam, dtype=float).ravel()
            if np.any(self.lam <= 0):
                raise ValueError("view importance weights must be strictly positive")

    def lambdas(self, v: int) -> np.ndarray:
        if self.lam is None:
            return np.ones(v)
        if len(self.lam) != v:
            raise ValueError(f"lam has length {len(self.lam)}, expected {v} views")
        return self.lam


@dataclass
class FusionState:
    """Current iterate: consistent parts A (v x n_e), view scalings alpha
    (simplex), fused edge weights s (length n_e)."""

    A: np.ndarray
    alpha: np.ndarray
    s: np.ndarray


@dataclass
class FusionResult:
    state: FusionState
    objective_trace: np.ndarray
    iterations: int
    converged: bool


def objective_value(W: np.ndarray, state: FusionState, params: FusionParams) -> float:
    """Evaluate the fusion objective at the given state."""
    W = np.asarray(W, dtype=float)
    A, alpha, s = state.A, state.alpha, state.s
    if A.shape != W.shape or len(alpha) != W.shape[0] or len(s) != W.shape[1]:
        raise ValueError("state shapes do not match W")
    lam = params.lambdas(W.shape[0])

    resid = alpha[:, None] * A - s[None, :]
    consistency = float(lam @ np.sum(resid * resid, axis=1))

    E = W - A
    G = E @ E.T
    t = lam * alpha
    total = float(t @ G @ t)
    diag = float((t * t) @ np.diag(G))
    inconsistency = params.gamma * (total - diag) + params.beta * diag
    return consistency + inconsistency


def assemble_alpha_qp(
    W: np.ndarray, A: np.ndarray, s: np.ndarray, params: FusionParams
) -> SimplexQP:
    """Quadratic in alpha (A and s held fixed), up to an additive constant."""
    W = np.asarray(W, dtype=float)
    if A.shape != W.shape or len(s) != W.shape[1]:
        raise ValueError("A/s shapes do not match W")
    lam = params.lambdas(W.shape[0])

    h = np.sum(A * A, axis=1)
    E = W - A
    G = E @ E.T
    P = params.gamma * np.outer(lam, lam) * G
    np.fill_diagonal(P, params.beta * lam**2 * np.diag(G))
    H = 2.0 * (np.diag(lam * h) + P)
    H = 0.5 * (H + H.T)  # BLAS products are not exactly symmetric
    c = 2.0 * lam * (A @ s)
    return SimplexQP(H=H, c=c)


def update_s(A: np.ndarray, alpha: np.ndarray, lam: np.ndarray) -> np.ndarray:
    """Closed-form global minimizer of the objective in s: a lam*alpha
    weighted average of the rows of A, hence elementwise nonnegative."""
    A = np.asarray(A, dtype=float)
    alpha = np.asarray(alpha, dtype=float).ravel()
    lam = np.asarray(lam, dtype=float).ravel()
    if A.shape[0] != len(alpha) or len(lam) != len(alpha):
        raise ValueError("A, alpha and lam disagree on the number of views")
    t = lam * alpha / lam.sum()
    return t @ A


def assemble_A_qp(
    W: np.ndarray, alpha: np.ndarray, s: np.ndarray, params: FusionParams
) -> BatchBoxQP:
    """One box QP per edge column in A (alpha and s held fixed), all sharing
    the Hessian D; upper bounds are the original weights W."""
    W = np.asarray(W, dtype=float)
    if len(alpha) != W.shape[0] or len(s) != W.shape[1]:
        raise ValueError("alpha/s shapes do not match W")
    lam = params.lambdas(W.shape[0])

    t = lam * alpha
    K = params.gamma * np.outer(t, t)
    np.fill_diagonal(K, params.beta * t * t)
    D = 2.0 * (np.diag(lam * alpha**2) + K)
    D = 0.5 * (D + D.T)
    L = 2.0 * (np.outer(t, s) + K @ W)
    return BatchBoxQP(D=D, L=L, U=W)


def learn_consistent_graph(
    mv: MultiViewDenseGraph, params: FusionParams
) -> FusionResult:
    """Alternating optimizer over (alpha, s, A) on the dense representation.

    Rows of W are first normalized to unit sum (removing per-view scale),
    A starts at W, alpha uniform, s at its closed-form optimum. Each outer
    sweep updates alpha (warm-started Frank-Wolfe), then s, then A (batched
    d.c.), and records the objective; the loop stops when the relative
    objective change drops below rel_tol or max_outer is reached.
    """
    v = mv.v
    lam = params.lambdas(v)
    W = row_normalize(mv).W

    A = W.copy()
    alpha = np.full(v, 1.0 / v)
    s = update_s(A, alpha, lam)
    f_prev = objective_value(W, FusionState(A=A, alpha=alpha, s=s), params)

    trace: list[float] = []
    converged = False
    for _ in range(params.max_outer):
        alpha = afw_solve(assemble_alpha_qp(W, A, s, params), alpha, eps=params.afw_eps)
        s = update_s(A, alpha, lam)
        A = dca_solve(assemble_A_qp(W, alpha, s, params), A, iters=params.dca_iters)

        f = objective_value(W, FusionState(A=A, alpha=alpha, s=s), params)
        trace.append(f)
        if abs(f_prev - f) < params.rel_tol * max(1.0, abs(f_prev)):
            converged = True
            break
        f_prev = f

    state = FusionState(A=A, alpha=alpha, s=s)
    return FusionResult(
        state=state,
        objective_trace=np.array(trace),
        iterations=len(trace),
        converged=converged,
    )
