"""The two quadratic-program kernels behind the fusion optimizer.

- away-step Frank-Wolfe for quadratics over the probability simplex, and
- a batched difference-of-convex (d.c.) fixed-point iteration for many
  box-constrained QPs that share a single (possibly indefinite) Hessian.

Both operate on tiny v-by-v Hessians (v = number of views), so dense
linear algebra is used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_symmetric(M: np.ndarray, tol: float, name: str) -> None:
    scale = max(1.0, float(np.max(np.abs(M))) if M.size else 0.0)
    if np.max(np.abs(M - M.T)) > tol * scale:
        raise ValueError(f"{name} is not symmetric within {tol:g}")


@dataclass
class SimplexQP:
    """min 0.5 a'Ha - a'c over the probability simplex."""

    H: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.H = np.asarray(self.H, dtype=float)
        self.c = np.asarray(self.c, dtype=float).ravel()
        if self.H.ndim != 2 or self.H.shape[0] != self.H.shape[1]:
            raise ValueError("H must be square")
        if self.c.shape[0] != self.H.shape[0]:
            raise ValueError("c length must match H")
        _check_symmetric(self.H, 1e-10, "H")

    def objective(self, alpha: np.ndarray) -> float:
        return float(0.5 * alpha @ self.H @ alpha - alpha @ self.c)

    def gradient(self, alpha: np.ndarray) -> np.ndarray:
        return self.H @ alpha - self.c


@dataclass
class BatchBoxQP:
    """One box QP per column: min 0.5 x'Dx - l'x subject to 0 <= x <= u.

    All columns share the Hessian D; L stacks the linear terms and U the
    upper bounds, both v-by-n_e.
    """

    D: np.ndarray
    L: np.ndarray
    U: np.ndarray

    def __post_init__(self):
        self.D = np.asarray(self.D, dtype=float)
        self.L = np.asarray(self.L, dtype=float)
        self.U = np.asarray(self.U, dtype=float)
        if self.D.ndim != 2 or self.D.shape[0] != self.D.shape[1]:
            raise ValueError("D must be square")
        _check_symmetric(self.D, 1e-10, "D")
        if self.L.shape != self.U.shape or self.L.ndim != 2:
            raise ValueError("L and U must be matrices of equal shape")
        if self.L.shape[0] != self.D.shape[0]:
            raise ValueError("L/U row count must match D")
        if np.any(self.U < 0):
            raise ValueError("upper bounds must be nonnegative")

    def objective_per_column(self, A: np.ndarray) -> np.ndarray:
        """The quadratic value of every column at once."""
        return 0.5 * np.sum(A * (self.D @ A), axis=0) - np.sum(self.L * A, axis=0)


def largest_eigenvalue(D: np.ndarray, tol: float = 1e-10) -> float:
    """Largest eigenvalue of a symmetric matrix (dense solve; v is small)."""
    D = np.asarray(D, dtype=float)
    if D.ndim != 2 or D.shape[0] != D.shape[1]:
        raise ValueError("matrix must be square")
    _check_symmetric(D, max(tol, 1e-10), "matrix")
    return float(np.linalg.eigvalsh(D)[-1])


def exact_line_search(
    H: np.ndarray, g: np.ndarray, d: np.ndarray, eta_max: float
) -> float:
    """Best step size in (0, eta_max] along a descent direction d.

    The objective restricted to the ray is the 1-D quadratic
    0.5 eta^2 d'Hd + eta g'd, so the minimizer is its vertex clipped to
    eta_max; with nonpositive curvature the boundary is optimal. The caller
    guarantees g'd < 0.
    """
    if eta_max <= 0:
        raise ValueError("eta_max must be positive")
    curvature = float(d @ H @ d)
    if curvature <= 0:
        return float(eta_max)
    return float(min(-(g @ d) / curvature, eta_max))


def afw_solve(
    qp: SimplexQP,
    alpha0: np.ndarray,
    eps: float = 1e-8,
    max_iter: int = 1000,
) -> np.ndarray:
    """Minimize a simplex-constrained quadratic with away-step Frank-Wolfe.

    Stops when the gap -g'd along the chosen direction falls to eps or after
    max_iter steps. Argmin/argmax ties are broken toward the smallest index.
    """
    alpha = np.asarray(alpha0, dtype=float).copy()
    if alpha.shape != qp.c.shape:
        raise ValueError("alpha0 length must match the QP dimension")
    if np.any(alpha < -1e-10) or abs(alpha.sum() - 1.0) > 1e-10:
        raise ValueError("alpha0 must lie on the probability simplex")
    if not (np.all(np.isfinite(qp.H)) and np.all(np.isfinite(qp.c))):
        raise ValueError("H and c must be finite")
    np.maximum(alpha, 0.0, out=alpha)

    v = len(alpha)
    for _ in range(max_iter):
        g = qp.gradient(alpha)

        i_fw = int(np.argmin(g))
        d_fw = -alpha.copy()
        d_fw[i_fw] += 1.0
        gap_fw = -float(g @ d_fw)

        support = np.flatnonzero(alpha > 0)
        j_away = int(support[np.argmax(g[support])])
        d_aw = alpha.copy()
        d_aw[j_away] -= 1.0
        gap_aw = -float(g @ d_aw)

        # With a single-atom support the away direction is the zero vector
        # (gap 0), so the >= comparison falls through to the FW branch and
        # the eta_max division below is safe.
        if gap_fw >= gap_aw:
            d, eta_max = d_fw, 1.0
        else:
            d, eta_max = d_aw, alpha[j_away] / (1.0 - alpha[j_away])

        if -float(g @ d) <= eps:
            break
        eta = exact_line_search(qp.H, g, d, eta_max)
        alpha = alpha + eta * d
        # a maximal away step zeroes one coordinate up to rounding dust
        np.maximum(alpha, 0.0, out=alpha)
    return alpha


def dca_solve(batch: BatchBoxQP, A0: np.ndarray, iters: int = 3) -> np.ndarray:
    """Run the batched d.c. iteration on every column's box QP at once.

    Splits the shared Hessian as D = rho*I - (rho*I - D) with rho its largest
    eigenvalue (required positive), then iterates the projected fixed-point
    update A <- mid(0, ((rho*I - D) A + L) / rho, U), where mid is the
    element-wise median. Each sweep cannot increase any column's objective.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    A = np.asarray(A0, dtype=float).copy()
    if A.shape != batch.L.shape:
        raise ValueError("A0 shape must match L/U")
    if np.any(A < 0) or np.any(A > batch.U):
        raise ValueError("A0 violates the box constraints")

    rho = largest_eigenvalue(batch.D)
    if rho <= 0:
        raise ValueError(f"largest eigenvalue must be positive, got {rho:g}")
    H_split = rho * np.eye(len(batch.D)) - batch.D
    for _ in range(iters):
        A = np.clip((H_split @ A + batch.L) / rho, 0.0, batch.U)
    return A
