"""The two QP kernels, run standalone.

First a quadratic over the probability simplex solved with away-step
Frank-Wolfe, checked against exhaustive face enumeration. Then a batch of
box-constrained QPs sharing one indefinite Hessian, solved all at once by the
d.c. splitting iteration, with the per-column objective printed per sweep.
"""

import itertools

import numpy as np

from mvfuse import BatchBoxQP, SimplexQP, afw_solve, dca_solve, largest_eigenvalue

rng = np.random.Generator(np.random.Philox(1))

# --- simplex QP ----------------------------------------------------------
M = rng.normal(size=(3, 3))
qp = SimplexQP(H=M @ M.T, c=rng.normal(size=3))
alpha = afw_solve(qp, np.full(3, 1 / 3))
print("simplex QP")
print("  solution        :", np.round(alpha, 6))
print("  objective       :", f"{qp.objective(alpha):.8f}")

best = np.inf
for r in range(1, 4):
    for face in itertools.combinations(range(3), r):
        idx = list(face)
        kkt = np.zeros((r + 1, r + 1))
        kkt[:r, :r] = qp.H[np.ix_(idx, idx)]
        kkt[:r, r] = kkt[r, :r] = 1.0
        sol, *_ = np.linalg.lstsq(kkt, np.r_[qp.c[idx], 1.0], rcond=None)
        if np.all(sol[:r] >= -1e-9):
            a = np.zeros(3)
            a[idx] = np.clip(sol[:r], 0, None)
            a /= a.sum()
            best = min(best, qp.objective(a))
print("  face enumeration:", f"{best:.8f}")

# --- batched box QPs ------------------------------------------------------
D = np.array([[2.0, -4.0], [-4.0, 2.0]])  # indefinite: eigenvalues -2 and 6
L = rng.normal(size=(2, 6))
U = rng.uniform(0.5, 1.5, size=(2, 6))
batch = BatchBoxQP(D=D, L=L, U=U)
print("\nbatched box QPs (shared indefinite Hessian, largest eigenvalue "
      f"{largest_eigenvalue(D):.1f})")
A = U.copy()
print("  start objectives:", np.round(batch.objective_per_column(A), 4))
for sweep in range(1, 4):
    A = dca_solve(batch, U.copy(), iters=sweep)
    print(f"  after sweep {sweep}  :", np.round(batch.objective_per_column(A), 4))
print("  solution stays inside the box:",
      bool(np.all(A >= 0) and np.all(A <= U)))
