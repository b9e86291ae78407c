import numpy as np
import pytest
from numpy.testing import assert_allclose

from mvfuse.qpsolvers import (
    BatchBoxQP,
    SimplexQP,
    afw_solve,
    dca_solve,
    exact_line_search,
    largest_eigenvalue,
)

import oracles


def rng_for(seed):
    return np.random.Generator(np.random.Philox(seed))


def random_psd(rng, v):
    M = rng.normal(size=(v, v))
    return M @ M.T


class TestLargestEigenvalue:
    def test_identity(self):
        assert_allclose(largest_eigenvalue(np.eye(3)), 1.0)

    def test_diagonal(self):
        assert_allclose(largest_eigenvalue(np.diag([1.0, 2.0, 3.0])), 3.0)

    def test_indefinite_two_by_two(self):
        D = np.array([[2.0, -4.0], [-4.0, 2.0]])
        assert_allclose(largest_eigenvalue(D), 6.0)

    def test_rayleigh_bound(self):
        rng = rng_for(2)
        for _ in range(30):
            M = rng.normal(size=(4, 4))
            D = M + M.T
            assert largest_eigenvalue(D) >= D.diagonal().max() - 1e-10

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            largest_eigenvalue(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestExactLineSearch:
    H = np.array([[2.0]])

    def test_interior_vertex(self):
        # curvature 2, slope -1 puts the vertex at 0.5
        eta = exact_line_search(self.H, np.array([-1.0]), np.array([1.0]), 1.0)
        assert_allclose(eta, 0.5)

    def test_clipped_at_eta_max(self):
        eta = exact_line_search(self.H, np.array([-10.0]), np.array([1.0]), 1.0)
        assert eta == 1.0

    def test_concave_direction_takes_boundary(self):
        eta = exact_line_search(np.array([[-1.0]]), np.array([-1.0]), np.array([1.0]), 0.3)
        assert eta == 0.3

    def test_eta_max_must_be_positive(self):
        with pytest.raises(ValueError):
            exact_line_search(self.H, np.array([-1.0]), np.array([1.0]), 0.0)


class TestAfwSolve:
    def test_corner_solution(self):
        qp = SimplexQP(H=2.0 * np.eye(2), c=np.array([2.0, 0.0]))
        for start in ([1.0, 0.0], [0.0, 1.0], [0.5, 0.5]):
            alpha = afw_solve(qp, np.array(start))
            assert_allclose(alpha, [1.0, 0.0], atol=1e-7)
            assert_allclose(qp.objective(alpha), -1.0, atol=1e-7)

    def test_symmetric_problem_keeps_uniform(self):
        for v in (2, 3, 5):
            qp = SimplexQP(H=2.0 * np.eye(v), c=np.zeros(v))
            alpha = afw_solve(qp, np.full(v, 1.0 / v))
            assert_allclose(alpha, np.full(v, 1.0 / v), atol=1e-8)

    def test_matches_face_enumeration_oracle(self):
        rng = rng_for(7)
        for trial in range(60):
            v = int(rng.integers(2, 4))
            qp = SimplexQP(H=random_psd(rng, v), c=rng.normal(size=v))
            alpha = afw_solve(qp, np.full(v, 1.0 / v))
            best, _ = oracles.simplex_qp_bruteforce(qp.H, qp.c)
            assert qp.objective(alpha) <= best + 1e-6, f"trial {trial}"

    def test_output_on_simplex_and_not_worse_than_start(self):
        rng = rng_for(8)
        for _ in range(30):
            v = 4
            M = rng.normal(size=(v, v))
            qp = SimplexQP(H=M + M.T, c=rng.normal(size=v))  # possibly indefinite
            start = rng.dirichlet(np.ones(v))
            alpha = afw_solve(qp, start)
            assert np.all(alpha >= 0)
            assert abs(alpha.sum() - 1.0) <= 1e-10
            assert qp.objective(alpha) <= qp.objective(start) + 1e-12

    def test_objective_nonincreasing_along_iterations(self):
        # both direction families are descent directions, so truncating the
        # run at any iteration count gives a non-increasing objective curve
        rng = rng_for(14)
        for _ in range(10):
            v = 4
            qp = SimplexQP(H=random_psd(rng, v), c=rng.normal(size=v))
            start = rng.dirichlet(np.ones(v))
            values = [
                qp.objective(afw_solve(qp, start, eps=0.0, max_iter=k))
                for k in range(1, 12)
            ]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))

    def test_warm_start_at_optimum_stays(self):
        qp = SimplexQP(H=2.0 * np.eye(2), c=np.array([2.0, 0.0]))
        alpha = afw_solve(qp, np.array([1.0, 0.0]))
        assert_allclose(alpha, [1.0, 0.0], atol=1e-12)

    def test_rejects_bad_start_and_nonfinite(self):
        qp = SimplexQP(H=np.eye(2), c=np.zeros(2))
        with pytest.raises(ValueError):
            afw_solve(qp, np.array([0.7, 0.7]))
        with pytest.raises(ValueError):
            afw_solve(qp, np.array([-0.2, 1.2]))
        bad = SimplexQP(H=np.eye(2), c=np.zeros(2))
        bad.c = np.array([np.nan, 0.0])
        with pytest.raises(ValueError):
            afw_solve(bad, np.array([0.5, 0.5]))


class TestDcaSolve:
    def test_separable_example(self):
        batch = BatchBoxQP(
            D=2.0 * np.eye(2),
            L=np.array([[1.0], [3.0]]),
            U=np.ones((2, 1)),
        )
        out = dca_solve(batch, batch.U.copy(), iters=1)
        assert_allclose(out[:, 0], [0.5, 1.0])

    def test_indefinite_corner(self):
        batch = BatchBoxQP(
            D=np.array([[2.0, -4.0], [-4.0, 2.0]]),
            L=np.zeros((2, 1)),
            U=np.ones((2, 1)),
        )
        out = dca_solve(batch, batch.U.copy(), iters=5)
        assert_allclose(out[:, 0], [1.0, 1.0])
        assert_allclose(batch.objective_per_column(out)[0], -2.0)

    def test_zero_start_on_psd_stays_zero(self):
        batch = BatchBoxQP(
            D=np.array([[2.0, 1.0], [1.0, 2.0]]),
            L=np.zeros((2, 3)),
            U=np.ones((2, 3)),
        )
        out = dca_solve(batch, np.zeros((2, 3)), iters=4)
        assert_allclose(out, 0.0)

    def test_box_feasible_and_monotone_per_column(self):
        rng = rng_for(12)
        for _ in range(25):
            v, cols = 3, 6
            M = rng.normal(size=(v, v))
            D = M + M.T + np.eye(v)  # keeps at least one positive eigenvalue
            if largest_eigenvalue(D) <= 0:
                continue
            U = rng.uniform(0.2, 2.0, size=(v, cols))
            batch = BatchBoxQP(D=D, L=rng.normal(size=(v, cols)), U=U)
            A0 = U * rng.uniform(0.0, 1.0, size=U.shape)
            prev = batch.objective_per_column(A0)
            for iters in range(1, 6):
                out = dca_solve(batch, A0, iters=iters)
                assert np.all(out >= 0) and np.all(out <= U + 1e-15)
                now = batch.objective_per_column(out)
                assert np.all(now <= prev + 1e-10)
                prev = now

    def test_fixed_point_equation(self):
        rng = rng_for(13)
        M = rng.normal(size=(2, 2))
        D = M + M.T + 2 * np.eye(2)
        U = rng.uniform(0.5, 1.5, size=(2, 8))
        batch = BatchBoxQP(D=D, L=rng.normal(size=(2, 8)), U=U)
        A = dca_solve(batch, U.copy(), iters=200)
        rho = largest_eigenvalue(D)
        again = np.clip(((rho * np.eye(2) - D) @ A + batch.L) / rho, 0.0, U)
        assert_allclose(again, A, atol=1e-10)

    def test_rejects_bad_start_and_nonpositive_rho(self):
        batch = BatchBoxQP(D=np.eye(2), L=np.zeros((2, 2)), U=np.ones((2, 2)))
        with pytest.raises(ValueError):
            dca_solve(batch, 2.0 * np.ones((2, 2)))
        with pytest.raises(ValueError):
            dca_solve(batch, np.zeros((2, 2)), iters=0)
        negdef = BatchBoxQP(D=-np.eye(2), L=np.zeros((2, 1)), U=np.ones((2, 1)))
        with pytest.raises(ValueError):
            dca_solve(negdef, np.zeros((2, 1)))


class TestValidation:
    def test_simplex_qp_requires_symmetry(self):
        with pytest.raises(ValueError):
            SimplexQP(H=np.array([[1.0, 2.0], [0.0, 1.0]]), c=np.zeros(2))

    def test_batch_qp_shape_checks(self):
        with pytest.raises(ValueError):
            BatchBoxQP(D=np.eye(2), L=np.zeros((2, 3)), U=np.zeros((2, 4)))
        with pytest.raises(ValueError):
            BatchBoxQP(D=np.eye(2), L=np.zeros((2, 3)), U=-np.ones((2, 3)))
