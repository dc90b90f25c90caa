"""SDP solver: known optima, certification, determinism, linear algebra."""

import math

import numpy as np
import pytest

from gamenorms import (
    CapExceeded,
    SchemaError,
    SdpProblem,
    SdpSolution,
    check_solution,
    solve,
    spectral_norm,
)


def diag_constraint(dim, i, value=1.0):
    mat = np.zeros((dim, dim))
    mat[i, i] = 1.0
    return (mat, value)


def chsh_bias_problem():
    """Maximize the CHSH bias over a correlation Gram: optimum sqrt(2)/2."""
    q = np.zeros((4, 4))
    for x in range(2):
        for y in range(2):
            sign = 1.0 if (x & y) == 0 else -1.0
            q[x, 2 + y] += sign / 8.0
            q[2 + y, x] += sign / 8.0
    eqs = tuple(diag_constraint(4, i) for i in range(4))
    return SdpProblem(dim=4, sense="maximize", objective=q, eq_constraints=eqs)


class TestKnownOptima:
    def test_one_dimensional_box(self):
        problem = SdpProblem(
            dim=1,
            sense="maximize",
            objective=np.array([[1.0]]),
            ineq_constraints=((np.array([[1.0]]), 1.0),),
        )
        sol = solve(problem)
        assert sol.status == "optimal"
        assert sol.primal_value == pytest.approx(1.0, abs=1e-7)

    def test_gram_of_aligned_unit_vectors(self):
        obj = np.array([[0.0, 1.0], [1.0, 0.0]])
        problem = SdpProblem(
            dim=2,
            sense="maximize",
            objective=obj,
            eq_constraints=(diag_constraint(2, 0), diag_constraint(2, 1)),
        )
        sol = solve(problem)
        assert sol.status == "optimal"
        assert sol.primal_value == pytest.approx(2.0, abs=1e-6)
        assert np.allclose(sol.z, np.ones((2, 2)), atol=1e-5)

    @pytest.mark.parametrize("mehrotra", [False, True])
    def test_chsh_bias(self, mehrotra):
        sol = solve(chsh_bias_problem(), mehrotra=mehrotra)
        assert sol.status == "optimal"
        assert sol.primal_value == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-6)

    def test_minimization_sense(self):
        problem = SdpProblem(
            dim=2,
            sense="minimize",
            objective=np.eye(2),
            eq_constraints=((np.array([[0.0, 0.5], [0.5, 0.0]]), 1.0),),
        )
        sol = solve(problem)
        # min trace with Z01 = 1 is 2 (at Z = all-ones).
        assert sol.status == "optimal"
        assert sol.primal_value == pytest.approx(2.0, abs=1e-6)


class TestCertification:
    def test_gap_and_residual_contract(self):
        sol = solve(chsh_bias_problem(), tol=1e-7)
        assert sol.gap <= 1e-7
        primal, dual, compl = sol.kkt_residuals
        assert primal <= 1e-6 and dual <= 1e-6
        assert abs(sol.primal_value - sol.dual_value) <= 1e-7 * (
            1.0 + abs(sol.primal_value)
        )

    def test_weak_duality_at_solution(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            n = int(rng.integers(2, 6))
            a = rng.standard_normal((n, n))
            problem = SdpProblem(
                dim=n,
                sense="maximize",
                objective=0.5 * (a + a.T),
                eq_constraints=tuple(diag_constraint(n, i) for i in range(n)),
            )
            sol = solve(problem)
            assert sol.status == "optimal"
            assert sol.dual_value >= sol.primal_value - 1e-6 * (
                1.0 + abs(sol.primal_value)
            )

    def test_check_solution_replays_residuals(self):
        problem = chsh_bias_problem()
        sol = solve(problem)
        report = check_solution(problem, sol)
        assert report.equality_residual <= 1e-6
        assert report.inequality_residual == 0.0
        assert report.eigenvalue_residual <= 1e-6
        assert report.objective_value == pytest.approx(sol.primal_value, abs=1e-12)

    def test_check_solution_flags_negative_eigenvalue(self):
        problem = SdpProblem(dim=2, sense="maximize", objective=np.eye(2))
        bad = SdpSolution(
            z=np.diag([1.0, -1.0]),
            primal_value=0.0,
            dual_value=0.0,
            gap=0.0,
            status="optimal",
            iterations=0,
            kkt_residuals=(0.0, 0.0, 0.0),
        )
        report = check_solution(problem, bad)
        assert report.eigenvalue_residual == pytest.approx(1.0, abs=1e-12)

    def test_check_solution_sees_perturbation(self):
        problem = chsh_bias_problem()
        sol = solve(problem)
        z = sol.z.copy()
        z[0, 0] += 1e-3
        poked = SdpSolution(
            z=z,
            primal_value=sol.primal_value,
            dual_value=sol.dual_value,
            gap=sol.gap,
            status="optimal",
            iterations=sol.iterations,
            kkt_residuals=sol.kkt_residuals,
        )
        report = check_solution(problem, poked)
        assert report.equality_residual == pytest.approx(1e-3, abs=1e-5)


class TestStatuses:
    def test_infeasible_instance(self):
        # Z00 <= -1 contradicts PSD-ness.
        problem = SdpProblem(
            dim=2,
            sense="maximize",
            objective=np.zeros((2, 2)),
            ineq_constraints=((np.diag([1.0, 0.0]), -1.0),),
        )
        sol = solve(problem)
        assert sol.status == "infeasible"
        assert sol.certificate is not None

    def test_determinism_bit_identical_traces(self):
        a = solve(chsh_bias_problem(), keep_trace=True)
        b = solve(chsh_bias_problem(), keep_trace=True)
        assert a.trace == b.trace
        assert np.array_equal(a.z, b.z)

    def test_tolerance_domain(self):
        with pytest.raises(SchemaError):
            solve(chsh_bias_problem(), tol=1e-3)
        with pytest.raises(SchemaError):
            solve(chsh_bias_problem(), tol=1e-11)


class TestProblemValidation:
    def test_dimension_cap(self):
        with pytest.raises(CapExceeded):
            SdpProblem(dim=600, sense="maximize", objective=np.eye(600))

    def test_constraint_cap(self):
        cons = tuple(diag_constraint(2, 0, float(k)) for k in range(30))
        with pytest.raises(CapExceeded):
            SdpProblem(
                dim=2,
                sense="maximize",
                objective=np.eye(2),
                eq_constraints=cons,
                constraint_cap=10,
            )

    def test_asymmetric_matrix_rejected(self):
        bad = np.array([[0.0, 1.0], [0.0, 0.0]])
        with pytest.raises(SchemaError, match="asymmetric"):
            SdpProblem(dim=2, sense="maximize", objective=bad)

    def test_symmetrization_of_roundoff(self):
        almost = np.array([[1.0, 0.5 + 1e-14], [0.5, 1.0]])
        problem = SdpProblem(dim=2, sense="maximize", objective=almost)
        assert np.array_equal(problem.objective, problem.objective.T)

    def test_bad_sense(self):
        with pytest.raises(SchemaError):
            SdpProblem(dim=1, sense="max", objective=np.eye(1))

    def test_dump_round_trips_entries(self):
        problem = chsh_bias_problem()
        text = problem.dump()
        assert text.startswith("dim 4\nsense maximize\n")
        assert "eqrhs 0 1.0" in text
        # Every objective triplet can be parsed back to the same floats.
        for line in text.splitlines():
            if line.startswith("obj "):
                _, i, j, value = line.split()
                assert problem.objective[int(i), int(j)] == float(value)


class TestSpectralNorm:
    def test_known_matrix(self):
        assert spectral_norm(np.diag([3.0, -5.0])) == 5.0

    def test_kron_multiplicativity(self):
        # The 2->2 norm is exactly multiplicative under Kronecker
        # products; the composition bound for the dual norm rests on it.
        rng = np.random.default_rng(11)
        for _ in range(100):
            a = rng.standard_normal((3, 3))
            b = rng.standard_normal((4, 4))
            lhs = spectral_norm(np.kron(a, b))
            rhs = spectral_norm(a) * spectral_norm(b)
            assert lhs == pytest.approx(rhs, abs=1e-10 * max(1.0, rhs))
