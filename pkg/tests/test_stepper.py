"""Tests for the L1 and BDF2 time steppers."""

import unittest

import numpy as np
import pytest

from src.core import (
    ConfigurationError,
    Grid2D,
    HelmholtzSolver,
    KernelError,
    PicardDivergenceError,
    SolverError,
    graded_mesh,
    norm_max,
    uniform_mesh,
)
from src.kernels import L1KernelTable
from src.problems import ProblemSpec, example_51, example_52, linear_in_time, quadratic_in_time
from src.schemes import (
    EXPERIMENTAL_NOTE,
    Bdf2Stepper,
    L1Stepper,
    SchemeState,
    StepperOptions,
    assemble_history,
    bdf2_run,
    initial_state,
    run,
    step_linear,
    step_semilinear,
)
from tests.base import BaseNumericTest


@pytest.mark.unit
class TestHistory(BaseNumericTest):
    """Test cases for the velocity history and its kernel sum."""

    def setUp(self):
        super().setUp()
        self.mesh = graded_mesh(8, 1.0, 2.0)
        self.grid = Grid2D(4)
        self.solver = HelmholtzSolver(self.grid)
        self.table = L1KernelTable(self.mesh, 0.5)

    def test_constant_velocity(self):
        v0 = np.full(self.grid.shape, 3.0)
        levels = [np.zeros(self.grid.shape)]
        for n in range(1, 6):
            levels.append(3.0 * self.mesh.t[n] * np.ones(self.grid.shape))
        state = SchemeState.from_snapshots(levels, v0, self.mesh, self.grid, 0.5, self.solver)
        self.assertEqual(state.n, 6)
        row = self.table.row(6)
        H = assemble_history(state, row)
        w_last = state.w_hist[-1]
        self.assert_allclose(H + row.a[0] * w_last, np.zeros(self.grid.shape), atol=1e-12 * row.a[0])
        self.assert_allclose(state.velocity(), v0)

    def test_first_step_history(self):
        v0 = self.rng.standard_normal(self.grid.shape)
        state = SchemeState(self.mesh, self.grid, 0.5, self.grid.zeros(), v0, self.solver)
        row = self.table.row(1)
        self.assert_allclose(assemble_history(state, row), -row.a[0] * v0)

    def test_wrong_row(self):
        state = SchemeState(self.mesh, self.grid, 0.5, self.grid.zeros(), self.grid.zeros(), self.solver)
        with self.assertRaises(KernelError):
            assemble_history(state, self.table.row(2))

    def test_history_is_read_only(self):
        state = SchemeState(self.mesh, self.grid, 0.5, self.grid.zeros(), self.grid.zeros(), self.solver)
        state.append(np.ones(self.grid.shape))
        with self.assertRaises(ValueError):
            state.w_hist[0, 0, 0] = 1.0


@pytest.mark.unit
class TestL1Stepper(BaseNumericTest):
    """Test cases for the half-level L1 scheme."""

    def setUp(self):
        super().setUp()
        self.grid = Grid2D(8)

    def test_linear_in_time_is_exact(self):
        for beta in (1.2, 1.5, 1.9):
            with self.subTest(beta=beta):
                report = run(linear_in_time(beta), graded_mesh(16, 1.0, 2.0), self.grid)
                self.assertLess(float(np.max(np.abs(report.u_final - 2.0))), 1e-10)
                self.assertLess(float(np.max(np.abs(report.v_final - 1.0))), 1e-10)

    def test_quadratic_in_time_is_exact(self):
        for beta in (1.3, 1.7):
            with self.subTest(beta=beta):
                problem = quadratic_in_time(beta)
                mesh = graded_mesh(20, 1.0, 3.0)
                report = run(problem, mesh, self.grid)
                e_max, _ = report.errors(problem.exact(self.grid, 1.0))
                self.assertLess(e_max, 1e-10)

    def test_exact_on_random_configs(self):
        grid = Grid2D(4)
        for _ in range(10):
            beta = float(self.rng.uniform(1.05, 1.95))
            gamma = float(self.rng.uniform(1.0, 4.0))
            N = int(self.rng.integers(2, 101))
            mesh = graded_mesh(N, 1.0, gamma)
            for problem in (linear_in_time(beta), quadratic_in_time(beta)):
                with self.subTest(problem=problem.name, beta=beta, gamma=gamma, N=N):
                    report = run(problem, mesh, grid)
                    e_max, _ = report.errors(problem.exact(grid, 1.0))
                    self.assertLessEqual(e_max, 1e-10)

    def test_report(self):
        problem = example_51(1.5, 0.5)
        report = L1Stepper().run(problem, graded_mesh(10, 1.0, 2.0), self.grid, snapshots=(0, 5))
        self.assertEqual(sorted(report.snapshots), [0, 5])
        self.assertEqual(len(report.stats), 10)
        self.assertEqual(report.total_picard_iterations, 0)
        summary = report.summary(problem.exact(self.grid, 1.0))
        self.assertEqual(summary["scheme"], "l1")
        self.assertNotIn("wall_ms", summary)
        self.assertLess(summary["e_max"], 0.1)
        self.assertIsNone(report.summary()["e_max"])

    def test_cg_matches_fft(self):
        problem = example_51(1.5, 0.5)
        mesh = graded_mesh(8, 1.0, 2.0)
        fft_report = run(problem, mesh, self.grid)
        cg_report = run(problem, mesh, self.grid, StepperOptions(helmholtz_method="cg", solver_rtol=1e-9))
        self.assert_allclose(cg_report.u_final, fft_report.u_final, rtol=0, atol=1e-9)

    def test_residual_above_tolerance(self):
        problem = example_51(1.5, 0.5)
        with self.assertRaises(SolverError) as ctx:
            run(problem, uniform_mesh(4), self.grid, StepperOptions(solver_rtol=1e-300))
        self.assertEqual(ctx.exception.step, 1)


@pytest.mark.unit
class TestSemilinearStepper(BaseNumericTest):
    """Test cases for the cubic Klein-Gordon steps."""

    def setUp(self):
        super().setUp()
        self.grid = Grid2D(8)
        self.mesh = graded_mesh(10, 1.0, 2.0)
        self.problem = example_52(1.5)

    def test_picard_converges(self):
        report = run(self.problem, self.mesh, self.grid)
        self.assertTrue(all(s.picard_iterations >= 2 for s in report.stats))
        e_max, _ = report.errors(self.problem.exact(self.grid, 1.0))
        self.assertLess(e_max, 0.1)

    def test_lagged_nonlinearity(self):
        picard = run(self.problem, self.mesh, self.grid)
        lagged = run(self.problem, self.mesh, self.grid, StepperOptions(lagged_nonlinearity=True))
        self.assertTrue(all(s.picard_iterations == 1 for s in lagged.stats))
        self.assertLess(float(np.max(np.abs(lagged.u_final - picard.u_final))), 0.1)

    def test_picard_stalls(self):
        with self.assertRaises(PicardDivergenceError) as ctx:
            run(self.problem, self.mesh, self.grid, StepperOptions(picard_max_iter=1))
        self.assertEqual(ctx.exception.step, 1)
        self.assertEqual(ctx.exception.iterations, 1)

    def test_eps_mismatch(self):
        state = initial_state(self.problem, self.mesh, self.grid, StepperOptions())
        with self.assertRaises(ConfigurationError):
            step_semilinear(state, self.grid.zeros(), eps=0.5)


@pytest.mark.unit
class TestBdf2Stepper(BaseNumericTest):
    """Test cases for the experimental BDF2 scheme."""

    def setUp(self):
        super().setUp()
        self.grid = Grid2D(8)

    def test_linear_in_time_is_exact(self):
        report = bdf2_run(linear_in_time(1.5), graded_mesh(16, 1.0, 2.0), self.grid)
        self.assertLess(float(np.max(np.abs(report.u_final - 2.0))), 1e-10)
        self.assertIn(EXPERIMENTAL_NOTE, report.notes)

    def test_rejects_nonlinear_problems(self):
        with self.assertRaises(ConfigurationError):
            bdf2_run(example_52(1.5), uniform_mesh(4), self.grid)

    def test_service_wrapper(self):
        problem = example_51(1.5, 0.5)
        mesh = graded_mesh(10, 1.0, 2.0)
        report = Bdf2Stepper().run(problem, mesh, self.grid, snapshots=(3,))
        self.assertEqual(report.scheme, "bdf2")
        self.assertEqual(list(report.snapshots), [3])
        plain = Bdf2Stepper().run(problem, mesh, self.grid, include_correction=False)
        self.assertFalse(np.array_equal(plain.u_final, report.u_final))


@pytest.mark.unit
class TestStepperInvariants(BaseNumericTest):
    """Test cases for linearity, zero data, stability and restarts."""

    def setUp(self):
        super().setUp()
        self.grid = Grid2D(8)
        self.mesh = graded_mesh(12, 1.0, 2.0)

    def forced(self, f, name="forced"):
        return ProblemSpec(name=name, beta=1.5, f=f)

    def test_superposition(self):
        def f1(X, Y, t):
            return np.sin(X) * np.sin(Y) * (1.0 + t)

        def f2(X, Y, t):
            return np.cos(2.0 * X) * t**0.3

        both = run(self.forced(lambda X, Y, t: f1(X, Y, t) + f2(X, Y, t)), self.mesh, self.grid)
        first = run(self.forced(f1), self.mesh, self.grid)
        second = run(self.forced(f2), self.mesh, self.grid)
        scale = norm_max(both.u_final)
        self.assert_allclose(both.u_final, first.u_final + second.u_final, rtol=0, atol=1e-12 * scale)

    def test_zero_data_gives_zero_solution(self):
        problem = self.forced(lambda X, Y, t: np.zeros_like(X), name="zero")
        for scheme in (run, bdf2_run):
            with self.subTest(scheme=scheme.__name__):
                report = scheme(problem, self.mesh, self.grid)
                self.assertEqual(norm_max(report.u_final), 0.0)
                self.assertEqual(norm_max(report.v_final), 0.0)

    def test_stable_on_strongly_graded_mesh(self):
        problem = self.forced(lambda X, Y, t: np.sin(X) * np.sin(Y) * np.cos(5.0 * t))
        report = run(problem, graded_mesh(200, 1.0, 5.0), Grid2D(32))
        self.assertTrue(np.all(np.isfinite(report.u_final)))
        self.assertLess(norm_max(report.u_final), 1.0)

    def test_restart_from_snapshots(self):
        problem = example_51(1.5, 0.5)
        N = self.mesh.N
        options = StepperOptions(snapshots=tuple(range(N + 1)), keep_state=True)
        report = run(problem, self.mesh, self.grid, options)
        self.assertIsNotNone(report.state)
        self.assertIsNone(run(problem, self.mesh, self.grid).state)

        n = 6
        levels = [report.snapshots[k] for k in range(n)]
        state = SchemeState.from_snapshots(
            levels,
            problem.initial_velocity(self.grid),
            self.mesh,
            self.grid,
            problem.alpha,
            HelmholtzSolver(self.grid),
        )
        np.testing.assert_array_equal(state.w_hist, report.state.w_hist[: n - 1])

        table = L1KernelTable(self.mesh, problem.alpha)
        for step in range(n, N + 1):
            f_half = problem.forcing(self.grid, float(self.mesh.t_half[step - 1]))
            step_linear(state, f_half, table.row(step))
        self.assert_allclose(state.w_hist, report.state.w_hist, rtol=0, atol=1e-12)
        self.assert_allclose(state.u_prev, report.u_final, rtol=0, atol=1e-13)


if __name__ == "__main__":
    unittest.main()
