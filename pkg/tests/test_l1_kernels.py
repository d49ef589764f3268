"""Unit tests for the weight functions and the L1 kernel rows."""

import math
import unittest

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from src.core import ConfigurationError, KernelError, SingularEvaluationError, graded_mesh, uniform_mesh
from src.kernels import (
    FracOrder,
    L1KernelRow,
    L1KernelTable,
    discrete_caputo,
    half_level_diffs,
    l1_entry_by_quadrature,
    l1_matrix,
    l1_row,
    omega,
    power_gap,
)
from src.problems import caputo_power
from tests.base import BaseNumericTest


@pytest.mark.unit
class TestWeights(BaseNumericTest):
    """Test cases for omega and the reduced order."""

    def test_omega_values(self):
        self.assertAlmostEqual(omega(2.0, 3.0), 3.0)
        self.assertAlmostEqual(omega(1.5, 4.0), 2.0 / gamma_fn(1.5))
        self.assertEqual(omega(1.0, 0.7), 1.0)
        self.assertEqual(omega(2.5, 0.0), 0.0)
        self.assertAlmostEqual(omega(1.0, 0.37), 1.0)
        self.assertAlmostEqual(omega(2.0, 0.25), 0.25)
        self.assert_relative(omega(0.5, 1.0), 1.0 / math.sqrt(math.pi), 1e-14)
        self.assert_relative(omega(0.5, 1.0), 0.5641895835, 1e-10)

    def test_omega_singular_points(self):
        with self.assertRaises(SingularEvaluationError):
            omega(0.5, 0.0)
        with self.assertRaises(SingularEvaluationError):
            omega(1.0, 0.0)
        with self.assertRaises(SingularEvaluationError):
            omega(2.0, -1.0)

    def test_power_gap_small_cells(self):
        # x^p - (x - d)^p ~ p d x^(p - 1) when d << x
        x, d, p = 1.0, 1e-12, 0.5
        self.assert_relative(float(power_gap(x, d, p)), p * d, 1e-10)
        self.assertEqual(float(power_gap(2.0, 2.0, 0.5)), math.sqrt(2.0))

    def test_frac_order(self):
        order = FracOrder.from_beta(1.25)
        self.assertEqual(order.alpha, 0.25)
        self.assertEqual(order.beta, 1.25)
        for bad in (0.0, 1.0, -0.2):
            with self.subTest(alpha=bad):
                with self.assertRaises(ConfigurationError):
                    FracOrder(bad)


@pytest.mark.unit
class TestL1Rows(BaseNumericTest):
    """Test cases for the closed-form L1 rows."""

    def test_leading_entry(self):
        mesh = graded_mesh(20, 1.0, 2.0)
        alpha = 0.4
        for n in (1, 5, 20):
            with self.subTest(n=n):
                expected = mesh.tau_half[n - 1] ** (-alpha) / gamma_fn(2.0 - alpha)
                self.assert_relative(l1_row(mesh, alpha, n).a[0], expected, 1e-13)

    def test_unit_step_values(self):
        mesh = uniform_mesh(2, 2.0)
        self.assert_relative(l1_row(mesh, 0.5, 1).a[0], 1.5957691216, 1e-10)
        self.assert_relative(l1_row(mesh, 0.5, 2).a[0], 1.1283791671, 1e-10)
        self.assert_relative(l1_row(mesh, 0.5, 1).a[0], l1_entry_by_quadrature(mesh, 0.5, 1, 1), 1e-11)

    def test_matches_quadrature(self):
        mesh = graded_mesh(12, 1.0, 2.0)
        for alpha in (0.1, 0.5, 0.9):
            table = L1KernelTable(mesh, alpha)
            for n in (1, 6, 12):
                row = table.row(n)
                for k in range(1, n + 1):
                    with self.subTest(alpha=alpha, n=n, k=k):
                        self.assert_relative(
                            l1_entry_by_quadrature(mesh, alpha, n, k), row.a[n - k], 1e-11
                        )

    def test_matches_quadrature_on_random_meshes(self):
        for _ in range(10):
            N = int(self.rng.integers(2, 30))
            mesh = self.random_mesh(N)
            alpha = float(self.rng.uniform(0.05, 0.95))
            n = int(self.rng.integers(1, N + 1))
            row = l1_row(mesh, alpha, n)
            for k in range(1, n + 1):
                with self.subTest(N=N, alpha=alpha, n=n, k=k):
                    self.assert_relative(l1_entry_by_quadrature(mesh, alpha, n, k), row.a[n - k], 1e-10)

    def test_rows_positive_and_decreasing(self):
        table = L1KernelTable(graded_mesh(30, 1.0, 3.0), 0.7)
        for row in table.rows():
            self.assertTrue(np.all(row.a > 0))
            self.assertTrue(np.all(np.diff(row.a) <= 0))

    def test_matrix_layout(self):
        table = L1KernelTable(graded_mesh(5, 1.0, 2.0), 0.5)
        A = table.matrix()
        self.assertEqual(A.shape, (5, 5))
        np.testing.assert_array_equal(A[2, :3], table.row(3).a)
        self.assertTrue(np.all(A[2, 3:] == 0))
        np.testing.assert_array_equal(l1_matrix(table.rows()), A)

    def test_cache(self):
        table = L1KernelTable(graded_mesh(5), 0.5, cache=True)
        self.assertIs(table.row(3), table.row(3))
        uncached = L1KernelTable(graded_mesh(5), 0.5, cache=False)
        self.assertIsNot(uncached.row(3), uncached.row(3))

    def test_bad_indices(self):
        mesh = graded_mesh(5)
        with self.assertRaises(KernelError):
            l1_row(mesh, 0.5, 0)
        with self.assertRaises(KernelError):
            l1_row(mesh, 0.5, 6)
        with self.assertRaises(KernelError):
            L1KernelRow(3, np.ones(2))


@pytest.mark.unit
class TestDiscreteCaputo(BaseNumericTest):
    """Test cases for the discrete Caputo sum."""

    def test_exact_on_linear_functions(self):
        for alpha in (0.2, 0.5, 0.95):
            mesh = graded_mesh(25, 1.0, 2.5)
            table = L1KernelTable(mesh, alpha)
            diffs = half_level_diffs(mesh, lambda t: 3.0 * t - 1.0)
            for n in (1, 10, 25):
                with self.subTest(alpha=alpha, n=n):
                    value = discrete_caputo(table.rows(n), diffs[:n])
                    exact = 3.0 * caputo_power(alpha, 1.0, mesh.s[n])
                    self.assert_relative(value, exact, 1e-12)

    def test_linear_in_differences(self):
        mesh = graded_mesh(15, 1.0, 2.0)
        row = l1_row(mesh, 0.6, 15)
        diffs = self.rng.standard_normal(15)
        for c in (3.7, -0.25, 1e3):
            with self.subTest(c=c):
                scale = abs(c) * float(np.sum(np.abs(row.a[::-1] * diffs)))
                self.assertAlmostEqual(
                    discrete_caputo(row, c * diffs), c * discrete_caputo(row, diffs), delta=1e-14 * scale
                )
        self.assertEqual(discrete_caputo(row, np.zeros(15)), 0.0)

    def test_constant_function_gives_zero(self):
        mesh = uniform_mesh(10)
        row = l1_row(mesh, 0.5, 10)
        self.assertEqual(discrete_caputo(row, half_level_diffs(mesh, lambda t: 2.0)), 0.0)

    def test_converges_for_smooth_function(self):
        alpha = 0.5
        errors = []
        for N in (20, 40, 80):
            mesh = uniform_mesh(N)
            row = l1_row(mesh, alpha, N)
            value = discrete_caputo(row, half_level_diffs(mesh, lambda t: t**2))
            errors.append(abs(value - caputo_power(alpha, 2.0, mesh.s[N])))
        self.assertLess(errors[1], errors[0])
        self.assertLess(errors[2], errors[1])

    def test_length_mismatch(self):
        mesh = uniform_mesh(4)
        with self.assertRaises(KernelError):
            discrete_caputo(l1_row(mesh, 0.5, 4), np.ones(3))


if __name__ == "__main__":
    unittest.main()
