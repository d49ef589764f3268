"""Unit tests for the variable-step BDF2 kernels."""

import unittest

import numpy as np
import pytest

from src.core import KernelError, graded_mesh
from src.kernels import (
    bdf2_caputo,
    bdf2_entries_by_quadrature,
    bdf2_row,
    integer_kernels,
    step_ratios,
)
from src.problems import caputo_power
from tests.base import BaseNumericTest


@pytest.mark.unit
class TestBdf2Kernels(BaseNumericTest):
    """Test cases for the BDF2 rows."""

    def setUp(self):
        super().setUp()
        self.mesh = graded_mesh(10, 1.0, 1.5)

    def test_step_ratios(self):
        r = step_ratios(self.mesh)
        self.assertEqual(r[0], 0.0)
        self.assert_allclose(r[1:], self.mesh.tau[1:] / self.mesh.tau[:-1])

    def test_closed_forms_match_quadrature(self):
        for alpha in (0.25, 0.5, 0.75):
            for n in (1, 4, 10):
                abar, varpi = integer_kernels(self.mesh, alpha, n)
                scale = float(np.max(np.abs(abar)))
                for k in range(1, n + 1):
                    with self.subTest(alpha=alpha, n=n, k=k):
                        q_abar, q_varpi = bdf2_entries_by_quadrature(self.mesh, alpha, n, k)
                        self.assertLessEqual(abs(abar[n - k] - q_abar), 1e-11 * scale)
                        self.assertLessEqual(abs(varpi[n - k] - q_varpi), 1e-11 * scale)

    def test_without_correction(self):
        row = bdf2_row(self.mesh, 0.5, 7, include_correction=False)
        np.testing.assert_array_equal(row.B, row.abar)
        first = bdf2_row(self.mesh, 0.5, 1)
        np.testing.assert_array_equal(first.B, first.abar)

    def test_exact_on_linear_functions(self):
        alpha = 0.4
        diffs = 2.0 * self.mesh.tau
        for n in (1, 5, 10):
            with self.subTest(n=n):
                value = bdf2_caputo(bdf2_row(self.mesh, alpha, n), diffs[:n])
                self.assert_relative(value, 2.0 * caputo_power(alpha, 1.0, self.mesh.t[n]), 1e-12)

    def test_exact_on_quadratics(self):
        alpha = 0.6
        diffs = np.diff(self.mesh.t**2)
        for n in (2, 6, 10):
            with self.subTest(n=n):
                value = bdf2_caputo(bdf2_row(self.mesh, alpha, n), diffs[:n])
                self.assert_relative(value, caputo_power(alpha, 2.0, self.mesh.t[n]), 1e-10)

    def test_errors(self):
        with self.assertRaises(KernelError):
            bdf2_row(self.mesh, 0.5, 0)
        with self.assertRaises(KernelError):
            bdf2_row(self.mesh, 0.5, 11)
        with self.assertRaises(KernelError):
            bdf2_caputo(bdf2_row(self.mesh, 0.5, 3), np.ones(2))


if __name__ == "__main__":
    unittest.main()
