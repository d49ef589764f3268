"""Tests for the DCC-weighted truncation errors."""

import unittest

import numpy as np
import pytest

from src.core import ConfigurationError, graded_mesh
from src.harness import TruncationStudy, fit_decay, truncation_study
from src.harness.truncation import corollary_bound, g_integrals
from tests.base import BaseNumericTest


@pytest.mark.unit
class TestTruncationReport(BaseNumericTest):
    """Test cases for single-mesh truncation reports."""

    def test_linear_function_has_no_truncation_error(self):
        report = truncation_study(graded_mesh(32, 1.0, 2.0), 0.5, 1.0)
        self.assertLess(report.max_weighted, 1e-12)
        self.assertTrue(np.all(report.lemma_bound == 0.0))
        self.assertTrue(report.bound_holds)

    def test_bound_holds_on_graded_meshes(self):
        for sigma in (0.4, 0.5, 0.75):
            for gamma in (1.0, 2.0, 3.0):
                for N in (16, 64):
                    with self.subTest(sigma=sigma, gamma=gamma, N=N):
                        report = truncation_study(graded_mesh(N, 1.0, gamma), 0.5, sigma)
                        self.assertTrue(report.bound_holds, report.to_dict())
                        self.assertLessEqual(report.worst_ratio, 1.0 + 1e-8)

    def test_bound_holds_on_random_meshes(self):
        for _ in range(5):
            mesh = self.random_mesh(int(self.rng.integers(4, 40)))
            alpha = float(self.rng.uniform(0.1, 0.9))
            self.assertTrue(truncation_study(mesh, alpha, 0.6).bound_holds)

    def test_first_cell_integral(self):
        # sigma = 1.5: |v''| = 0.75 t^(-1/2), integral of t * 0.75 t^(-1/2) over [0, s_1]
        mesh = graded_mesh(8, 1.0, 2.0)
        G = g_integrals(mesh, 1.5)
        self.assert_relative(G[0], 0.5 * mesh.s[1] ** 1.5, 1e-14)
        self.assertTrue(np.all(G > 0))

    def test_corollary_bound(self):
        mesh = graded_mesh(10, 1.0, 2.0)
        bound = corollary_bound(mesh, 0.5, 0.5)
        self.assertEqual(bound.shape, (10,))
        self.assert_relative(bound[0], 0.25 * mesh.tau[0] ** 0.5, 1e-14)
        self.assertTrue(np.all(np.diff(bound) >= 0))

    def test_rows_and_payload(self):
        report = TruncationStudy().graded(0.5, 0.5, 2.0, 8)
        self.assertEqual(report.gamma, 2.0)
        rows = report.rows()
        self.assertEqual([row["n"] for row in rows], list(range(1, 9)))
        self.assertTrue(all(row["bound_holds"] for row in rows))
        self.assertEqual(report.to_dict()["N"], 8)

    def test_invalid_sigma(self):
        with self.assertRaises(ConfigurationError):
            truncation_study(graded_mesh(4), 0.5, 0.0)


@pytest.mark.integration
class TestDecayFit(BaseNumericTest):
    """Test cases for the graded-mesh decay rate."""

    def test_slope_matches_predicted_rate(self):
        fit = TruncationStudy().decay(0.5, 0.5, 2.0, [32, 64, 128])
        self.assertEqual(fit.expected_rate, 1.0)
        self.assertLessEqual(fit.slope, -fit.expected_rate + 0.15)
        self.assertTrue(np.all(np.diff(fit.max_weighted) < 0))
        self.assertGreater(fit.constant, 0.0)

    def test_needs_two_meshes(self):
        with self.assertRaises(ConfigurationError):
            fit_decay(0.5, 0.5, 2.0, [32])


if __name__ == "__main__":
    unittest.main()
