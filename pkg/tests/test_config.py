"""Unit tests for configuration schemas, loaders and the container."""

import json
import os
import unittest
from pathlib import Path
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from src.config import (
    AppConfig,
    ConfigFactory,
    Container,
    RunConfig,
    RuntimeSettings,
    app_for_run,
    build_run_config,
    worker_cap,
)
from src.config.environments import ProductionConfig
from src.core import ConfigurationError
from src.harness import ConvergenceHarness, KernelInspector, TruncationStudy
from src.schemes import L1Stepper, StepperOptions
from tests.base import TempDirTestCase


def field_names(exc: ValidationError) -> set:
    return {str(error["loc"][0]) for error in exc.errors() if error["loc"]}


@pytest.mark.unit
class TestRunConfig(unittest.TestCase):
    """Test cases for RunConfig validation."""

    def test_defaults(self):
        run = RunConfig(subcommand="run")
        self.assertEqual(run.problem, "example51")
        self.assertEqual(run.sigma, 0.5)
        self.assertEqual(run.N_list, [40])
        self.assertEqual(run.effective_alpha, 0.5)
        self.assertEqual(run.seed, 0x5EED)

    def test_out_of_range_values_name_their_field(self):
        cases = [
            ({"N": 0}, "N"),
            ({"beta": 2.0}, "beta"),
            ({"M": 7}, "M"),
            ({"gamma": 0.5}, "gamma"),
            ({"sigma": 1.0}, "sigma"),
            ({"N_list": [40, 60]}, "N_list"),
            ({"alpha": 1.0}, "alpha"),
        ]
        for values, name in cases:
            with self.subTest(field=name):
                with self.assertRaises(ValidationError) as ctx:
                    RunConfig(subcommand="convergence", **values)
                self.assertIn(name, field_names(ctx.exception))

    def test_unknown_keys_rejected(self):
        with self.assertRaises(ValidationError):
            RunConfig(subcommand="run", resolution=10)
        with self.assertRaises(ValidationError):
            RunConfig(subcommand="run", solver={"tolerance": 1.0})

    def test_combinations(self):
        with self.assertRaises(ValidationError):
            RunConfig(subcommand="run", problem="custom")
        with self.assertRaisesRegex(ValidationError, "experimental_bdf2"):
            RunConfig(subcommand="bdf2-compare")
        with self.assertRaises(ValidationError):
            RunConfig(subcommand="bdf2-compare", problem="example52", experimental_bdf2=True)
        with self.assertRaises(ValidationError):
            RunConfig(subcommand="run", N=10, snapshots=[20])

    def test_snapshots_sorted(self):
        run = RunConfig(subcommand="run", N=10, snapshots=[5, 0, 5, 2])
        self.assertEqual(run.snapshots, [0, 2, 5])

    def test_round_trip(self):
        run = RunConfig(subcommand="convergence", N_list=[10, 20], gamma=2.0)
        again = RunConfig(**json.loads(run.model_dump_json()))
        self.assertEqual(again, run)


@pytest.mark.unit
class TestConfigLoading(TempDirTestCase):
    """Test cases for environments and precedence."""

    def test_factory(self):
        self.assertEqual(ConfigFactory.create_config("testing").log_level, "WARNING")
        self.assertTrue(ConfigFactory.create_config("development").debug)
        with self.assertRaises(ValueError):
            ConfigFactory.create_config("staging")

    def test_factory_reads_environment_variable(self):
        with patch.dict(os.environ, {"FRACWAVE_ENVIRONMENT": "testing"}):
            self.assertEqual(ConfigFactory.create_config().environment, "testing")

    def test_production_overrides(self):
        settings = RuntimeSettings(threads=4, solver_rtol=1e-8, log_level="DEBUG")
        app = ProductionConfig(settings).load()
        self.assertEqual(app.harness.threads, 4)
        self.assertEqual(app.solver.solver_rtol, 1e-8)
        self.assertEqual(app.log_level, "DEBUG")

    def test_log_level_validation(self):
        self.assertEqual(AppConfig(log_level="debug").log_level, "DEBUG")
        with self.assertRaises(ValidationError):
            AppConfig(log_level="LOUD")

    def test_precedence(self):
        app = ConfigFactory.create_config("testing")
        path = self.tmpdir / "config.json"
        path.write_text(json.dumps({"beta": 1.3, "M": 32, "solver": {"picard_tol": 1e-9}}))
        run = build_run_config(app, {"subcommand": "run", "M": 16}, path)
        self.assertEqual(run.beta, 1.3)
        self.assertEqual(run.M, 16)
        self.assertEqual(run.solver.picard_tol, 1e-9)
        self.assertEqual(run.solver.solver_rtol, app.solver.solver_rtol)
        self.assertEqual(run.config_file, path)

    def test_bad_config_file(self):
        app = ConfigFactory.create_config("testing")
        with self.assertRaisesRegex(ConfigurationError, "config_file"):
            build_run_config(app, {"subcommand": "run"}, self.tmpdir / "missing.json")
        path = self.tmpdir / "list.json"
        path.write_text("[1, 2]")
        with self.assertRaises(ConfigurationError):
            build_run_config(app, {"subcommand": "run"}, path)


@pytest.mark.unit
class TestWorkerCap(unittest.TestCase):
    """Test cases for FRACWAVE_THREADS."""

    def test_cap(self):
        self.assertEqual(worker_cap(8, RuntimeSettings(threads=2)), 2)
        self.assertEqual(worker_cap(1, RuntimeSettings(threads=2)), 1)
        self.assertEqual(worker_cap(0, RuntimeSettings()), 1)

    def test_cap_from_environment(self):
        with patch.dict(os.environ, {"FRACWAVE_THREADS": "3"}):
            self.assertEqual(worker_cap(16), 3)


@pytest.mark.unit
class TestContainer(unittest.TestCase):
    """Test cases for the service container."""

    def setUp(self):
        app = ConfigFactory.create_config("testing")
        run = RunConfig(subcommand="run", threads=4, solver={"helmholtz_method": "cg"})
        self.container = Container()
        with patch.dict(os.environ, {"FRACWAVE_THREADS": "2"}):
            self.container.set_config(app_for_run(app, run))

    def test_services(self):
        options = self.container.get(StepperOptions)
        self.assertEqual(options.helmholtz_method, "cg")
        self.assertIs(self.container.get(L1Stepper).options, options)
        self.assertEqual(self.container.get(ConvergenceHarness).threads, 2)
        self.assertEqual(self.container.get(KernelInspector).seed, 0x5EED)
        self.assertIsInstance(self.container.get(TruncationStudy), TruncationStudy)
        self.assertIs(self.container.get(L1Stepper), self.container.get(L1Stepper))

    def test_unknown_service(self):
        with self.assertRaises(ValueError):
            self.container.get(Path)

    def test_unconfigured(self):
        with self.assertRaises(ValueError):
            Container().config


if __name__ == "__main__":
    unittest.main()
