"""Environment-specific configuration loaders."""

import json
import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional

from src.core.errors import ConfigurationError
from .schemas import AppConfig, HarnessConfig, KernelConfig, RunConfig, SolverConfig
from .settings import RuntimeSettings, get_settings

logger = logging.getLogger(__name__)


class ConfigLoader(ABC):
    """Abstract base class for environment-specific configuration loaders."""

    @abstractmethod
    def load(self) -> AppConfig:
        """Load configuration for this environment."""
        pass


class DevelopmentConfig(ConfigLoader):
    """Configuration for development environment."""

    def load(self) -> AppConfig:
        return AppConfig(
            environment="development",
            debug=True,
            log_level="INFO",
            solver=SolverConfig(),
            kernel=KernelConfig(),
            harness=HarnessConfig(threads=1, fuzz_cases=100),
        )


class ProductionConfig(ConfigLoader):
    """Configuration for production environment, overridable through FRACWAVE_* variables."""

    def __init__(self, settings: Optional[RuntimeSettings] = None):
        self.settings = settings

    def load(self) -> AppConfig:
        settings = self.settings or get_settings()
        solver = SolverConfig().model_dump()
        for key in ("solver_rtol", "picard_tol", "picard_max_iter", "helmholtz_method"):
            value = getattr(settings, key)
            if value is not None:
                solver[key] = value

        return AppConfig(
            environment="production",
            debug=False,
            log_level=settings.log_level or "INFO",
            solver=SolverConfig(**solver),
            kernel=KernelConfig(cache_rows=True),
            harness=HarnessConfig(
                threads=settings.threads or 1,
                seed=settings.seed if settings.seed is not None else HarnessConfig().seed,
            ),
        )


class TestingConfig(ConfigLoader):
    """Configuration for testing environment."""

    def load(self) -> AppConfig:
        return AppConfig(
            environment="testing",
            debug=True,
            log_level="WARNING",  # Reduce noise in tests
            solver=SolverConfig(),
            kernel=KernelConfig(),
            harness=HarnessConfig(threads=1, fuzz_cases=10),
        )


class ConfigFactory:
    """Factory for creating environment-specific configurations."""

    @staticmethod
    def create_config(env: Optional[str] = None) -> AppConfig:
        """Create configuration for the specified environment.

        Args:
            env: Environment name ("development", "production", "testing")
                 If None, uses FRACWAVE_ENVIRONMENT or defaults to "development"

        Returns:
            AppConfig instance for the environment
        """
        env = env or get_settings().environment

        loaders = {
            "development": DevelopmentConfig(),
            "production": ProductionConfig(),
            "testing": TestingConfig(),
        }

        if env not in loaders:
            raise ConfigurationError(
                f"Unknown environment: {env}. Must be one of: {list(loaders.keys())}"
            )

        return loaders[env].load()


def load_config_file(path: Path) -> Dict[str, Any]:
    """Read a JSON config file holding RunConfig fields.

    Raises:
        ConfigurationError: unreadable file or not a JSON object
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"config_file: cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"config_file: {path} must hold a JSON object")
    return data


def _merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    out = dict(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def build_run_config(
    app: AppConfig, flags: Dict[str, Any], config_file: Optional[Path] = None
) -> RunConfig:
    """Effective run configuration: flags over config file over environment defaults.

    Raises:
        pydantic.ValidationError: a value out of range, naming the field
        ConfigurationError: unreadable config file
    """
    values: Dict[str, Any] = {
        "seed": app.harness.seed,
        "threads": app.harness.threads,
        "record_timing": app.harness.record_timing,
        "solver": app.solver.model_dump(),
        "kernel": app.kernel.model_dump(),
    }
    if config_file is not None:
        file_values = load_config_file(config_file)
        file_values.pop("config_file", None)
        values = _merge(values, file_values)
        values["config_file"] = str(config_file)
    values = _merge(values, flags)
    return RunConfig(**values)


def app_for_run(app: AppConfig, run: RunConfig) -> AppConfig:
    """AppConfig carrying the solver, kernel and harness values of a run."""
    harness = app.harness.model_copy(
        update={"threads": run.threads, "seed": run.seed, "record_timing": run.record_timing}
    )
    return app.model_copy(update={"solver": run.solver, "kernel": run.kernel, "harness": harness})
