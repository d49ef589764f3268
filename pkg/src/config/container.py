"""Simple dependency injection container"""

from typing import Any, Callable, Dict

from src.core.errors import ConfigurationError
from src.harness import ConvergenceHarness, KernelInspector, TruncationStudy
from src.schemes import Bdf2Stepper, L1Stepper, StepperOptions
from .schemas import AppConfig
from .settings import worker_cap


class Container:
    """Dependency injection container using a registry of providers."""

    def __init__(self):
        self._config: AppConfig | None = None
        self._instances: Dict[Any, Any] = {}
        self._providers: Dict[Any, Callable[["Container"], Any]] = {}

    @property
    def config(self) -> AppConfig:
        if self._config is None:
            raise ConfigurationError("Container has no configuration; call set_config first")
        return self._config

    def set_config(self, config: AppConfig) -> None:
        """Set the app config and register providers."""
        self._config = config
        self._instances.clear()
        self._providers.clear()
        threads = worker_cap(config.harness.threads)

        self._providers[StepperOptions] = lambda c: StepperOptions(
            solver_rtol=config.solver.solver_rtol,
            picard_tol=config.solver.picard_tol,
            picard_max_iter=config.solver.picard_max_iter,
            lagged_nonlinearity=config.solver.lagged_nonlinearity,
            helmholtz_method=config.solver.helmholtz_method,
            cg_rtol=config.solver.cg_rtol,
            cache_rows=config.kernel.cache_rows,
        )

        self._providers[L1Stepper] = lambda c: L1Stepper(c.get(StepperOptions))

        self._providers[Bdf2Stepper] = lambda c: Bdf2Stepper(c.get(StepperOptions))

        self._providers[ConvergenceHarness] = lambda c: ConvergenceHarness(
            options=c.get(StepperOptions),
            threads=threads,
            rel_tol=config.harness.rel_tol,
            order_tol=config.harness.order_tol,
        )

        self._providers[TruncationStudy] = lambda c: TruncationStudy(
            clamp_tol=config.kernel.clamp_tol
        )

        self._providers[KernelInspector] = lambda c: KernelInspector(
            lemma_tol=config.kernel.lemma_tol,
            clamp_tol=config.kernel.clamp_tol,
            seed=config.harness.seed,
            threads=threads,
        )

    def get(self, key: Any):
        """
        Generic resolver with caching

        Args:
            key: The requested class

        Returns:
            An initialized object of key (the requested class)
        """

        if key in self._instances:
            return self._instances[key]
        if key not in self._providers:
            raise ConfigurationError(f"No provider registered for {key}")
        instance = self._providers[key](self)
        self._instances[key] = instance
        return instance
