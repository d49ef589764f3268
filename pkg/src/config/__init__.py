"""Configuration management for FracWave."""

from .schemas import AppConfig, SolverConfig, KernelConfig, HarnessConfig, RunConfig, SUBCOMMANDS
from .settings import RuntimeSettings, get_settings, worker_cap
from .environments import ConfigFactory, build_run_config, app_for_run, load_config_file
from .container import Container

__all__ = [
    "AppConfig",
    "SolverConfig",
    "KernelConfig",
    "HarnessConfig",
    "RunConfig",
    "SUBCOMMANDS",
    "RuntimeSettings",
    "get_settings",
    "worker_cap",
    "ConfigFactory",
    "build_run_config",
    "app_for_run",
    "load_config_file",
    "Container",
]
