"""Configuration schemas with validation."""

import math
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

SUBCOMMANDS = ("run", "convergence", "kernels-check", "truncation", "bdf2-compare")
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
DEFAULT_SEED = 0x5EED


class SolverConfig(BaseModel):
    """Per-step solver tolerances."""

    solver_rtol: float = Field(default=1e-10, gt=0.0, lt=1.0)
    picard_tol: float = Field(default=1e-12, gt=0.0, lt=1.0)
    picard_max_iter: int = Field(default=50, ge=1, le=10_000)
    lagged_nonlinearity: bool = Field(default=False)
    helmholtz_method: Literal["fft", "cg"] = Field(default="fft")
    cg_rtol: float = Field(default=1e-12, gt=0.0, lt=1.0)

    model_config = {"extra": "forbid"}


class KernelConfig(BaseModel):
    """Kernel evaluation and property-check tolerances."""

    clamp_tol: float = Field(default=1e-14, ge=0.0, lt=1e-6)
    lemma_tol: float = Field(default=1e-13, ge=0.0, lt=1e-3)
    cache_rows: bool = Field(default=False)

    model_config = {"extra": "forbid"}


class HarnessConfig(BaseModel):
    """Convergence and fuzz suite settings."""

    threads: int = Field(default=1, ge=1, le=1024)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    fuzz_cases: int = Field(default=100, ge=0)
    record_timing: bool = Field(default=False)
    rel_tol: float = Field(default=0.1, gt=0.0)
    order_tol: float = Field(default=0.1, gt=0.0)

    model_config = {"extra": "forbid"}


class AppConfig(BaseModel):
    """Main application configuration."""

    environment: str = Field(default="development")
    debug: bool = Field(default=False)
    log_level: str = Field(default="INFO")

    # Nested configurations
    solver: SolverConfig = Field(default_factory=SolverConfig)
    kernel: KernelConfig = Field(default_factory=KernelConfig)
    harness: HarnessConfig = Field(default_factory=HarnessConfig)

    @field_validator("log_level")
    def validate_log_level(cls, v):
        if v.upper() not in LOG_LEVELS:
            raise ValueError(f"Log level must be one of: {LOG_LEVELS}")
        return v.upper()

    model_config = {"extra": "forbid"}


class RunConfig(BaseModel):
    """Effective configuration of one CLI invocation.

    Times are in the units of T, lengths in the units of L.
    """

    subcommand: Literal["run", "convergence", "kernels-check", "truncation", "bdf2-compare"]
    problem: Literal["example51", "example52", "custom"] = Field(default="example51")
    beta: float = Field(default=1.5, gt=1.0, lt=2.0)
    sigma: Optional[float] = Field(default=None, gt=0.0, lt=2.0)
    gamma: float = Field(default=1.0, ge=1.0, le=20.0)
    N: int = Field(default=40, ge=1)
    N_list: Optional[List[int]] = Field(default=None)
    M: int = Field(default=64, ge=4)
    L: float = Field(default=2.0 * math.pi, gt=0.0)
    T: float = Field(default=1.0, gt=0.0)
    eps: float = Field(default=1.0, gt=0.0)
    alpha: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    norm: Literal["max", "l2"] = Field(default="max")
    output_dir: Path = Field(default=Path("out"))
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    threads: int = Field(default=1, ge=1, le=1024)
    mesh_file: Optional[Path] = Field(default=None)
    forcing_dir: Optional[Path] = Field(default=None)
    snapshots: List[int] = Field(default_factory=list)
    experimental_bdf2: bool = Field(default=False)
    dcc: bool = Field(default=False)
    fuzz_cases: int = Field(default=0, ge=0)
    floor_probe: bool = Field(default=False)
    config_file: Optional[Path] = Field(default=None)
    record_timing: bool = Field(default=False)
    solver: SolverConfig = Field(default_factory=SolverConfig)
    kernel: KernelConfig = Field(default_factory=KernelConfig)

    @field_validator("M")
    def validate_M(cls, v):
        if v % 2:
            raise ValueError(f"M must be even, got {v}")
        return v

    @field_validator("sigma")
    def validate_sigma(cls, v):
        if v is not None and v == 1.0:
            raise ValueError("sigma = 1 is excluded; choose sigma in (0, 1) or (1, 2)")
        return v

    @field_validator("N_list")
    def validate_N_list(cls, v):
        if v is None:
            return v
        if not v or any(N < 1 for N in v):
            raise ValueError("N_list entries must be positive")
        if any(fine != 2 * coarse for coarse, fine in zip(v, v[1:])):
            raise ValueError(f"N_list must double at each entry, got {v}")
        return v

    @field_validator("snapshots")
    def validate_snapshots(cls, v):
        if any(n < 0 for n in v):
            raise ValueError("snapshot steps must be non-negative")
        return sorted(set(v))

    @model_validator(mode="after")
    def check_combination(self):
        if self.problem == "custom" and self.forcing_dir is None:
            raise ValueError("forcing_dir is required for the custom problem")
        if self.problem == "example51" and self.sigma is None:
            self.sigma = self.beta - 1.0
        if self.problem == "example52" and self.subcommand == "bdf2-compare":
            raise ValueError("problem example52 is nonlinear; bdf2-compare supports linear problems only")
        if self.subcommand == "bdf2-compare" and not self.experimental_bdf2:
            raise ValueError("experimental_bdf2 must be set to run bdf2-compare")
        if self.N_list is None:
            self.N_list = [self.N]
        if any(n > self.N for n in self.snapshots) and self.subcommand == "run":
            raise ValueError(f"snapshots must not exceed N={self.N}")
        return self

    @property
    def effective_alpha(self) -> float:
        return self.alpha if self.alpha is not None else self.beta - 1.0

    model_config = {"extra": "forbid"}
