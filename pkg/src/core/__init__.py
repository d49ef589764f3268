"""Core data structures: time meshes, periodic grids and fields"""

from .errors import (
    FracWaveError,
    ConfigurationError,
    MeshConditionError,
    SingularEvaluationError,
    KernelError,
    GridError,
    IndefiniteOperatorError,
    SolverError,
    PicardDivergenceError,
)

from .timemesh import (
    TimeMesh,
    graded_mesh,
    uniform_mesh,
    validate_mesh,
    load_mesh,
    random_admissible_mesh,
)

from .spacegrid import (
    Grid2D,
    Field2D,
    HelmholtzSolver,
    laplacian,
    inner,
    norm_l2,
    norm_max,
    helmholtz_apply,
    helmholtz_solve,
)

from .fieldio import read_field, write_field, encode_field, decode_field

__all__ = [
    "FracWaveError",
    "ConfigurationError",
    "MeshConditionError",
    "SingularEvaluationError",
    "KernelError",
    "GridError",
    "IndefiniteOperatorError",
    "SolverError",
    "PicardDivergenceError",
    "TimeMesh",
    "graded_mesh",
    "uniform_mesh",
    "validate_mesh",
    "load_mesh",
    "random_admissible_mesh",
    "Grid2D",
    "Field2D",
    "HelmholtzSolver",
    "laplacian",
    "inner",
    "norm_l2",
    "norm_max",
    "helmholtz_apply",
    "helmholtz_solve",
    "read_field",
    "write_field",
    "encode_field",
    "decode_field",
]
