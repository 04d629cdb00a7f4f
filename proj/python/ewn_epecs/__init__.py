"""Energy-water nexus co-simulation: unit commitment, dispatch, regulation and water accounting."""

from ._core import (
    ComparisonError,
    DimensionError,
    Error,
    LoadError,
    ParameterError,
    SolverError,
    ValidationError,
    compare,
    cooling,
    regulation,
    run,
    validate,
)

__all__ = [
    "ComparisonError",
    "DimensionError",
    "Error",
    "LoadError",
    "ParameterError",
    "SolverError",
    "ValidationError",
    "compare",
    "cooling",
    "regulation",
    "run",
    "validate",
]
