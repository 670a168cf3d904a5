"""Exception hierarchy shared across the package.

Two families: configuration problems (bad input files, bad key values) and
numerical failures (a run that started but cannot continue). The CLI maps
ConfigError to exit code 1 and NumericalError to exit code 2.
"""
from __future__ import annotations


class ConfigError(ValueError):
    """Base class for configuration-file and parameter-validation problems."""


class ConfigParseError(ConfigError):
    """Malformed config text (syntax, unknown keys, duplicates); carries line info."""


class ConfigValidationError(ConfigError):
    """Well-formed config with values that violate a constraint."""


class NumericalError(RuntimeError):
    """Base class for failures during time stepping or linear algebra."""


class NoConvergenceError(NumericalError):
    """Inner fixed-point iteration exhausted its iteration budget."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class NanDetectedError(NumericalError):
    """A non-finite value appeared in a state or right-hand side."""


class SingularPivotBlockError(NumericalError):
    """A 2x2 pivot block in the block-tridiagonal elimination is singular."""


class TangledMeshError(NumericalError):
    """Lagrangian nodes crossed; the time step was too large."""


class DegenerateJacobianError(NumericalError):
    """Deformation Jacobian lost invertibility (nodes nearly coincide)."""


class DegenerateDensityError(NumericalError):
    """Density hit zero or below where the pressure equation needs it positive."""


class MeshMismatchError(ValueError):
    """Two fields that must share a mesh do not."""


class StencilError(ValueError):
    """A finite-difference or least-squares stencil does not fit in the mesh."""
