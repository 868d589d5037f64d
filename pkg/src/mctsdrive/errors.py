"""Exception types shared across the package."""


class MctsDriveError(Exception):
    """Base class for all package-specific errors."""


class FrenetRangeError(MctsDriveError, ValueError):
    """Queried arc length or lateral offset is outside the reference line."""


class ProjectionAmbiguityError(MctsDriveError, ValueError):
    """A Cartesian point projects equally well onto distant parts of the line."""


class InfeasibleActionError(MctsDriveError, ValueError):
    """An action was applied that is not feasible in the given world state."""


class PlanningPreconditionError(MctsDriveError, ValueError):
    """The planner was invoked on a world that violates its preconditions."""


class ConfigError(MctsDriveError, ValueError):
    """A scenario configuration failed validation."""


class TraceFormatError(MctsDriveError, ValueError):
    """A trace file does not match the expected schema."""


class MissingReferenceError(MctsDriveError, ValueError):
    """Near-optimal classification was requested without a reference cost."""
