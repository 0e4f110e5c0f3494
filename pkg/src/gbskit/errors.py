"""Exception hierarchy shared across the toolkit.

Each class carries the process exit code the CLI maps it to.
"""


class GbskitError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class ValidationError(GbskitError, ValueError):
    """Malformed input: bad shapes, broken file formats, out-of-range parameters."""

    exit_code = 2


class CostGuardError(GbskitError, RuntimeError):
    """Request exceeds the desk-scale cost envelope (e.g. Hafnian dimension cap)."""

    exit_code = 3


class PhysicalityError(GbskitError, RuntimeError):
    """Numerically unphysical state or matrix (uncertainty bound, branch of sqrt)."""

    exit_code = 4
