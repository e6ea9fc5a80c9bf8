"""Exception types shared across the package.

ConfigurationError maps to CLI exit code 2, SolverError to exit code 3.
"""


class BixsimError(Exception):
    """Base class for package errors."""


class ConfigurationError(BixsimError):
    """Invalid or inconsistent user-supplied configuration."""


class SolverError(BixsimError):
    """A numerical solve failed or did not meet its tolerance."""
