"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific one that applies.
"""


class ConfigError(ValueError):
    """Invalid configuration or argument combination (CLI exit code 2)."""


class RangeError(ValueError):
    """Argument outside the supported numeric range of an operation (CLI exit code 3)."""


class InvariantError(RuntimeError):
    """An internal cross-check failed; results cannot be trusted (CLI exit code 4)."""
