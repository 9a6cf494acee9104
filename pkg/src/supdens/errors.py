"""Exception types shared across the package.

The CLI maps these to exit codes: usage/configuration problems exit 1,
data problems exit 2, numeric non-convergence exits 3.
"""


class ConfigError(ValueError):
    """Invalid parameter or option combination (bad bandwidth, mode, grid...)."""


class DataError(ValueError):
    """Invalid input data (non-finite values, out-of-support points, degenerate samples)."""


class NumericError(RuntimeError):
    """A numeric routine failed to converge; the message carries diagnostics."""
