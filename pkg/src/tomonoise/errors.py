"""Exception hierarchy shared across the package.

The three leaf classes map one-to-one onto the CLI exit codes:
config/validation -> 2, capability -> 3, numeric range -> 4 (I/O errors
surface as OSError -> 5).
"""


class TomonoiseError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(TomonoiseError):
    """Invalid input: malformed state, bad parameter domain, broken config."""


class CapabilityError(TomonoiseError):
    """A supported operation asked for an unsupported (observable, state) pairing."""


class NumericRangeError(TomonoiseError):
    """Order caps, truncation limits, or sampling-grid extent exceeded."""
