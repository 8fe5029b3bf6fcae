"""Exception types shared across the package."""

from ._validation import InvalidDistributionError
from .prob import ResourceGuardrailError


class InfeasibleError(ValueError):
    """The requested distortion (or parameter set) admits no operating point."""


__all__ = ["InfeasibleError", "InvalidDistributionError", "ResourceGuardrailError"]
