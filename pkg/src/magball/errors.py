"""Exception types shared across the package."""


class MagballError(Exception):
    """Base class for all package errors."""


class DomainError(MagballError, ValueError):
    """Invalid argument: violated precondition or malformed input."""


class ResourceLimitError(MagballError):
    """A requested computation exceeds the configured desk-scale limits."""


class OracleDisagreement(MagballError):
    """Two independent verifiers returned different verdicts for one claim."""
