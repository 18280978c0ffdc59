"""
Custom exceptions for the ghzsynth application.
Defines application-specific exception hierarchy.
"""

from typing import Optional


class CliffordSynthError(Exception):
    """Base exception for synthesis application errors."""

    pass


class ConfigurationError(CliffordSynthError):
    """Raised when configuration is invalid or missing."""

    pass


class ValidationError(CliffordSynthError):
    """Raised when input validation fails."""

    pass


class ParseError(CliffordSynthError):
    """Raised when a text file cannot be parsed."""

    def __init__(
        self,
        message: str,
        line_number: Optional[int] = None,
        source: Optional[str] = None,
    ):
        location = ''
        if source:
            location = f'{source}:'
        if line_number is not None:
            location = f'{location}{line_number}: '
        elif location:
            location = f'{location} '
        super().__init__(f'{location}{message}')
        self.line_number = line_number
        self.source = source


class UnsupportedGateError(CliffordSynthError):
    """Raised when a gate kind is not supported by an operation."""

    pass


class SynthesisError(CliffordSynthError):
    """Raised when a synthesis construction fails internally."""

    pass


class VerificationError(CliffordSynthError):
    """Raised when a circuit does not implement its target."""

    def __init__(self, message: str, branch: Optional[str] = None):
        super().__init__(message)
        self.branch = branch


class BoundViolationError(CliffordSynthError):
    """Raised when a schedule is deeper than its guaranteed bound."""

    def __init__(
        self,
        message: str,
        measured: Optional[int] = None,
        allowed: Optional[float] = None,
    ):
        super().__init__(message)
        self.measured = measured
        self.allowed = allowed
