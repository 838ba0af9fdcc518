"""
Common exceptions
"""
from typing import Optional, Tuple


class BetheFuchsError(Exception):
    """Base class for every error raised by the package"""
    pass


class DomainError(BetheFuchsError, ValueError):
    """Exception raised when an input violates an operation's precondition"""
    pass


class RegimeError(DomainError):
    """Exception raised when an operation is called in the wrong regime"""

    def __init__(self, message: str, regime: str, use_instead: Optional[str] = None):
        self.regime = regime
        self.use_instead = use_instead
        if use_instead:
            message = f"{message} (regime {regime}; use {use_instead})"
        else:
            message = f"{message} (regime {regime})"
        super().__init__(message)


class ArrangementError(DomainError):
    """Exception raised when a point lies on (or too close to) the arrangement"""

    def __init__(self, message: str, pair: Tuple[str, str]):
        self.pair = pair
        super().__init__(f"{message}: {pair[0]} ~ {pair[1]}")


class ConvergenceError(BetheFuchsError):
    """Exception raised when Newton refinement or path tracking fails"""

    def __init__(self, message: str, diagnostics: Optional[dict] = None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)


class VerificationError(BetheFuchsError):
    """Exception raised when a Bethe or Fuchsian check fails"""

    def __init__(self, message: str, residuals: Optional[dict] = None):
        self.residuals = residuals or {}
        super().__init__(message)


class ConfigError(BetheFuchsError):
    """Exception raised for malformed configuration or stale reports"""
    pass
