"""
Custom exceptions for the solver

Every exception carries the process exit status the command-line front end
reports for it: 1 for invalid input, 2 for computation failures and 3 for a
failed verification run.
"""
from typing import Any, Dict, Optional


class GswsException(Exception):
    """Base exception for the GSWS solver"""

    def __init__(self, message: str, exit_code: int = 2, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.exit_code = exit_code
        self.details = details or {}
        super().__init__(self.message)


class ValidationError(GswsException):
    """Invalid user input"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=1, details=details)


class DomainError(ValidationError):
    """Energy outside the admissible set of the requested regime"""


class NoBarrierError(GswsException):
    """The parameters do not produce a surface barrier"""

    def __init__(self, message: str = "No surface barrier", details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class PoleError(GswsException):
    """Gamma function evaluated at a pole"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class DegenerateParameterError(GswsException):
    """Parameters on a degenerate set (c - a - b integer, kappa = 0)"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class ConvergenceError(GswsException):
    """Series or iterative solver failed to converge"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class BranchError(GswsException):
    """An asserted realness or conjugacy property failed"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class GridResolutionError(GswsException):
    """Integration grid violates the step or extent requirements"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class DecompositionError(GswsException):
    """Plane-wave decomposition is ill-conditioned"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=2, details=details)


class VerificationError(GswsException):
    """One or more verification checks failed"""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=3, details=details)
