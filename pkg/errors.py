"""
Error types for the qbench harness
Every failure a generator, scorer, simulator or the harness can raise derives from BenchmarkError.
"""

from typing import Optional


class BenchmarkError(Exception):
    """Base exception for benchmark errors"""
    pass


class InvalidArgumentError(BenchmarkError, ValueError):
    """Raised when an argument violates an operation's precondition"""
    pass


class ResourceLimitError(BenchmarkError):
    """Raised when a qubit or enumeration cap is exceeded"""
    pass


class SchemaError(BenchmarkError):
    """Raised when an instance or histogram document is malformed"""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class UnsupportedFamilyError(BenchmarkError):
    """Raised for an unknown benchmark family"""
    pass


class DegenerateInputError(BenchmarkError):
    """Raised when a score is undefined for the given data"""
    pass


class BackendError(BenchmarkError):
    """Raised when a backend cannot produce a histogram"""
    pass
