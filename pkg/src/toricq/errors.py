"""Exception hierarchy shared across the package.

CLI exit codes: 0 success, 2 validation / precondition / domain failures,
3 solver nonconvergence, 4 verification property failure.
"""

from __future__ import annotations


class ToricQError(Exception):
    """Base class for all package errors."""

    exit_code = 2


class FieldDefinitionError(ToricQError):
    """The declared number field is unusable (reducible polynomial, bad
    isolating interval, or a sign refinement that never separates)."""


class ValidationError(ToricQError):
    """Input data violates a structural invariant (unbounded polytope,
    redundant facet, non-spanning generators, malformed JSON)."""


class PreconditionError(ToricQError):
    """An operation was called outside its contract."""


class DomainError(PreconditionError):
    """A point lies outside the admissible open set of the polytope."""


class SolverError(ToricQError):
    """Newton retraction failed to converge; carries the last residual."""

    exit_code = 3

    def __init__(self, message: str, residual: float | None = None,
                 iterations: int | None = None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class InternalConsistencyError(ToricQError):
    """A condition that is impossible for validated input was observed."""
