"""Exception hierarchy with stable machine-readable error codes.

Every error carries a short ``code`` used by the CLI for one-line
diagnostics (``error:<code>: message``).
"""

from __future__ import annotations


class ConvdynError(Exception):
    """Base class for all domain errors raised by this package."""

    code = "error"


class ParseError(ConvdynError):
    """Malformed input: bad JSON, unknown schema, unreadable file."""

    code = "parse"


class DomainError(ConvdynError):
    """An argument lies outside the operation's domain (bad n, eps <= 0, ...)."""

    code = "domain"


class GroupStructureError(ConvdynError):
    """A Cayley table violates a group axiom; carries the violation report."""

    code = "group-axiom"

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = tuple(violations)


class GroupMismatchError(ConvdynError):
    """Two values that must live on the same group do not."""

    code = "group-mismatch"


class ModeMismatchError(ConvdynError):
    """Exact and float values were combined in one computation."""

    code = "mode-mismatch"


class InvalidMeasureError(ConvdynError):
    """Weight vector fails simplex validation (negativity or wrong mass)."""

    code = "invalid-measure"


class HomomorphismError(ConvdynError):
    """Candidate map is not a homomorphism; carries a witness pair (i, j)."""

    code = "not-homomorphism"

    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


class NotAcyclicError(ConvdynError):
    """Operation requires an acyclic driving measure."""

    code = "not-acyclic"


class ConvergenceError(ConvdynError):
    """Iteration budget exhausted without convergence or period detection."""

    code = "no-convergence"


class VerificationError(ConvdynError):
    """An internal cross-check failed; the result must not be trusted."""

    code = "verification-failed"


class BudgetError(ConvdynError):
    """A configured resource cap (group order, steps, bits, draws) was hit."""

    code = "budget-exceeded"
