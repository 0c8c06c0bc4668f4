"""Exception hierarchy shared by every module."""

from __future__ import annotations


class PaldusError(Exception):
    """Base class for library errors."""


class ValidationError(PaldusError, ValueError):
    """Bad input: the caller asked for something outside an operation's domain."""


class VerificationError(PaldusError):
    """A numerical or combinatorial check did not hold."""


class InvalidBranch(ValidationError):
    pass


class OddLength(ValidationError):
    pass


class InvalidStepVector(ValidationError):
    pass


class InvalidLabel(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class DegenerateVariables(ValidationError):
    pass


class NonHermitianInput(ValidationError):
    pass


class WidthMismatch(ValidationError):
    pass


class NonUnitaryParam(ValidationError):
    pass


class InvalidPayload(ValidationError):
    pass


class ZeroNorm(ValidationError):
    pass


class InvalidK(ValidationError):
    pass


class IdentityViolation(VerificationError):
    pass


class IsometryViolation(VerificationError):
    pass


class LocalityViolation(VerificationError):
    pass
