#!/usr/bin/env python3
"""
Levinson Lab Error Hierarchy

Every failure raised by the library derives from LevinsonError. The three
branches carry the exit code used by the command-line front end:

- ValidationError  (1): the input is outside the supported parameter range
- VerificationError (2): an internal consistency check disagreed
- RefusalError     (3): the requested object is not defined for these parameters
"""

from enum import Enum


class ExitStatus(Enum):
    """Process exit codes for the command-line front end."""
    SUCCESS = 0
    VALIDATION_ERROR = 1
    VERIFICATION_FAILURE = 2
    REFUSAL = 3


class LevinsonError(Exception):
    """Base class for all library errors."""
    exit_status = ExitStatus.VALIDATION_ERROR

    @property
    def exit_code(self) -> int:
        return self.exit_status.value


# ---------------------------------------------------------------------------
# Validation (bad input)
# ---------------------------------------------------------------------------

class ValidationError(LevinsonError, ValueError):
    """Parameters or arguments violate a documented precondition."""
    exit_status = ExitStatus.VALIDATION_ERROR


class DomainError(ValidationError):
    """Argument outside the validity range of a numerical backend."""


class PoleError(DomainError):
    """Gamma function evaluated at a non-positive integer."""


class NearIntegerOrderError(DomainError):
    """Y/H combination requested at a complex order too close to an integer."""


class DivergentTraceError(ValidationError):
    """Separated operator whose symbol part is not trace class."""


# ---------------------------------------------------------------------------
# Refusals (mathematically undefined)
# ---------------------------------------------------------------------------

class RefusalError(LevinsonError):
    """The object requested does not exist for these parameters."""
    exit_status = ExitStatus.REFUSAL


class NotFredholmError(RefusalError):
    """Symbol vanishes on the contour; the winding number is undefined."""


class UnboundedOperatorError(RefusalError):
    """Wave operator is unbounded for the requested sign."""


class SpectralSingularityError(RefusalError):
    """Resolvent boundary value evaluated at a spectral singularity."""


class SingularPointError(RefusalError):
    """Symbol evaluated on its singular set."""


class WrongAlgebraError(RefusalError):
    """Request belongs to the periodic algebra (Re m = 0), not the square one."""


# ---------------------------------------------------------------------------
# Verification failures (implementation disagrees with theory)
# ---------------------------------------------------------------------------

class VerificationError(LevinsonError):
    """A consistency check failed."""
    exit_status = ExitStatus.VERIFICATION_FAILURE


class ConvergenceError(VerificationError):
    """A generated sequence left its declared region or failed to converge."""
