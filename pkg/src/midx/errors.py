"""Exception types shared across the package."""


class MidxError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(MidxError):
    """Parameter set violates a family constraint."""


class UnsupportedFamily(MidxError):
    """Operation not defined for the requested family."""


class OutOfRange(MidxError):
    """Virtual-state degree outside the admissible range."""


class DuplicateDegree(MidxError):
    """Index set repeats a degree within one type."""


class DegreeOutOfRange(MidxError):
    """Index set contains a degree outside the admissible range."""


class RemainderNonzero(MidxError):
    """Polynomial division left a nonzero remainder where none is allowed."""


class NoConvergence(MidxError):
    """Iterative root finder exhausted its iteration budget."""


class DegenerateLeadingCoeff(MidxError):
    """Leading coefficient of a constructed polynomial vanished."""


class DenominatorZero(MidxError):
    """A denominator polynomial vanished at an evaluation point."""


class NonPositiveWeight(MidxError):
    """Squared weight came out non-positive; a strip zero was missed."""


class PoleHit(MidxError):
    """Potential evaluated at a pole of its prefactor."""


class IdentityViolated(MidxError):
    """A polynomial or closed-form identity failed beyond tolerance."""

    def __init__(self, msg, residual=None, detail=None):
        super().__init__(msg)
        self.residual = residual
        self.detail = detail


class InterlacingViolated(MidxError):
    """Root pattern of the multi-indexed polynomials broke interlacing."""


class WeightFailure(MidxError):
    """Weight could not be evaluated for quadrature."""


class NonConvergentQuadrature(MidxError):
    """Quadrature refinement failed to converge."""


class TypeIIRejected(MidxError):
    """Type-II index sets have no good Meixner-Pollaczek limit."""


class HermiticityGateError(MidxError):
    """Check requires an established hermitian system and refuses to run."""
