"""Exception types raised across the package."""


class InvalidParameter(ValueError):
    """A model or run parameter is out of range (non-positive c, n = 0, ...)."""


class DomainError(ValueError):
    """A function argument lies outside the domain where it is defined."""


class SingularityError(DomainError):
    """Evaluation at a point where the formula has a pole."""


class DegenerateRenewalError(ValueError):
    """A renewal index refers to a capped (degenerate) pseudo renewal time."""


class RenewalIdentityError(AssertionError):
    """The excursion identity for a renewal increment does not hold."""


class OracleBudgetError(ValueError):
    """Input too large for an exhaustive reference computation."""
