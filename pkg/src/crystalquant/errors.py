"""Exception and warning types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class DegeneratePolygon(ValueError):
    """Polygon has zero area where positive area is required."""


class InvalidOrder(ValueError):
    """Regular polygon order must be an integer >= 3."""


class DuplicateSite(ValueError):
    """Two sites coincide within the minimum separation."""


class EmptyInput(ValueError):
    """An operation received an empty collection where at least one item is required."""


class PartitionGapError(ValueError):
    """Cell areas do not sum to the domain area within tolerance."""


class VerificationFailure(RuntimeError):
    """An intermediate quantity of a verification recipe lost its required sign."""


class InternalError(RuntimeError):
    """Solver invariant violated; indicates a bug, not bad input."""


class EmptyCellWarning(UserWarning):
    """One or more sites received an empty cell; the caller decides what to do."""
