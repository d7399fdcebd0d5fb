class DeltaRicError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(DeltaRicError):
    """Array shapes disagree with the declared dimensions."""


class InvariantError(DeltaRicError):
    """Data has the right shape but breaks a required symmetry or constraint."""

    def __init__(self, invariant: str, message: str):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class DomainError(DeltaRicError, ValueError):
    """Arguments outside the range where an operation is defined."""


class PreconditionError(DeltaRicError, ValueError):
    pass
