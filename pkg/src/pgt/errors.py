"""Exception types shared across the package."""


class StructureError(ValueError):
    """A structural hypothesis of a construction does not hold."""


class HypothesisError(ValueError):
    """Input violates the precondition of a construction."""


class VerificationError(RuntimeError):
    """A constructed certificate failed its a-posteriori check."""


class CapExceeded(ValueError):
    """An exhaustive routine was asked to run beyond its configured size cap."""
