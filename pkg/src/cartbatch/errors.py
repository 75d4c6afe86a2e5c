"""Exception types raised across the package."""


class BatchCodeError(ValueError):
    """Base class for invalid inputs and unsatisfiable parameters."""


class FieldError(BatchCodeError):
    pass


class DomainError(BatchCodeError):
    """A point, subset or polynomial does not fit the evaluation domain."""


class DegreeTooLarge(BatchCodeError):
    """Interpolation along a direction needs rho + 1 < |A_i|."""


class InvalidConfiguration(BatchCodeError):
    """The bucket subspace fails V ∩ <e_i, e_j> = {0}."""


class UnsupportedParameters(BatchCodeError):
    """The constructive solver does not cover these parameters."""


class InsufficientDirections(UnsupportedParameters):
    """Fewer than three recoverable coordinates (nu < 3)."""


class ConstructionError(RuntimeError):
    """The constructive solver produced a set that fails its own check."""
