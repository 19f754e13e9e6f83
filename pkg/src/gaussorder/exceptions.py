"""Exception types raised by gaussorder."""


class GaussOrderError(ValueError):
    """Base class for all gaussorder errors."""


class InvalidStateError(GaussOrderError):
    """A matrix is not a legitimate covariance matrix of a physical state."""


class NotSymplecticError(GaussOrderError):
    """A matrix expected to be symplectic is not."""


class NotCompletelyPositiveError(GaussOrderError):
    """A (M, G) pair does not define a completely positive map."""


class DegenerateInvariantError(GaussOrderError):
    """A correlation invariant required to be nonzero vanishes."""


class UncorrelatedStateError(GaussOrderError):
    """Both correlation invariants vanish; the decision theory does not cover
    product-correlation states."""


class InvariantMismatchError(GaussOrderError):
    """A local invariant that a one-sided map must preserve differs between
    source and target."""
