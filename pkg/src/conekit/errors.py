"""Exception hierarchy shared by all conekit modules."""


class ConekitError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSizeError(ConekitError):
    """Patch side length outside the supported range."""


class GeometryError(ConekitError):
    """A site, bond or path does not fit on the patch."""


class EmptyRegionError(GeometryError):
    """A region constructor produced no bonds."""


class NoRoomError(GeometryError):
    """A construction needs more room than the patch provides."""


class DimensionMismatchError(ConekitError):
    """Operands live on different bond sets."""


class AmbiguousChargeError(ConekitError):
    """A syndrome sits on the detection annulus and cannot be classified."""


class LocalizationError(ConekitError):
    """An operator is not supported where the operation requires it."""


class InvalidActionError(ConekitError):
    """Group action implementers do not satisfy the required relations."""


class ConsistencyError(ConekitError):
    """An internal invariant failed; indicates a bug, not a usage error."""
