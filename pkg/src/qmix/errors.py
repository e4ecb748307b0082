"""Exception types raised by qmix."""


class QmixError(Exception):
    """Base class for all qmix errors."""


class DimensionError(QmixError, ValueError):
    """Operands have incompatible shapes or subsystem factorizations."""


class ValidationError(QmixError, ValueError):
    """A value violates the invariants of the type being constructed."""


class ZeroProbabilityError(QmixError, ValueError):
    """A selective update was requested for an outcome of (numerically) zero probability."""


class SpecError(QmixError, ValueError):
    """A scenario specification could not be parsed or is incomplete."""
