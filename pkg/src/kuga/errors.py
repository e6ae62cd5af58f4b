"""Exception hierarchy shared by the kuga modules."""


class KugaError(Exception):
    """Base class for every error raised by this package."""


class NotARootOfUnity(KugaError, ValueError):
    pass


class ExponentOutOfRange(KugaError, ValueError):
    pass


class NotSymplectic(KugaError, ValueError):
    pass


class OrderExceedsCap(KugaError, ArithmeticError):
    """Raised when no power up to the cap returns the identity."""


# the type pipeline only makes sense for torsion elements
NotFiniteOrder = OrderExceedsCap


class ClosureExceedsCap(KugaError, ArithmeticError):
    pass


class NumericalBreakdown(KugaError, ArithmeticError):
    pass


class DoesNotFixPoint(KugaError, ValueError):
    pass


class WrongLocus(KugaError, ValueError):
    pass


class SnapFailure(NotARootOfUnity):
    """An eigenvalue met during a type computation did not snap onto a root of unity."""
