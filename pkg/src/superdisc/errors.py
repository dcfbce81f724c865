"""Exception hierarchy shared by the algebra, geometry and harness layers."""


class SuperdiscError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(SuperdiscError, ValueError):
    """Operands have incompatible generator counts or matrix shapes."""


class SingularityError(SuperdiscError, ArithmeticError):
    """A body that must be invertible is (numerically) singular."""


class IllConditionedError(SingularityError):
    """Body condition number exceeds the configured guard."""


class BranchError(SuperdiscError, ValueError):
    """A fractional power was requested off the principal branch."""


class ParityError(SuperdiscError, ValueError):
    """An operation needs a homogeneous or declared parity that is missing."""


class FixtureError(SuperdiscError, ValueError):
    """A JSON fixture could not be parsed into the requested object."""
