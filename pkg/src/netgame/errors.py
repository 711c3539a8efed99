"""Exception hierarchy shared by every solver layer."""


class NetgameError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class StructuralError(NetgameError, ValueError):
    """Malformed topology: bad node index, self-loop, missing side."""

    exit_code = 2


class DomainError(NetgameError, ValueError):
    """A numeric argument lies outside its admissible range."""

    exit_code = 2


class ConstraintError(NetgameError):
    """No selection satisfies the quota / budget / ownership constraints."""

    exit_code = 2


class NumericalError(NetgameError, ArithmeticError):
    """The eigensolver failed to converge."""

    exit_code = 3


class CapacityError(NetgameError):
    """Exact enumeration would exceed the configured cap.

    Use the relaxed solver with a rounding scheme instead.
    """

    exit_code = 4


class UndefinedMetricError(NetgameError, ArithmeticError):
    """LOC is undefined because the team optimum has zero connectivity."""

    exit_code = 3


class InstanceFormatError(NetgameError, ValueError):
    """An input file is not valid JSON or does not follow its schema."""

    exit_code = 2
