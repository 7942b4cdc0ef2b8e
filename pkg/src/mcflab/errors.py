"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class McfError(Exception):
    exit_code = 1


class DimensionMismatch(McfError, ValueError):
    pass


class NotUnimodular(McfError, ValueError):
    pass


class SingularPoint(McfError, ArithmeticError):
    """The point lies on the hyperplane sent to infinity by the matrix."""


class UnknownAlgorithm(McfError, KeyError):
    pass


class UnsupportedDimension(McfError, ValueError):
    pass


class UnknownDigit(McfError, ValueError):
    pass


class OutOfDomain(McfError, ValueError):
    exit_code = 2


class BoundaryPoint(McfError, ValueError):
    exit_code = 3


class NonFullSystem(McfError):
    exit_code = 4


class EmptyCylinder(McfError):
    exit_code = 5


class DivergentIntegral(McfError, ArithmeticError):
    exit_code = 6


class NoKnownIntertwiner(McfError, LookupError):
    pass
