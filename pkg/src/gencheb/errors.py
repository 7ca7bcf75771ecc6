"""Exception hierarchy shared by all gencheb modules."""


class GenChebError(Exception):
    """Base class for every error raised by gencheb."""


class OrderingViolation(GenChebError, ValueError):
    pass


class RangeViolation(GenChebError, ValueError):
    pass


class DomainError(GenChebError, ValueError):
    pass


class ConvergenceError(GenChebError, ArithmeticError):
    pass


class LossOfOrthogonality(GenChebError, ArithmeticError):
    pass


class SingularStep(GenChebError, ArithmeticError):
    pass


class HorizonExceeded(GenChebError, IndexError):
    pass


class PoleProximity(GenChebError, ArithmeticError):
    pass


class RootEscape(GenChebError, ArithmeticError):
    pass


class UnsupportedGenus(GenChebError, ValueError):
    pass


class SingularDenominator(GenChebError, ZeroDivisionError):
    pass


class BranchZero(GenChebError, ArithmeticError):
    pass


class SingularDeterminant(GenChebError, ArithmeticError):
    pass


class NonExactDivision(GenChebError, ArithmeticError):
    pass


class SingularSystem(GenChebError, ArithmeticError):
    pass


class ConstraintViolation(GenChebError, ArithmeticError):
    pass


class RegionViolation(GenChebError, ValueError):
    pass


class CensusViolation(GenChebError, AssertionError):
    pass


class UsageError(GenChebError, ValueError):
    pass
