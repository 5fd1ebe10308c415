"""Exception hierarchy shared by every module of the package."""


class CovreconError(Exception):
    """Base class for all library errors."""


# -- scalars ---------------------------------------------------------------

class MixedFieldError(CovreconError, TypeError):
    """Operands live in incompatible fields (different radicands or primes)."""


# -- forms -----------------------------------------------------------------

class SpaceMismatch(CovreconError, ValueError):
    pass


class DegreeTooHigh(CovreconError, ValueError):
    pass


class ArityMismatch(CovreconError, ValueError):
    pass


class InhomogeneousImages(CovreconError, ValueError):
    pass


class ParseError(CovreconError, ValueError):
    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        self.message = message
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


# -- linear algebra --------------------------------------------------------

class NotSquare(CovreconError, ValueError):
    pass


class Singular(CovreconError, ArithmeticError):
    pass


# -- transvectants / covariants -------------------------------------------

class LevelTooHigh(CovreconError, ValueError):
    pass


class DegreeMismatch(CovreconError, ValueError):
    pass


class CharacteristicGuard(CovreconError, ValueError):
    """A factorial-bearing operation was asked for in too small a characteristic."""


class SearchExhausted(CovreconError):
    def __init__(self, message, bound=None):
        self.bound = bound
        super().__init__(message)


class NotIndependent(CovreconError):
    pass


# -- reconstruction --------------------------------------------------------

class MathematicalFailure(CovreconError):
    """Typed failure of the mathematics (maps to CLI exit code 2)."""


class NotIndependentAtF(MathematicalFailure):
    def __init__(self, message, family=None, delta=0):
        self.family = family
        self.delta = delta
        super().__init__(message)


class DependentBasis(MathematicalFailure):
    pass


class DegenerateConic(MathematicalFailure):
    pass


class WrongRank(MathematicalFailure):
    def __init__(self, message, rank=None):
        self.rank = rank
        super().__init__(message)


class Unsupported(CovreconError):
    pass


class BatteryUndefined(CovreconError, KeyError):
    pass


class BatteryMismatch(CovreconError, ValueError):
    pass
