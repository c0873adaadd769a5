"""Exception hierarchy. Every library error derives from :class:`RelboundError`."""


class RelboundError(ValueError):
    pass


class InvalidMatrix(RelboundError):
    pass


class NotHermitian(InvalidMatrix):
    pass


class DimensionMismatch(RelboundError):
    pass


class NoConvergence(RelboundError, ArithmeticError):
    pass


class FactorizationInvalid(RelboundError):
    pass


class PolarConditionInvalid(RelboundError):
    pass


class KTooLarge(RelboundError):
    pass


class NotPsd(RelboundError):
    pass


class SingularInput(RelboundError):
    pass


class IndexOutOfRange(RelboundError, IndexError):
    pass


class ZeroMatrix(RelboundError):
    pass


class NotInvertible(RelboundError):
    pass


class NotAdmissible(RelboundError):
    pass


class OrientationError(RelboundError):
    pass


class NotSquare(DimensionMismatch):
    pass


class SpecInvalid(RelboundError):
    pass


class CertificationError(RelboundError, AssertionError):
    """A guarantee that should hold by theory failed numerically."""


class ParseError(RelboundError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class SymmetryViolation(RelboundError):
    pass
