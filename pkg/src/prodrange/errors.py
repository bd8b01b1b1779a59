"""Exception hierarchy shared by every module."""


class NumRangeError(Exception):
    """Base class for all errors raised by the package."""


class ShapeError(NumRangeError, ValueError):
    """Input is not a square matrix of the expected size."""


class NotHermitian(NumRangeError, ValueError):
    pass


class NoConvergence(NumRangeError, ArithmeticError):
    """The Jacobi sweep budget ran out. Signals a kernel bug, not bad input."""


class NotPSD(NumRangeError, ValueError):
    pass


class NotPositiveContraction(NumRangeError, ValueError):
    """Raised with ``which`` naming the offending argument."""

    def __init__(self, msg, which=None):
        super().__init__(msg)
        self.which = which


class NotProjection(NumRangeError, ValueError):
    pass


class ScalarProjection(NumRangeError, ValueError):
    pass


class ScalarInput(NumRangeError, ValueError):
    pass


class GridTooCoarse(NumRangeError, ValueError):
    pass


class GridMismatch(NumRangeError, ValueError):
    pass


class OutOfRange(NumRangeError, ValueError):
    pass


class DegenerateParameters(NumRangeError, ValueError):
    pass


class EmptyInput(NumRangeError, ValueError):
    pass


class InvalidForm(NumRangeError, ValueError):
    pass


class SpectrumOutOfRange(NumRangeError, ArithmeticError):
    pass


class NotEssHerm(NumRangeError, ValueError):
    """Raised with ``reason`` in {'non-normal', 'not collinear', 'scalar'}."""

    def __init__(self, msg, reason):
        super().__init__(msg)
        self.reason = reason


class NotTwoPoint(NumRangeError, ValueError):
    pass


class PairingUndefined(NumRangeError, ZeroDivisionError):
    """lambda = 0 while a1*a2*b1*b2 != 0."""


class UnknownSuite(NumRangeError, ValueError):
    pass


class ParseError(NumRangeError, ValueError):
    def __init__(self, msg, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + msg)
        self.line = line
        self.column = column
