"""Exception hierarchy.

Every error raised by the library derives from :class:`BCLError`, so callers
(the command-line front end in particular) can catch one type and map it to a
diagnostic.
"""


class BCLError(ValueError):
    """Base class for all library errors."""


class DimensionMismatch(BCLError):
    pass


class NotHermitian(BCLError):
    pass


class NotPSD(BCLError):
    pass


class NotContraction(BCLError):
    pass


class NotCommuting(BCLError):
    pass


class NotPure(BCLError):
    pass


class NotIsometry(BCLError):
    pass


class NotUnitary(BCLError):
    pass


class GramMismatch(BCLError):
    """Raised when two column families do not share a Gram matrix."""

    def __init__(self, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(
            f"Gram mismatch: ||X*X - Y*Y|| = {self.residual:.3e} > tol = {self.tol:.3e}"
        )


class FiberMismatch(BCLError):
    pass


class DegreeCapExceeded(BCLError):
    pass


class InvalidTriple(BCLError):
    pass


class SingularResolvent(BCLError):
    pass


class ActionMismatch(BCLError):
    pass


class IsometrySolveFailed(BCLError):
    pass


class NotUnimodular(BCLError):
    pass


class PairingFailure(BCLError):
    pass


class EmptyBoundary(BCLError):
    pass


class ParseError(BCLError):
    pass


class NonSquare(ParseError):
    pass


class SizeMismatch(ParseError):
    pass


class PolynomialSyntaxError(ParseError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at position {position}")
