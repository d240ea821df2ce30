"""Exception types raised across the package."""


class ZeroDenominator(ZeroDivisionError):
    """A rational function would get an identically zero denominator."""


class NotDivisible(ArithmeticError):
    """An exact division left a nonzero remainder."""


class PolePersists(ArithmeticError):
    """The reduced denominator still vanishes at the specialization point."""


class ContextMismatch(ValueError):
    """Two values declared over different variable contexts were combined."""


class GrammarError(ValueError):
    """Text could not be parsed in the polynomial / rational-function grammar."""


class NotClosed(ArithmeticError):
    """An operator image left the finite-dimensional subspace being restricted to."""


class HNotPolynomial(ValueError):
    """A matrix entry has the expansion parameter in its reduced denominator."""


class DimensionMismatch(ValueError):
    """Matrices with incompatible leg counts or leg dimensions were combined."""
