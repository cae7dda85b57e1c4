"""Exception hierarchy shared by every layer of the solver."""


class RurError(Exception):
    """Base class for all errors raised by rurlex."""


class NotInvertible(RurError, ZeroDivisionError):
    """A field element (or a polynomial modulo another) has no inverse."""


class ModulusMismatch(RurError, ValueError):
    pass


class NotCoprime(RurError, ValueError):
    """CRT moduli share a factor."""


class ZeroGcd(RurError, ValueError):
    pass


class NotDivisible(RurError, ArithmeticError):
    pass


class NotInvertibleModF(NotInvertible):
    """gcd(g, f) != 1, so g has no inverse modulo f."""


class NonSeparatingEvidence(RurError):
    """The linear form was caught not separating while building coordinates."""


class UnsupportedCharacteristic(RurError, ValueError):
    pass


class ParseError(RurError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ZeroPolynomial(ParseError):
    pass


class ExponentOverflow(RurError, OverflowError):
    pass


class NotZeroDimensional(RurError):
    pass


class ResourceExceeded(RurError):
    pass


class InternalInvariantViolation(RurError, AssertionError):
    pass


class StrategyExhausted(RurError):
    pass


class BadPrime(RurError):
    """The prime is unlucky for this system or this linear form."""


class NeedMorePrimes(RurError):
    """Rational reconstruction failed for at least one coefficient."""


class NonSplitMinimalPolynomial(RurError):
    pass


class BudgetExceeded(RurError):
    pass


class Refuted(RurError):
    """An exact verification of a candidate RUR failed."""


class EmptyVariety(NotZeroDimensional):
    """The ideal is the unit ideal: no solutions, quotient of dimension 0."""
