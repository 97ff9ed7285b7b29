"""Exception hierarchy shared by the package."""


class Ramanujan49Error(Exception):
    """Base class for every error raised by this package."""


class NonUnitConstantTerm(Ramanujan49Error, ArithmeticError):
    pass


class InsufficientOrder(Ramanujan49Error, ValueError):
    pass


class InvalidDissectionIndex(Ramanujan49Error, ValueError):
    pass


class InsufficientData(Ramanujan49Error, ValueError):
    pass


class NonMonomialInverse(Ramanujan49Error, ArithmeticError):
    pass


class IndexOutOfRange(Ramanujan49Error, IndexError):
    pass


class DimensionMismatch(Ramanujan49Error, ValueError):
    pass


class SchemaError(Ramanujan49Error, ValueError):
    pass


class ParseError(Ramanujan49Error, ValueError):
    pass


class PipelineMismatch(Ramanujan49Error):
    """Symbolic and series routes of a derivation disagree."""


class ScheduleMismatch(Ramanujan49Error):
    """A reduced form has a monomial outside the witness exponent schedule."""


class UnknownIdentity(Ramanujan49Error, KeyError):
    pass
