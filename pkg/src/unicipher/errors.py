"""Exception taxonomy shared by all modules."""


class CipherError(Exception):
    """Base class for every structured failure in this package."""


class SingularMatrix(CipherError):
    pass


class InvalidKey(CipherError):
    pass


class ComplexFixedPoints(CipherError):
    pass


class DivisionByZeroInOrbit(CipherError):
    pass


class ZeroSequenceEntry(CipherError):
    pass


class ZeroDenominator(CipherError):
    pass


class UnknownSymbol(CipherError):
    pass


class NonIntegralPlaintext(CipherError):
    pass


class NegativePlaintext(CipherError):
    pass


class NoDiophantineSolution(CipherError):
    pass


class NotGoldenOracle(CipherError):
    pass


class NoMatchInBounds(CipherError):
    pass


class FormatError(CipherError):
    pass


class DegenerateConvergenceWarning(UserWarning):
    """Key accepted, but its ratio sequences converge only linearly."""
