from __future__ import annotations

__all__ = [
    "EozipError",
    "NotPrime",
    "ReducibleModulus",
    "DimensionMismatch",
    "NotIsotropic",
    "NotComplement",
    "NotSymplectic",
    "IndexOutOfRange",
    "RankMismatch",
    "RankTooLarge",
    "NotMinimalRep",
    "AmbientMismatch",
    "NotTotallyOrdered",
    "SlopeViolation",
    "ScaleTooLarge",
    "LiftFailure",
    "InvalidDisplay",
    "InvalidTriple",
    "InvalidPoint",
    "InvalidZip",
    "PropertyViolation",
    "SchemaError",
]


class EozipError(Exception):
    """Base class for every error raised by the library."""


class NotPrime(EozipError, ValueError):
    pass


class ReducibleModulus(EozipError, ValueError):
    pass


class DimensionMismatch(EozipError, ValueError):
    pass


class NotIsotropic(EozipError, ValueError):
    pass


class NotComplement(EozipError, ValueError):
    pass


class NotSymplectic(EozipError, ValueError):
    pass


class IndexOutOfRange(EozipError, IndexError):
    pass


class RankMismatch(EozipError, ValueError):
    pass


class RankTooLarge(EozipError, ValueError):
    pass


class NotMinimalRep(EozipError, ValueError):
    pass


class AmbientMismatch(EozipError, ValueError):
    pass


class NotTotallyOrdered(EozipError):
    """The closure of a zip's filtration set contains two incomparable subspaces."""


class SlopeViolation(EozipError):
    pass


class ScaleTooLarge(EozipError):
    """A brute-force enumeration was asked to run beyond desk scale."""


class LiftFailure(EozipError, ArithmeticError):
    pass


class InvalidDisplay(EozipError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid display")


class InvalidTriple(EozipError, ValueError):
    pass


class InvalidPoint(EozipError, ValueError):
    pass


class InvalidZip(EozipError, ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid F-zip")


class PropertyViolation(EozipError):
    pass


class SchemaError(EozipError, ValueError):
    pass
