"""Exception hierarchy.

Errors fall in three families that the command line maps to exit codes:
``ResourceLimitError`` (a size guard tripped, exit 3), ``ClaimMismatch``
(a mathematical check failed, exit 2) and everything else (usage, exit 1).
"""


class SingerGQError(Exception):
    """Base class for all package errors."""


class ResourceLimitError(SingerGQError):
    """A requested computation exceeds a configured size guard."""


class ClaimMismatch(SingerGQError):
    """A verified mathematical property does not hold."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# gf
class NotPrime(SingerGQError, ValueError):
    pass


class OrderTooLarge(ResourceLimitError):
    pass


class DivisionByZero(SingerGQError, ZeroDivisionError):
    pass


class NotInvertible(SingerGQError, ValueError):
    pass


# projgeom
class SpaceTooLarge(ResourceLimitError):
    pass


class DimensionMismatch(SingerGQError, ValueError):
    pass


# incidence
class NotUniformDegrees(ClaimMismatch):
    pass


class AxiomViolation(ClaimMismatch):
    pass


class ContainsDigon(ClaimMismatch):
    pass


class EmptySet(SingerGQError, ValueError):
    pass


class NotRegular(ClaimMismatch):
    pass


class NotSquareOrder(SingerGQError, ValueError):
    pass


class NotCertified(SingerGQError, ValueError):
    pass


# matgroup
class GroupTooLarge(ResourceLimitError):
    pass


class NotInvariant(ClaimMismatch):
    pass


class NotSubgroup(SingerGQError, ValueError):
    pass


class NotNormal(ClaimMismatch):
    pass


class NotInKernel(ClaimMismatch):
    pass


# symplectic
class WrongShape(SingerGQError, ValueError):
    pass


# singer
class TooManyCandidates(ResourceLimitError):
    pass


class LiftNotSharplyTransitive(ClaimMismatch):
    pass


class NotContainingCenter(SingerGQError, ValueError):
    pass


class WrongSize(SingerGQError, ValueError):
    pass


class SystemTooLarge(ResourceLimitError):
    pass


# hyperoval
class GcdViolation(SingerGQError, ValueError):
    pass


class BadParameters(SingerGQError, ValueError):
    pass


class NotHyperoval(ClaimMismatch):
    pass


class GammaNotStabilizing(ClaimMismatch):
    pass


class DViolation(ClaimMismatch):
    pass


class SearchTooLarge(ResourceLimitError):
    pass


# lattice
class NotSinger(ClaimMismatch):
    pass


class NoMatching(ClaimMismatch):
    pass


class MatchingInvalid(SingerGQError, ValueError):
    pass


class UnknownFormat(SingerGQError, ValueError):
    pass
