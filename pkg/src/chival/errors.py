"""Error types shared across the package.

Every error carries a stable machine-readable ``code`` (its class name) so the
CLI and the HTTP service can surface failures without string matching.
"""

from __future__ import annotations


class ChivalError(Exception):
    """Base class; ``code`` is the class name, ``detail`` an optional payload."""

    def __init__(self, message: str = "", detail: object = None):
        super().__init__(message or self.__class__.__name__)
        self.detail = detail

    @property
    def code(self) -> str:
        return self.__class__.__name__


# -- simplex / complex construction ------------------------------------------

class EmptyIdSet(ChivalError):
    pass


class DimensionOutOfRange(ChivalError):
    pass


class DimensionMismatch(ChivalError):
    pass


class LevelMismatch(ChivalError):
    pass


class NotInComplex(ChivalError):
    pass


class NotASingleSubdivision(ChivalError):
    pass


class ResourceLimit(ChivalError):
    pass


class BadFace(ChivalError):
    pass


# -- geometry ----------------------------------------------------------------

class EmbeddingFailed(ChivalError):
    pass


# -- colorings and solvers ---------------------------------------------------

class NotSperner(ChivalError):
    pass


class UnsatisfiedPostcondition(ChivalError):
    pass


class AmbiguousReplication(ChivalError):
    pass


class ForcedValencyViolated(ChivalError):
    pass


# -- renaming ----------------------------------------------------------------

class RoundCapExceeded(ChivalError):
    pass


class RangeViolation(ChivalError):
    pass


class ClashViolation(ChivalError):
    pass


class ClaimFailed(ChivalError):
    pass


# -- game --------------------------------------------------------------------

class UnsupportedN(ChivalError):
    pass


class NotASuccessor(ChivalError):
    pass


class WrongPhase(ChivalError):
    pass


class GameOver(ChivalError):
    pass
