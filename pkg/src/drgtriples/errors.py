"""Exception hierarchy.

Two families matter to callers: :class:`Infeasible` means the mathematics
rules the input out (and carries a certificate); everything else deriving
from :class:`DRGError` is an operational problem with the request.
"""

from __future__ import annotations


class DRGError(Exception):
    pass


class InvalidArray(DRGError, ValueError):
    pass


class Infeasible(DRGError):
    """A proof of nonexistence. ``certificate`` is a JSON-able dict."""

    def __init__(self, message: str, certificate: dict | None = None):
        super().__init__(message)
        self.certificate = certificate or {}


class NonIntegralParameters(Infeasible):
    pass


class NonIntegralMultiplicity(Infeasible):
    pass


class NegativeKrein(Infeasible):
    pass


class UnrealizableConfig(DRGError, ValueError):
    pass


class EnumerationTooLarge(DRGError):
    pass


class NotSRGLike(DRGError):
    pass


class LatticeCheckFailed(DRGError):
    pass


class NoContradiction(DRGError):
    pass


class NotDRG(DRGError):
    pass


class UnknownGraph(DRGError, KeyError):
    pass
