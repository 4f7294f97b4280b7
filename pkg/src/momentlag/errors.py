"""Structured error types.

Every error carries a short machine-readable ``code`` so that the command
line front end can serialize it as JSON on stderr.
"""

from __future__ import annotations


class MomentLagError(Exception):
    code = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        out = {"error": self.code, "message": self.message}
        if self.details:
            out["details"] = self.details
        return out


class Infeasible(MomentLagError):
    code = "Infeasible"


class Unbounded(MomentLagError):
    code = "Unbounded"


class NotGeneric(MomentLagError):
    code = "NotGeneric"


class NotDelzant(MomentLagError):
    code = "NotDelzant"


class OriginNotInterior(MomentLagError):
    code = "OriginNotInterior"


class EmptyInterior(MomentLagError):
    code = "EmptyInterior"


class DepthTooLarge(MomentLagError):
    code = "DepthTooLarge"


class NotCPForm(MomentLagError):
    code = "NotCPForm"


class NoNonface(MomentLagError):
    code = "NoNonface"


class CapExceeded(MomentLagError):
    code = "CapExceeded"


class NotCocycle(MomentLagError):
    code = "NotCocycle"


class NotFree(MomentLagError):
    code = "NotFree"


class InvalidInput(MomentLagError):
    code = "InvalidInput"


class GoldenMismatch(MomentLagError):
    code = "GoldenMismatch"


class NotMonotone(MomentLagError):
    code = "NotMonotone"
