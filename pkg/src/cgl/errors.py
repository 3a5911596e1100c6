"""Domain error taxonomy shared by every module and serialized by the CLI."""

from __future__ import annotations


class CGLError(Exception):
    """Base class; ``code`` is the stable machine-readable name."""

    code = "ERROR"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DegenerateError(CGLError):
    code = "DEGENERATE"


class DuplicatePointError(CGLError):
    code = "DUPLICATE_POINT"


class NotSquarefreeError(CGLError):
    code = "NOT_SQUAREFREE"


class TooLargeError(CGLError):
    code = "TOO_LARGE"


class SingularReductionError(CGLError):
    code = "SINGULAR_REDUCTION"


class DegenerateModelError(CGLError):
    code = "DEGENERATE_MODEL"
