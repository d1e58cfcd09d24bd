"""Exception types shared across the engine.

Every failure carries a short machine-readable ``code``. The CLI prints
these as JSON on stderr and the HTTP service maps them onto status codes,
so one engine error always corresponds to exactly one code.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for every failure raised by this package."""

    code = "engine"

    def __init__(self, message: str, detail: object = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_payload(self) -> dict:
        """Serializable {code, message, detail} form used by CLI and service."""
        return {"code": self.code, "message": self.message, "detail": self.detail}


class InvalidDimsError(EngineError):
    code = "invalid-dims"


class TurnError(EngineError):
    """Move carries the wrong turn number."""

    code = "turn"


class AreaError(EngineError):
    """Rectangle area is not one of the two allowed values for the turn."""

    code = "area"


class BoundsError(EngineError):
    """Rectangle pokes outside the grid."""

    code = "bounds"


class OverlapError(EngineError):
    """Rectangle intersects an already occupied cell."""

    code = "overlap"


class RangeError(EngineError):
    """Numeric argument outside the supported range."""

    code = "range"


class InvalidInputError(EngineError):
    code = "invalid-input"


class FormatError(EngineError):
    """Malformed text input (transcripts, grids, instance sets)."""

    code = "format"


class SizeError(EngineError):
    code = "size"


class DuplicateError(EngineError):
    code = "duplicate"


class PartitionError(EngineError):
    code = "partition"


class DecodeError(EngineError):
    """A solver model did not decode to a well-formed packing."""

    code = "decode"


class SolverError(EngineError):
    """External solver missing, crashed, or produced garbage."""

    code = "solver"


class SessionError(EngineError):
    """Unknown play session."""

    code = "session"
