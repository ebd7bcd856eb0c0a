# =============================================================================
# ERROR HIERARCHY
# =============================================================================

from typing import Any, Optional


class ConeSphereError(Exception):
    """Base class for every failure raised by the geometry library"""

    kind = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict:
        return {"error": self.kind, "message": self.message, **{k: v for k, v in self.details.items() if v is not None}}


class OnLoop(ConeSphereError):
    kind = "on_loop"


class DegenerateArrangement(ConeSphereError):
    kind = "degenerate_arrangement"


class IncompatibleArrangements(ConeSphereError):
    kind = "incompatible_arrangements"


class Unrealizable(ConeSphereError):
    kind = "unrealizable"


class NotIncident(ConeSphereError):
    kind = "not_incident"


class DegenerateBase(ConeSphereError):
    kind = "degenerate_base"


class BrokenPath(ConeSphereError):
    kind = "broken_path"


class NotAFrame(ConeSphereError):
    kind = "not_a_frame"


class SingularFrame(ConeSphereError):
    kind = "singular_frame"


class FrameMismatch(ConeSphereError):
    kind = "frame_mismatch"


class NotAdjacent(ConeSphereError):
    kind = "not_adjacent"


class NonPositiveArea(ConeSphereError):
    kind = "non_positive_area"


class IncompatibleForms(ConeSphereError):
    kind = "incompatible_forms"


class WrongSignature(ConeSphereError):
    kind = "wrong_signature"


class WrongChart(ConeSphereError):
    kind = "wrong_chart"


class ParseError(ConeSphereError):
    """Malformed or schema-violating input, positioned at line and column (1-based)"""

    kind = "parse_error"

    def __init__(self, line: int, column: int, reason: str):
        super().__init__(f"{line}:{column}: {reason}", line=line, column=column, reason=reason)
        self.line = line
        self.column = column
        self.reason = reason


class ValidationError(ConeSphereError):
    """Well-formed input that breaks an arrangement invariant; carries the full report"""

    kind = "validation_error"

    def __init__(self, message: str, report: Optional[Any] = None):
        super().__init__(message, report=report.model_dump(mode="json") if report is not None else None)
        self.report = report
