from typing import Optional


class RltQpError(Exception):
    """Base class for every error raised by the toolkit."""
    exit_code: int = 3


class DimensionMismatch(RltQpError):
    exit_code = 2


class EmptyPolyhedron(RltQpError):
    pass


class ScaleLimit(RltQpError):
    pass


class NumericalBreakdown(RltQpError):
    pass


class NotInF(RltQpError):
    pass


class NotInRecessionCone(RltQpError):
    pass


class InfeasiblePoint(RltQpError):
    pass


class InvalidWeights(RltQpError):
    pass


class BoundedRegion(RltQpError):
    pass


class BadFaceIndex(RltQpError):
    pass


class NotAVertex(RltQpError):
    pass


class IdenticalVertices(RltQpError):
    pass


class HasVertices(RltQpError):
    pass


class WitnessOffFace(RltQpError):
    pass


class OracleIncomplete(RltQpError):
    pass


class VerificationFailed(RltQpError):
    exit_code = 4


class ParseError(RltQpError):
    """Malformed instance document. Carries the offending line and field when known."""
    exit_code = 2

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        if location:
            message = f"{message} ({', '.join(location)})"
        super().__init__(message)
