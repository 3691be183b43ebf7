class GeometryError(ValueError):
    """Base class for every input or domain error raised by the engine."""


class MetricDegenerate(GeometryError):
    pass


class DegeneratePlane(GeometryError):
    pass


class NonPositiveWarping(GeometryError):
    pass


class NotUnit(GeometryError):
    pass


class WrongDistribution(GeometryError):
    pass


class UnknownTensorName(GeometryError):
    pass


class KappaOne(GeometryError):
    pass


class RankDeficient(GeometryError):
    pass


class NotNormal(GeometryError):
    pass


class ConstraintViolated(GeometryError):
    pass


class NotCTotallyReal(GeometryError):
    pass


class InvalidScenario(GeometryError):
    pass


class DimensionMismatch(GeometryError):
    pass


class ParseError(GeometryError):
    """Malformed expression or scenario file; ``position`` is a character offset or (line, column)."""

    def __init__(self, message: str, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)
