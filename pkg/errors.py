"""
Exception hierarchy for the garage dynamics toolkit
"""


class GarageToolkitError(ValueError):
    """Base class for every domain failure raised by the toolkit"""


# Exact arithmetic
class InvalidAngle(GarageToolkitError):
    pass


# Garage validation
class NonRationalAngle(GarageToolkitError):
    pass


class InvalidPolygon(GarageToolkitError):
    pass


class DegeneratePolygon(InvalidPolygon):
    pass


class GluingMismatch(GarageToolkitError):
    pass


class EdgeLengthMismatch(GarageToolkitError):
    pass


class DisconnectedComplex(GarageToolkitError):
    pass


class GarageParseError(GarageToolkitError):
    """Parse failure located at a line of a garage file"""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class ParameterConstraintViolated(GarageToolkitError):
    pass


# Covers
class ReflectionConditionViolated(GarageToolkitError):
    pass


class GeometryMismatch(GarageToolkitError):
    pass


# Surfaces
class SurfaceError(GarageToolkitError):
    """Broken face complex, or a point that does not lie on it"""


class NonIntegerGenus(SurfaceError):
    pass


# Dynamics
class StartAtSingularity(GarageToolkitError):
    pass


class StartOnBoundary(GarageToolkitError):
    pass


class NoCylinderDecomposition(GarageToolkitError):
    """The direction is not completely periodic (a separatrix did not close)"""

    def __init__(self, message: str, separatrix=None):
        self.separatrix = separatrix
        super().__init__(message)


class BudgetExhausted(GarageToolkitError):
    """Search budget ran out before the question was decided"""

    def __init__(self, message: str, separatrix=None):
        self.separatrix = separatrix
        super().__init__(message)


class PointOnBoundary(GarageToolkitError):
    pass
