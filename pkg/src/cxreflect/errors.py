"""Exception types shared by all modules."""


class CxReflectError(Exception):
    """Base class for every library error."""


class IsotropicPoint(CxReflectError):
    pass


class CoincidentPoints(CxReflectError):
    pass


class PointNotOnLine(CxReflectError):
    pass


class DegenerateOrthogonal(CxReflectError):
    pass


class Unrealizable(CxReflectError):
    pass


class IsotropicCenter(CxReflectError):
    pass


class NotUnitary(CxReflectError):
    pass


class NumericallyAmbiguous(CxReflectError):
    pass


class NotElliptic(CxReflectError):
    pass


class NotFormPreserving(CxReflectError):
    pass


class NotConjugate(CxReflectError):
    pass


class IllConditioned(CxReflectError):
    def __init__(self, msg, condition=None):
        super().__init__(msg)
        self.condition = condition


class OutOfTriangle(CxReflectError):
    pass


class OutsideDeltoid(CxReflectError):
    pass


class DegenerateInput(CxReflectError):
    pass


class ParameterOutOfRange(CxReflectError):
    pass


class TransitionParameter(CxReflectError):
    pass


class OnWall(CxReflectError):
    pass


class NoSolution(CxReflectError):
    def __init__(self, msg, bounds=None):
        super().__init__(msg)
        self.bounds = bounds


class NotDecomposable(CxReflectError):
    pass


class Unknown(CxReflectError):
    pass


class SearchExhausted(CxReflectError):
    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class NotHyperbolicLine(CxReflectError):
    pass
