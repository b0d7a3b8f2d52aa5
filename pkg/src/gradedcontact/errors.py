"""Exception hierarchy shared by every module."""


class GradedContactError(Exception):
    """Base class for all errors raised by this package."""


class DuplicateName(GradedContactError):
    pass


class NegativeWeight(GradedContactError):
    pass


class ChartMismatch(GradedContactError):
    pass


class UnknownCoordinate(GradedContactError):
    pass


class NonHomogeneous(GradedContactError):
    """A function argument was required to be homogeneous and is not."""


class NonHomogeneousField(GradedContactError):
    """A vector field argument was required to be homogeneous and is not."""


class ModelCorrupt(GradedContactError):
    """An internal defining identity of a model failed; indicates a sign bug."""


class DegreeZero(GradedContactError):
    pass


class NotContact(GradedContactError):
    pass


class WrongMultidegree(GradedContactError):
    pass


class WrongDegree(GradedContactError):
    pass


class PathMismatch(GradedContactError):
    """The two Poissonization construction paths disagree."""


class ExprSyntaxError(GradedContactError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class UnknownIdentifier(GradedContactError):
    pass


class SchemaError(GradedContactError):
    pass


class IndexOutOfRange(GradedContactError):
    pass
