"""Exception types shared across the package."""


class SuperGCError(Exception):
    """Base class for all package errors."""


class GeneratorRangeError(SuperGCError):
    pass


class RingMismatch(SuperGCError):
    pass


class BodilessNotInvertible(SuperGCError):
    pass


class OddExponent(SuperGCError):
    pass


class OrderExhausted(SuperGCError):
    pass


class SingularBody(SuperGCError):
    pass


class BranchCut(SuperGCError):
    pass


class ParityError(SuperGCError):
    pass


class BaseMismatch(SuperGCError):
    pass


class SingularMetric(SuperGCError):
    pass


class DegreeOverflow(SuperGCError):
    pass


class BasisExpressionError(SuperGCError):
    pass


class ParameterError(SuperGCError):
    pass


class ScenarioError(SuperGCError):
    pass


class ParseError(SuperGCError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class BindError(SuperGCError):
    pass
