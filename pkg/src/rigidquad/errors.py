"""Exception types shared across the package.

Validation errors name the first offending element so failures are
actionable when maps come from external JSON.
"""


class RigidQuadError(Exception):
    """Base class for all package errors."""


# -- map / validation errors -------------------------------------------------

class InvalidMap(RigidQuadError):
    pass


class NonQuadFace(InvalidMap):
    pass


class NonSimpleBoundary(InvalidMap):
    pass


class BadVertexPattern(InvalidMap):
    pass


class BadRay(InvalidMap):
    pass


class RootNotConvex(InvalidMap):
    pass


class BadEdgeLabels(InvalidMap):
    pass


class BadFace(InvalidMap):
    pass


class BadRootLabels(InvalidMap):
    pass


class WrongRootFace(InvalidMap):
    pass


# -- exploration / assembly errors -------------------------------------------

class MalformedState(RigidQuadError):
    pass


class IncompleteTrace(RigidQuadError):
    pass


class FrontierMismatch(RigidQuadError):
    def __init__(self, step_index, message=""):
        self.step_index = step_index
        super().__init__(f"step {step_index}: {message}")


class LabelClash(RigidQuadError):
    pass


class NotInClass(RigidQuadError):
    pass


class NotTangential(RigidQuadError):
    pass


class DictionaryViolation(RigidQuadError):
    def __init__(self, row, message=""):
        self.row = row
        super().__init__(f"dictionary row {row}: {message}")


# -- numerics / sampling ------------------------------------------------------

class OutOfDomain(RigidQuadError):
    pass


class EmptyClass(RigidQuadError):
    pass


class BoundsTooSmall(RigidQuadError):
    pass


class NonPositiveWidth(RigidQuadError):
    pass


class InconsistentPlacement(RigidQuadError):
    pass


class NonTermination(RigidQuadError):
    pass
