"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Structure tensors with inconsistent dimensions."""


class UnverifiedInputError(ValueError):
    """An operation's precondition verifier did not pass."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class StructuralError(RuntimeError):
    """A construction that should be well defined is not (descent, dimension)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SingularAntipodeError(ValueError):
    """The antipode is not invertible, so braiding inverses are unavailable."""


class TwistError(ValueError):
    """Base class for rejected Yau twists."""


class AutNotInvertibleError(TwistError):
    pass


class AutNotBialgebraMapError(TwistError):
    pass


class AutAntipodeError(TwistError):
    pass
