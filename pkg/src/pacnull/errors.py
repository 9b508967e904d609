"""Exception types raised across the package."""


class InvalidArgumentError(ValueError):
    """Argument outside an operation's precondition."""


class DegenerateInputError(ValueError):
    """Input that is well-formed but carries no usable information."""


class DomainError(ValueError):
    """Special-function or distribution argument outside its domain."""


class NumericInstabilityError(ArithmeticError):
    """A closed-form chain produced a non-finite or non-positive quantity.

    ``intermediates`` holds every value computed before the failure.
    """

    def __init__(self, message, intermediates=None):
        super().__init__(message)
        self.intermediates = dict(intermediates or {})
