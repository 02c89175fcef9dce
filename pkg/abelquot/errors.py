class AbelquotError(Exception):
    """Base class for every error raised by abelquot."""


class InputError(AbelquotError, ValueError):
    """The caller supplied something that cannot be processed.

    The command line maps this family to exit code 2.
    """


class GroupFormatError(InputError):
    """A group file does not follow the group file format.

    Parameters
    ----------
    message : str
        What is wrong.
    line_number : int
        1-based line of the offending text, or None if the problem is
        not tied to a single line.
    """

    def __init__(self, message, line_number=None):
        self.message = message
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)

    def __reduce__(self):
        return type(self), (self.message, self.line_number)


class DegreeMismatchError(InputError):
    pass


class NotTransitiveError(InputError):
    pass


class NotNormalError(InputError):
    pass


class BlockInvarianceError(InputError):
    pass


class DomainError(InputError):
    """An interval function was evaluated outside its domain."""


class UnsupportedDegreeError(InputError):
    pass


class CapExceededError(AbelquotError):
    """A size cap was hit before the computation could finish.

    Parameters
    ----------
    message : str
        What was refused.
    size : int
        The size that triggered the refusal (an order or an index).
    cap : int
        The cap in force.
    """

    def __init__(self, message, size, cap):
        super().__init__(f"{message} (size {size} exceeds cap {cap})")
        self.message = message
        self.size = size
        self.cap = cap

    # self.args holds only the formatted text
    def __reduce__(self):
        return type(self), (self.message, self.size, self.cap)


class IndeterminateError(AbelquotError, ArithmeticError):
    """An interval comparison stayed ambiguous at the precision floor."""
