"""Exception types raised across the package."""


class FrameError(Exception):
    """Base class for every error raised by frameforge."""


class LengthMismatch(FrameError, ValueError):
    pass


class ValueOutOfRange(FrameError, ValueError):
    pass


class TooLarge(FrameError, ValueError):
    pass


class UnknownSpec(FrameError, ValueError):
    pass


class RetryExhausted(FrameError, RuntimeError):
    pass


class UnboundVariable(FrameError, KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}"


class BudgetExceeded(FrameError, RuntimeError):
    pass


class NotCongruential(FrameError, ValueError):
    pass


class NotClosed(FrameError, ValueError):
    pass


class TrivialFrame(FrameError, ValueError):
    pass


class NotSwitching(FrameError, ValueError):
    pass


class TermSyntaxError(FrameError, ValueError):
    """Parse failure with a 1-based position and the tokens that would have fit."""

    def __init__(self, message, line, column, expected=()):
        self.message = message
        self.line = line
        self.column = column
        self.expected = tuple(sorted(set(expected)))
        super().__init__(str(self))

    def __str__(self):
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text
