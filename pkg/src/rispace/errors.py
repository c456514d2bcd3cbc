"""Exception hierarchy shared by all modules.

The CLI maps each family to an exit code, so every error raised by the
library derives from one of the three bases below.
"""


class RispaceError(Exception):
    """Base class for all library errors."""


class NumericalError(RispaceError):
    """A numerical procedure could not produce a trustworthy value."""


class InadmissibleError(RispaceError, ValueError):
    """Parameters describe no valid object (space, Young function, ...)."""


class ParseError(RispaceError, ValueError):
    """Malformed textual input.

    Parameters
    ----------
    message : str
        Human-readable explanation.
    text : str, optional
        The input being parsed.
    position : int, optional
        Zero-based offset of the offending character.
    """

    def __init__(self, message, text=None, position=None):
        self.text = text
        self.position = position
        if text is not None and position is not None:
            message = f"{message} at position {position}: {text!r}"
        super().__init__(message)
