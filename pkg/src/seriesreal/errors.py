"""Exception hierarchy shared by every module."""


class SeriesRealError(Exception):
    """Base class for all errors raised by this package."""


class AlphabetError(SeriesRealError, ValueError):
    """An identifier or word does not belong to the expected alphabet."""

    def __init__(self, message, left=None, right=None):
        super().__init__(message)
        self.left = left
        self.right = right


class TruncationError(SeriesRealError, ValueError):
    """A word is longer than the truncation of the series it is evaluated on."""

    def __init__(self, length, truncation):
        super().__init__(f"word of length {length} exceeds truncation {truncation}")
        self.length = length
        self.truncation = truncation


class InsufficientDepthError(SeriesRealError):
    """A finite-depth residual table is not closed; raise the depths."""


class RankNotStabilizedError(SeriesRealError):
    """Hankel ranks differ between consecutive block sizes; raise the truncation."""


class UnsupportedError(SeriesRealError):
    """The requested construction is outside the implemented cases."""


class ParameterError(SeriesRealError, ValueError):
    """A parameter vector or search setting is invalid."""


class FormatError(SeriesRealError, ValueError):
    """Malformed input document. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
