"""Realizations of formal series over labeled learning events."""
from .errors import (
    AlphabetError,
    FormatError,
    InsufficientDepthError,
    ParameterError,
    RankNotStabilizedError,
    SeriesRealError,
    TruncationError,
    UnsupportedError,
)
from .events import Alphabet, Event, Word, concat, embed, lift, project, words_upto
from .series import (
    TruncatedSeries,
    evaluate,
    indicator_series,
    left_shift,
    linear_combine,
    right_shift,
    tabulate,
)

__version__ = "0.1.0"
