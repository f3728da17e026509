"""Exception types raised by the codec."""


class CodecError(Exception):
    """Base class for all srcodec errors."""


class PpmParseError(CodecError):
    """Malformed PPM input; message names the offending byte offset."""


class DegenerateInputError(CodecError):
    """Input lacks the variability an operation requires (e.g. zero covariance)."""


class LearningError(CodecError):
    """Transform learning failed (singular normal equations or non-invertible fit)."""


class DegenerateSelectionError(CodecError):
    """Selected atom is (numerically) inside the span of the already selected ones."""


class StreamFormatError(CodecError):
    """Compressed stream is corrupt, truncated, or has the wrong magic/version."""


class TargetUnreachableError(CodecError):
    """Requested rate/quality target cannot be met; carries the best achieved value."""

    def __init__(self, message, best_achieved=None):
        super().__init__(message)
        self.best_achieved = best_achieved
