"""Exception hierarchy shared by all audiofp modules."""


class AudioFpError(Exception):
    """Base class for every error raised by this package."""


class DecodeError(AudioFpError):
    """WAV container is malformed or truncated."""


class UnsupportedFormat(AudioFpError):
    """Codec, bit depth, or channel layout we do not handle."""


class InsufficientAudio(AudioFpError):
    """Signal too short for the requested analysis."""


class DomainError(AudioFpError):
    """Argument outside the mathematical domain of an operation."""


class ShapeError(AudioFpError):
    """Matrix/vector dimensions do not match the expected layout."""


class NoOnsets(AudioFpError):
    """Onset envelope carries no energy; tempo cannot be estimated."""


class InsufficientData(AudioFpError):
    """Too few tracks to fit corpus-level statistics."""


class NotFound(AudioFpError):
    """Requested track id is not present."""


class InvalidK(AudioFpError):
    """Requested neighbor count exceeds the available tracks."""


class TagsMissing(AudioFpError):
    """Genre tags absent for one or more tracks."""


class DuplicateTrack(AudioFpError):
    """The same track id appears more than once."""


class ParseError(AudioFpError):
    """A persisted file could not be parsed."""


class SchemaError(AudioFpError):
    """A persisted file has inconsistent or unexpected structure."""


class EmptyCorpus(AudioFpError):
    """No decodable tracks were found."""
