"""Exception hierarchy for the pickseg package."""


class PickSegError(Exception):
    """Base class for all pickseg errors."""


class NonUnitQuaternion(PickSegError):
    """Quaternion norm is too far from 1 to be renormalized safely."""


class EmptySeries(PickSegError):
    """A series with zero samples was supplied."""


class SeriesTooShort(PickSegError):
    """A series has too few samples for the requested operation."""


class SeriesTooLong(PickSegError):
    """A series exceeds the configured row limit."""


class EmptyObservations(PickSegError):
    """Kernel regression was asked to estimate from zero observations."""


class DegenerateWeights(PickSegError):
    """All kernel weights underflowed to zero at the query point."""


class DegenerateInput(PickSegError):
    """Input carries no usable signal (e.g. a motionless recording)."""


class BadRange(PickSegError):
    """An index range does not fit inside the series."""


class WrongExampleCount(PickSegError):
    """The example set does not match what the prompting approach requires."""


class MissingExamplesForApproach(PickSegError):
    """An example-based approach was requested without example recordings."""


class NoSegmentsFound(PickSegError):
    """Model output contained no parseable segment descriptions."""


class UnknownLabel(PickSegError):
    """A label outside the closed primitive set was encountered."""


class MalformedRange(PickSegError):
    """A segment range has start > end."""


class OverlapError(PickSegError):
    """Parsed segment ranges overlap."""


class TransportError(PickSegError):
    """The chat-completion endpoint could not be reached or answered badly."""


class ParseError(PickSegError):
    """Model reply could not be parsed; carries the raw reply for audit."""

    def __init__(self, message: str, raw_reply: str = ""):
        super().__init__(message)
        self.raw_reply = raw_reply


class EmptyEvalSet(PickSegError):
    """Evaluation was requested over an empty set of sequences."""


class ConfigError(PickSegError):
    """A configuration file or value is invalid."""


class FileFormatError(PickSegError):
    """A data file violates its format contract; message carries the line."""
