"""Exception hierarchy shared by all perseq modules."""


class PerseqError(Exception):
    """Base class for every error raised by this package."""


class InvalidSequence(PerseqError, ValueError):
    pass


class NonPositivePeriod(InvalidSequence):
    pass


class DuplicatePoint(InvalidSequence):
    pass


class EmptyMotif(InvalidSequence):
    pass


class ZeroFactor(PerseqError, ValueError):
    pass


class MotifSizeOverflow(PerseqError, ValueError):
    """lcm of motif sizes exceeds the configured bound."""


class DimensionMismatch(PerseqError, ValueError):
    pass


class NonGenericInput(PerseqError, ValueError):
    pass


class TooFewPoints(PerseqError, ValueError):
    pass


class IndexOutOfRange(PerseqError, IndexError):
    pass


class NegativeRadius(PerseqError, ValueError):
    pass


class RadiusMismatch(PerseqError, ValueError):
    pass


class EpsilonTooLarge(PerseqError, ValueError):
    pass


class NegativeTolerance(PerseqError, ValueError):
    pass


# corpus ingestion
class CorpusError(PerseqError):
    pass


class ParseError(CorpusError, ValueError):
    pass


class SchemaError(CorpusError, ValueError):
    pass


class DuplicateId(CorpusError, ValueError):
    pass


class UnknownId(PerseqError, KeyError):
    pass
