"""Exception hierarchy shared by every stage of the pipeline."""


class HybridIRError(Exception):
    """Base class for all errors raised by hybrid_ir."""


# ingestion
class FetchError(HybridIRError):
    pass


class NotFound(FetchError):
    pass


class TransportError(FetchError):
    pass


class TooLarge(FetchError):
    pass


class MalformedReference(HybridIRError, ValueError):
    pass


# color engine
class ImageDecodeError(HybridIRError):
    pass


class UnsupportedFormat(ImageDecodeError):
    pass


class Truncated(ImageDecodeError):
    pass


class EmptyReferenceSet(HybridIRError):
    pass


# weighting / index / query
class EmptyCorpus(HybridIRError):
    pass


class UnknownScheme(HybridIRError, ValueError):
    pass


class DuplicateId(HybridIRError, KeyError):
    pass


class UnknownRecord(HybridIRError, KeyError):
    pass


class CorruptIndex(HybridIRError):
    pass
