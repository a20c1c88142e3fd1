"""Exception types shared across the toolkit."""


class ArtqrError(Exception):
    """Base class for all toolkit errors."""


class CapacityExceeded(ArtqrError):
    """Payload does not fit the symbol version/level capacity."""


class UncorrectableError(ArtqrError):
    """Reed-Solomon decoding failed or exceeded the correction capability."""


class FormatInfoError(ArtqrError):
    """Neither format-information copy passed the BCH check."""


class DimensionMismatch(ArtqrError):
    """Image/grid/kernel dimensions are inconsistent."""


class StylizerFailure(ArtqrError):
    """A stylizer violated its contract (process error or dimension change)."""


class NonConvergence(ArtqrError):
    """Error correction did not reach an all-robust state within the iteration budget."""
