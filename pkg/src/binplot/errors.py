"""Exception types shared across the package."""


class BinplotError(Exception):
    """Base class for all errors raised by this package."""


class InvalidDomainError(BinplotError, ValueError):
    """Domain extents are degenerate (min >= max)."""


class InvalidParameterError(BinplotError, ValueError):
    """A structural parameter is out of range (e.g. bins_x = 0)."""


class OutOfDomainError(BinplotError, ValueError):
    """A point lies outside the closed domain."""


class InvalidBinIndexError(BinplotError, IndexError):
    """Bin index outside [0, bin_count)."""


class PointOutOfDomainError(BinplotError, ValueError):
    """Dataset contains points outside an explicitly requested domain."""

    def __init__(self, indices):
        self.indices = list(indices)
        shown = ", ".join(str(i) for i in self.indices[:10])
        more = "" if len(self.indices) <= 10 else f" (+{len(self.indices) - 10} more)"
        super().__init__(f"points outside domain at indices: {shown}{more}")


class UnsupportedNormalizationError(BinplotError, ValueError):
    """The requested fill cannot be driven by this normalization mode."""


class GridTooSmallError(BinplotError, ValueError):
    """Attribute-block grid has fewer cells than classes."""


class TooManyClassesError(BinplotError, ValueError):
    """Class count exceeds what the encoding can represent."""


class EmptyBinError(BinplotError, ValueError):
    """A glyph was requested for a bin with no points."""


class MissingColumnError(BinplotError, ValueError):
    """CSV header lacks a required column."""


class CsvParseError(BinplotError, ValueError):
    """A CSV row could not be parsed; carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ConfigError(BinplotError, ValueError):
    """Design config file is malformed or uses unknown keys/values."""


class SpecNotValidatedError(BinplotError, ValueError):
    """compose() was called with a spec that failed validation."""
