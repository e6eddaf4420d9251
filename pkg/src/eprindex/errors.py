"""Exception hierarchy shared by all modules."""


class EprIndexError(Exception):
    """Base class for every error raised by this package."""


class UnknownSymbolError(EprIndexError, ValueError):
    """A symbol is not part of the alphabet.

    ``position`` is the 1-based offset in the offending input when known.
    """

    def __init__(self, symbol, position=None):
        self.symbol = symbol
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"symbol {symbol!r}{where} is not in the alphabet")


class SentinelError(EprIndexError, ValueError):
    """Sentinel missing, duplicated or used where it is not allowed."""


class IndexFileError(EprIndexError):
    """Base class for index-file decoding problems."""


class BadMagicError(IndexFileError):
    pass


class VersionMismatchError(IndexFileError):
    pass


class TruncatedIndexError(IndexFileError):
    pass


class ChecksumError(IndexFileError):
    pass
