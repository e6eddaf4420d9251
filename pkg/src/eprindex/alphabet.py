"""Ordered alphabets with dense integer ranks.

Symbols are single bytes. When the sentinel is included it takes rank 0
and every real symbol is shifted up by one, so the effective alphabet of
DNA is ``$ < A < C < G < T`` with 3 bits per packed character.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SentinelError, UnknownSymbolError

SENTINEL = "$"

DNA = "ACGT"
MURPHY10 = "ACEFGHKLPS"
IUPAC = "ACGTURYSWKMBDHVN"
PROTEIN = "ACDEFGHIKLMNPQRSTVWYBJOUXZ*"

PRESETS = {"dna": DNA, "murphy10": MURPHY10, "iupac": IUPAC, "protein": PROTEIN}
_BY_SIZE = {len(v): v for v in PRESETS.values()}


def _as_byte(s) -> int:
    if isinstance(s, (int, np.integer)):
        return int(s)
    if isinstance(s, str) and len(s) == 1:
        return ord(s.encode("latin-1"))
    if isinstance(s, (bytes, bytearray)) and len(s) == 1:
        return s[0]
    raise UnknownSymbolError(s)


def _as_bytes(x) -> bytes:
    if isinstance(x, str):
        return x.encode("latin-1")
    return bytes(x)


@dataclass(frozen=True)
class Alphabet:
    """Finite ordered alphabet.

    ``symbols`` lists the symbols in their lexicographic (application)
    order; it need not coincide with byte order.
    """

    symbols: bytes
    sentinel_included: bool = True
    _lut: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        syms = _as_bytes(self.symbols)
        object.__setattr__(self, "symbols", syms)
        if len(set(syms)) != len(syms):
            raise ValueError("alphabet symbols must be distinct")
        # sentinel + one symbol is still a valid 2-character effective alphabet
        if self.sigma_eff < 2:
            raise ValueError("effective alphabet needs at least two characters")
        if self.sigma_eff > 256:
            raise ValueError("at most 256 effective characters are supported")
        if self.sentinel_included and ord(SENTINEL) in syms:
            raise SentinelError("'$' is reserved for the sentinel")
        lut = np.full(256, -1, dtype=np.int16)
        lut[np.frombuffer(syms, dtype=np.uint8)] = np.arange(len(syms)) + self.offset
        object.__setattr__(self, "_lut", lut)

    @classmethod
    def from_text(cls, text, sentinel_included: bool = True) -> "Alphabet":
        """Alphabet made of the distinct bytes of ``text`` in byte order."""
        return cls(bytes(sorted(set(_as_bytes(text)))), sentinel_included)

    @classmethod
    def preset(cls, name: str, sentinel_included: bool = True) -> "Alphabet":
        return cls(PRESETS[name.lower()], sentinel_included)

    @classmethod
    def of_size(cls, sigma: int, sentinel_included: bool = True) -> "Alphabet":
        """Named alphabet of size 4, 10, 16 or 27; otherwise ``a, b, c, ...``."""
        if sigma in _BY_SIZE:
            return cls(_BY_SIZE[sigma], sentinel_included)
        if not 1 <= sigma <= 94:
            raise ValueError(f"no generic alphabet of size {sigma}")
        # printable ASCII from '%' upward skips '$'
        return cls(bytes(range(37, 37 + sigma)), sentinel_included)

    @property
    def sigma(self) -> int:
        return len(self.symbols)

    @property
    def offset(self) -> int:
        return 1 if self.sentinel_included else 0

    @property
    def sigma_eff(self) -> int:
        return len(self.symbols) + self.offset

    @property
    def bits_per_char(self) -> int:
        return max(1, (self.sigma_eff - 1).bit_length())

    def rank_of(self, s) -> int:
        if self.sentinel_included and s == SENTINEL:
            return 0
        byte = _as_byte(s)
        r = int(self._lut[byte]) if 0 <= byte < 256 else -1
        if r < 0:
            raise UnknownSymbolError(s)
        return r

    def symbol_of(self, r: int) -> str:
        if not 0 <= r < self.sigma_eff:
            raise IndexError(f"rank {r} outside [0, {self.sigma_eff})")
        if self.sentinel_included:
            if r == 0:
                return SENTINEL
            r -= 1
        return chr(self.symbols[r])

    def encode(self, text) -> np.ndarray:
        """Map a sentinel-free text to a uint8 rank array.

        Raises UnknownSymbolError naming the first offending 1-based position.
        """
        raw = np.frombuffer(_as_bytes(text), dtype=np.uint8)
        ranks = self._lut[raw]
        bad = np.flatnonzero(ranks < 0)
        if bad.size:
            pos = int(bad[0])
            raise UnknownSymbolError(chr(raw[pos]), pos + 1)
        return ranks.astype(np.uint8)

    def decode(self, ranks) -> str:
        return "".join(self.symbol_of(int(r)) for r in ranks)
