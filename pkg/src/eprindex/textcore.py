"""Packed text, suffix array and BWT construction.

Texts are handled as rank arrays (see :class:`~eprindex.alphabet.Alphabet`)
terminated by the sentinel rank 0. Public positions are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SentinelError

WORD_BITS = 64
_U64 = np.uint64


@dataclass(frozen=True, eq=False)
class PackedText:
    """b-bit characters packed least-significant-first into uint64 words.

    With ``chars_per_word=None`` character j occupies bits [j*b, (j+1)*b) of
    one continuous bit stream and may straddle two words. With a fixed
    ``chars_per_word`` k, word w holds characters [w*k, (w+1)*k) and no
    character straddles (the layout the rank dictionary reads block-wise).
    Unused trailing bits are always zero.
    """

    words: np.ndarray
    n: int
    b: int
    chars_per_word: int | None = None

    def get(self, j: int) -> int:
        """Character at 0-based offset ``j``."""
        if not 0 <= j < self.n:
            raise IndexError(j)
        mask = (1 << self.b) - 1
        if self.chars_per_word is not None:
            w, slot = divmod(j, self.chars_per_word)
            return (int(self.words[w]) >> (slot * self.b)) & mask
        off = j * self.b
        w, shift = off >> 6, off & 63
        val = int(self.words[w]) >> shift
        if shift + self.b > WORD_BITS:
            val |= int(self.words[w + 1]) << (WORD_BITS - shift)
        return val & mask

    def unpack(self) -> np.ndarray:
        mask = _U64((1 << self.b) - 1)
        j = np.arange(self.n, dtype=np.int64)
        if self.chars_per_word is not None:
            w = j // self.chars_per_word
            shift = ((j % self.chars_per_word) * self.b).astype(_U64)
            return ((self.words[w] >> shift) & mask).astype(np.uint8)
        off = j * self.b
        w = off >> 6
        shift = (off & 63).astype(_U64)
        val = self.words[w] >> shift
        spill = np.flatnonzero((off & 63) + self.b > WORD_BITS)
        if spill.size:
            val[spill] |= self.words[w[spill] + 1] << (_U64(WORD_BITS) - shift[spill])
        return (val & mask).astype(np.uint8)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return (
            isinstance(other, PackedText)
            and (self.n, self.b, self.chars_per_word) == (other.n, other.b, other.chars_per_word)
            and np.array_equal(self.words, other.words)
        )

    @property
    def nbytes(self) -> int:
        return self.words.nbytes


def pack(ranks, b: int, chars_per_word: int | None = None) -> PackedText:
    """Pack ``ranks`` (each < 2**b) into a :class:`PackedText`."""
    if not 1 <= b <= 8:
        raise ValueError("bits per character must be in 1..8")
    x = np.asarray(ranks, dtype=np.int64).ravel()
    n = x.size
    if n and (x.min() < 0 or x.max() >= 1 << b):
        raise ValueError(f"rank does not fit into {b} bits")
    vals = x.astype(_U64)
    if chars_per_word is not None:
        if chars_per_word * b > WORD_BITS:
            raise ValueError("chars_per_word * b exceeds the word size")
        nwords = -(-n // chars_per_word)
        grid = np.zeros(nwords * chars_per_word, dtype=_U64)
        grid[:n] = vals
        grid = grid.reshape(nwords, chars_per_word)
        shifts = (np.arange(chars_per_word) * b).astype(_U64)
        words = np.bitwise_or.reduce(grid << shifts, axis=1) if nwords else np.zeros(0, _U64)
        return PackedText(words.astype(_U64), n, b, chars_per_word)
    nwords = -(-(n * b) // WORD_BITS)
    words = np.zeros(nwords, dtype=_U64)
    off = np.arange(n, dtype=np.int64) * b
    w = off >> 6
    shift = (off & 63).astype(_U64)
    np.bitwise_or.at(words, w, vals << shift)
    spill = np.flatnonzero((off & 63) + b > WORD_BITS)
    if spill.size:
        np.bitwise_or.at(words, w[spill] + 1, vals[spill] >> (_U64(WORD_BITS) - shift[spill]))
    return PackedText(words, n, b, None)


def _check_sentinel(x: np.ndarray) -> None:
    if x.size == 0:
        raise SentinelError("empty text has no sentinel")
    last = x[-1]
    if np.count_nonzero(x == last) != 1 or x.min() != last:
        raise SentinelError("text must end with a unique, smallest sentinel")


def build_suffix_array(text) -> np.ndarray:
    """1-based suffix array of a sentinel-terminated rank sequence.

    Prefix doubling on numpy sort keys, O(n log^2 n) worst case and a
    handful of rounds for typical inputs.
    """
    x = np.asarray(text, dtype=np.int64).ravel()
    _check_sentinel(x)
    n = x.size
    rank = x - x.min()
    order = np.argsort(rank, kind="stable")
    k = 1
    while True:
        second = np.full(n, -1, dtype=np.int64)
        second[: n - k] = rank[k:] if k < n else second[:0]
        order = np.lexsort((second, rank))
        r1, r2 = rank[order], second[order]
        new = np.empty(n, dtype=np.int64)
        new[order] = np.concatenate(([0], np.cumsum((r1[1:] != r1[:-1]) | (r2[1:] != r2[:-1]))))
        rank = new
        if rank[order[-1]] == n - 1 or k >= n:
            break
        k <<= 1
    return order + 1


def bwt_ranks(text, sa) -> np.ndarray:
    """BWT as an unpacked rank array: L[i] = T[sa[i] - 1], or $ for sa[i] = 1."""
    x = np.asarray(text).ravel()
    sa = np.asarray(sa, dtype=np.int64)
    # sa - 2 is -1 for the first suffix, which wraps to the sentinel at x[-1]
    return x[sa - 2]


def bwt_from_sa(text, sa, b: int, chars_per_word: int | None = None) -> PackedText:
    return pack(bwt_ranks(text, sa), b, chars_per_word)


def reverse_text(text) -> np.ndarray:
    """Reverse the non-sentinel prefix and keep the sentinel last."""
    x = np.asarray(text).ravel()
    _check_sentinel(x)
    return np.concatenate((x[-2::-1], x[-1:]))


def with_sentinel(ranks) -> np.ndarray:
    """Append the sentinel rank 0 to a sentinel-free rank array."""
    x = np.asarray(ranks, dtype=np.uint8).ravel()
    if x.size and x.min() == 0:
        raise SentinelError("input already contains rank 0")
    return np.concatenate((x, np.zeros(1, dtype=np.uint8)))
