"""Two-level rank dictionary over a plain bit vector.

Layout: a block is one 64-bit word, a superblock is four blocks (256 bits).
``superblocks[m]`` holds the number of ones in the first ``m`` superblocks
and ``blocks[p]`` the ones between the start of block p's superblock and
the start of block p. A query then costs two table reads and one masked
popcount; the block-lookup table of the textbook construction is not
materialised.

There is always one block past the last bit, so ``rank1(n_bits)`` reads
a valid (zero-padded) word without a branch.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

BLOCK_BITS = 64
BLOCKS_PER_SUPERBLOCK = 4
SUPERBLOCK_BITS = BLOCK_BITS * BLOCKS_PER_SUPERBLOCK

_U64 = np.uint64


def _popcount_words(words: np.ndarray) -> np.ndarray:
    from ._kernels_numpy import popcount

    return popcount(words)


def pack_bits(bits) -> tuple[np.ndarray, int]:
    """Pack a 0/1 sequence into uint64 words, bit j at position j % 64 of word j // 64."""
    b = np.asarray(bits, dtype=bool).ravel()
    n = b.size
    nwords = n // BLOCK_BITS + 1
    padded = np.zeros(nwords * BLOCK_BITS, dtype=bool)
    padded[:n] = b
    words = np.packbits(padded, bitorder="little").view("<u8")
    return words.astype(_U64), n


@dataclass(frozen=True, eq=False)
class RankBitVector:
    words: np.ndarray        # uint64, n_bits // 64 + 1 words
    n_bits: int
    superblocks: np.ndarray  # int64, cumulative ones before each superblock
    blocks: np.ndarray       # uint16, ones within the superblock before each block

    block_bits = BLOCK_BITS
    blocks_per_superblock = BLOCKS_PER_SUPERBLOCK

    def __len__(self):
        return self.n_bits

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.n_bits:
            raise IndexError(j)
        return (int(self.words[j >> 6]) >> (j & 63)) & 1

    def rank1(self, i: int) -> int:
        """Number of ones among the first ``i`` bits."""
        if not 0 <= i <= self.n_bits:
            raise IndexError(f"rank position {i} outside [0, {self.n_bits}]")
        p = i >> 6
        low = int(self.words[p]) & ((1 << (i & 63)) - 1)
        return int(self.superblocks[p >> 2]) + int(self.blocks[p]) + low.bit_count()

    def rank1_many(self, i, backend: str | None = None) -> np.ndarray:
        from ._accel import get_kernels

        i = np.asarray(i, dtype=np.int64)
        if i.size and (i.min() < 0 or i.max() > self.n_bits):
            raise IndexError("rank position out of range")
        return get_kernels(backend).rank1_many(self.words, self.superblocks, self.blocks, i)

    def to_bits(self) -> np.ndarray:
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return bits[: self.n_bits].astype(np.uint8)

    def kernel_args(self):
        return self.words, self.superblocks, self.blocks

    @property
    def nbytes(self) -> int:
        return self.words.nbytes + self.superblocks.nbytes + self.blocks.nbytes

    def __eq__(self, other):
        return (
            isinstance(other, RankBitVector)
            and self.n_bits == other.n_bits
            and np.array_equal(self.words, other.words)
            and np.array_equal(self.superblocks, other.superblocks)
            and np.array_equal(self.blocks, other.blocks)
        )


def build_rank(bits) -> RankBitVector:
    words, n = pack_bits(bits)
    return build_rank_from_words(words, n)


def build_rank_from_words(words: np.ndarray, n_bits: int) -> RankBitVector:
    """Rank directory for already packed ``words`` (length n_bits // 64 + 1)."""
    words = np.ascontiguousarray(words, dtype=_U64)
    if words.size != n_bits // BLOCK_BITS + 1:
        raise ValueError("word count must be n_bits // 64 + 1")
    per_block = _popcount_words(words)
    nblocks = words.size
    nsb = -(-nblocks // BLOCKS_PER_SUPERBLOCK)
    grid = np.zeros(nsb * BLOCKS_PER_SUPERBLOCK, dtype=np.int64)
    grid[:nblocks] = per_block
    grid = grid.reshape(nsb, BLOCKS_PER_SUPERBLOCK)
    within = np.cumsum(grid, axis=1) - grid
    superblocks = np.concatenate(([0], np.cumsum(grid.sum(axis=1))))
    return RankBitVector(
        words=words,
        n_bits=int(n_bits),
        superblocks=superblocks.astype(np.int64),
        blocks=within.ravel()[:nblocks].astype(np.uint16),
    )
