"""Enhanced prefix-sum rank (EPR) dictionary.

Answers ``prefix_occ(c, i)``, the number of BWT characters <= c among the
first i, in constant time straight from the packed BWT. Each 64-bit word
holds an even number of b-bit characters grouped into 2b-bit lanes. A lane
subtraction ``(2**b + c) - x`` leaves bit b of the lane set exactly when
``x <= c``. The minuend is at least 2**b and the subtrahend below it, so
no borrow leaves the lane. Block and superblock tables then supply the
counts before the block.

Lane convention (LSB-first packing): lane k holds characters 2k (low half)
and 2k+1 (high half). The in-word steps are named after 1-based text
positions, so the "even" word covers the high-half characters 2, 4, ...
and the "odd" word the low-half characters 1, 3, ... Merging as
``even | (odd << 1)`` puts character 2k's flag at bit b+1 of its lane and
character 2k+1's at bit b. Printing lanes in text order, each lane MSB
first (see :func:`lane_string`), gives the bit strings one writes down by
hand, e.g. for the DNA word ACGCGTAT and c = G.

Memory layout: a block is one or more consecutive BWT words stored
together with their uint16 block counts in one aligned record. For DNA a
record is 16 bytes: one BWT word and its counts. For larger alphabets a
record is a whole number of cache lines whose counts refer to the middle
of the block; a query adds or subtracts the words between the middle and
its position, a fixed masked run of at most SCAN_WORDS words.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._accel import get_kernels
from .alphabet import Alphabet
from .textcore import PackedText, pack

WORD_BITS = 64
CACHE_LINE = 64
# the scan between a query word and the anchor is a fixed, masked run of
# SCAN_WORDS words, which the compiler turns into straight vector code
SCAN_WORDS = 8
MAX_WORDS_PER_BLOCK = 2 * SCAN_WORDS + 1
# positions stay below 2**31 so the reciprocal product fits in 64 bits
MAX_LENGTH = (1 << 31) - 1


def reciprocal(d: int) -> tuple[int, int]:
    """(m, k) with ``(i * m) >> k == i // d`` for all 0 <= i < 2**31."""
    k = 31 + (d - 1).bit_length()
    return -(-(1 << k) // d), k


def chars_per_word(b: int) -> int:
    if b == 1:
        # the merged flag of the top lane would land on bit 64
        return 62
    return 2 * (WORD_BITS // (2 * b))


def block_shape(sigma_eff: int) -> tuple[int, int]:
    """(BWT words per block, uint64 words per record).

    A record holds the block's BWT words followed by its sigma_eff - 1
    uint16 counts. When the counts fit in one word (DNA with sentinel and
    smaller), a block is a single BWT word: a 16-byte record and no scan.
    Otherwise a record is a whole number of cache lines, the most whose
    block still keeps every word within SCAN_WORDS of the middle anchor.
    """
    count_bytes = 2 * (sigma_eff - 1)
    if count_bytes <= 8:
        return 1, 2
    lines = -(-(count_bytes + 8) // CACHE_LINE)
    while (lines * CACHE_LINE + CACHE_LINE - count_bytes) // 8 <= MAX_WORDS_PER_BLOCK:
        lines += 1
    return (lines * CACHE_LINE - count_bytes) // 8, lines * CACHE_LINE // 8


def _scan_words(wpb: int) -> int:
    h = wpb // 2
    return 0 if wpb == 1 else SCAN_WORDS * -(-max(h, wpb - 1 - h) // SCAN_WORDS)


def default_blocks_per_superblock(chars_per_block: int) -> int:
    """Largest power of two whose superblock still fits 16-bit block counts."""
    return 1 << (((1 << 16) // chars_per_block).bit_length() - 1)


def aligned_zeros(shape, dtype, align: int = CACHE_LINE) -> np.ndarray:
    dtype = np.dtype(dtype)
    nbytes = int(np.prod(shape)) * dtype.itemsize
    raw = np.zeros(nbytes + align, dtype=np.uint8)
    start = -raw.ctypes.data % align
    return raw[start:start + nbytes].view(dtype).reshape(shape)


def _repeat(lane_value: int, b: int, lanes: int) -> int:
    return sum(lane_value << (k * 2 * b) for k in range(lanes))


@dataclass(frozen=True, eq=False)
class LaneMasks:
    """Per-block bit masks, one 64-bit word each.

    ``rb[c]`` repeats the lane ``2**b + c``; ``m_e`` selects the low half of
    every lane, ``bm`` its bit b. ``prefix[t]`` keeps the merged flags of the
    first t characters of a word.
    """

    b: int
    chars_per_word: int
    rb: np.ndarray
    m_e: int
    bm: int
    prefix: np.ndarray

    @classmethod
    def build(cls, b: int, sigma_eff: int) -> "LaneMasks":
        cpw = chars_per_word(b)
        lanes = cpw // 2
        rb = [_repeat((1 << b) | c, b, lanes) for c in range(sigma_eff)]
        prefix = [0]
        for j in range(cpw):
            bit = (j // 2) * 2 * b + b + (1 if j % 2 == 0 else 0)
            prefix.append(prefix[-1] | (1 << bit))
        return cls(
            b=b,
            chars_per_word=cpw,
            rb=np.array(rb, dtype=np.uint64),
            m_e=_repeat((1 << b) - 1, b, lanes),
            bm=_repeat(1 << b, b, lanes),
            prefix=np.array(prefix, dtype=np.uint64),
        )

    @property
    def nbytes(self) -> int:
        return self.rb.nbytes + self.prefix.nbytes + 16


def in_block_steps(block_word: int, c_rank: int, b: int) -> dict[str, int]:
    """All intermediate words of the in-block query for character ``c_rank``."""
    masks = LaneMasks.build(b, c_rank + 1)
    rb = int(masks.rb[c_rank])
    low = block_word & masks.m_e
    high = (block_word >> b) & masks.m_e
    odd_diff = rb - low
    even_diff = rb - high
    odd = odd_diff & masks.bm
    even = even_diff & masks.bm
    return {
        "rb": rb, "m_e": masks.m_e, "bm": masks.bm,
        "even_chars": high, "even_diff": even_diff, "even": even,
        "odd_chars": low, "odd_diff": odd_diff, "odd": odd,
        "merged": even | (odd << 1),
    }


def in_block_prefix_rank(block_word: int, c_rank: int, t: int, b: int) -> int:
    """Characters <= ``c_rank`` among the first ``t`` characters of one packed word."""
    cpw = chars_per_word(b)
    if not 0 <= t <= cpw:
        raise ValueError(f"t must lie in [0, {cpw}]")
    masks = LaneMasks.build(b, c_rank + 1)
    return _in_block(block_word, int(masks.rb[c_rank]), masks.m_e, masks.bm, b, int(masks.prefix[t]))


def _in_block(w: int, rb: int, m_e: int, bm: int, b: int, pm: int) -> int:
    odd = (rb - (w & m_e)) & bm
    even = (rb - ((w >> b) & m_e)) & bm
    return ((even | (odd << 1)) & pm).bit_count()


def lane_string(word: int, b: int, lanes: int) -> str:
    """Render ``word`` lane by lane in text order, each lane MSB first.

    b-bit halves are separated by spaces, e.g. ``"01 10 01 10"`` for two
    DNA lanes of rb(G).
    """
    parts = []
    for k in range(lanes):
        lane = (word >> (k * 2 * b)) & ((1 << 2 * b) - 1)
        bits = format(lane, f"0{2 * b}b")
        parts += [bits[:b], bits[b:]]
    return " ".join(parts)


@dataclass(frozen=True, eq=False)
class EPRDictionary:
    """Packed BWT plus per-character block and superblock counts.

    Record q covers characters [q*L, (q+1)*L) with L = words_per_block *
    chars_per_word. Its first ``words_per_block`` uint64 words hold those
    characters; the uint16 slots after them hold ``blocks[q, c]``, the number
    of characters <= c between the start of q's superblock and the anchor
    of q, which sits ``anchor_word * chars_per_word`` characters into the
    block. ``superblocks[m, c]`` counts characters <= c in the first m
    superblocks. The largest character has no column: its prefix count is
    the position itself.
    """

    n: int
    sigma_eff: int
    records: np.ndarray      # uint64 [n_blocks, record_words], cache-line aligned
    superblocks: np.ndarray  # int64 [n_superblocks + 1, sigma_eff - 1]
    masks: LaneMasks
    words_per_block: int
    blocks_per_superblock: int

    kind = "epr"

    @property
    def b(self) -> int:
        return self.masks.b

    @property
    def chars_per_word(self) -> int:
        return self.masks.chars_per_word

    @property
    def chars_per_block(self) -> int:
        return self.words_per_block * self.chars_per_word

    @property
    def anchor_word(self) -> int:
        return self.words_per_block // 2

    @property
    def max_between(self) -> int:
        """Most full words a query visits between its word and the anchor."""
        return max(self.anchor_word, self.words_per_block - 1 - self.anchor_word)

    @property
    def scan_words(self) -> int:
        """Fixed trip count of the kernel's between-words pass.

        Zero for one-word blocks; otherwise the longest run rounded up to a
        multiple of SCAN_WORDS so the compiled loop takes its vector path.
        """
        return _scan_words(self.words_per_block)

    @property
    def words(self) -> np.ndarray:
        """BWT words in text order; slots past n hold the largest code."""
        return self.records[:, : self.words_per_block].ravel()

    @property
    def blocks(self) -> np.ndarray:
        first = 4 * self.words_per_block
        return self.records.view(np.uint16)[:, first:first + self.sigma_eff - 1]

    @property
    def bwt(self) -> PackedText:
        cpw = self.chars_per_word
        words = self.words[: -(-self.n // cpw)]
        x = PackedText(words, self.n, self.b, cpw).unpack()
        return pack(x, self.b, cpw)

    def _check(self, c_rank: int, i: int) -> None:
        if not 0 <= c_rank < self.sigma_eff:
            raise IndexError(f"character rank {c_rank} outside [0, {self.sigma_eff})")
        if not 0 <= i <= self.n:
            raise IndexError(f"position {i} outside [0, {self.n}]")

    def prefix_occ(self, c_rank: int, i: int) -> int:
        self._check(c_rank, i)
        if c_rank == self.sigma_eff - 1:
            return i
        q, t = divmod(i, self.chars_per_block)
        w, tt = divmod(t, self.chars_per_word)
        h = self.anchor_word
        m = self.masks
        rb = int(m.rb[c_rank])

        def count(j, k):
            return _in_block(int(self.records[q, j]), rb, m.m_e, m.bm, self.b, int(m.prefix[k]))

        between = sum(count(j, self.chars_per_word) for j in range(min(w, h), max(w, h)))
        inblock = count(w, tt) + (between if w >= h else -between)
        return (int(self.superblocks[q // self.blocks_per_superblock, c_rank])
                + int(self.blocks[q, c_rank]) + inblock)

    def occ(self, c_rank: int, i: int) -> int:
        hi = self.prefix_occ(c_rank, i)
        return hi if c_rank == 0 else hi - self.prefix_occ(c_rank - 1, i)

    def smaller(self, c_rank: int, i: int) -> int:
        """Characters strictly below ``c_rank`` among the first i."""
        self._check(c_rank, i)
        return 0 if c_rank == 0 else self.prefix_occ(c_rank - 1, i)

    def access(self, i: int) -> int:
        """BWT character at 1-based position ``i``."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        q, t = divmod(i - 1, self.chars_per_block)
        j, slot = divmod(t, self.chars_per_word)
        return (int(self.records[q, j]) >> (slot * self.b)) & ((1 << self.b) - 1)

    # batched queries -------------------------------------------------------

    def pair_many(self, c, i, backend: str | None = None):
        """Arrays (#chars < c, #chars == c) among the first i, elementwise."""
        c = np.asarray(c, dtype=np.int64)
        i = np.asarray(i, dtype=np.int64)
        _check_many(c, i, self.sigma_eff, self.n)
        return get_kernels(backend).pair_many("epr", self.kernel_args, c, i)

    def prefix_occ_many(self, c, i, backend: str | None = None) -> np.ndarray:
        lt, eq = self.pair_many(c, i, backend)
        return lt + eq

    def occ_many(self, c, i, backend: str | None = None) -> np.ndarray:
        return self.pair_many(c, i, backend)[1]

    def access_many(self, i, backend: str | None = None) -> np.ndarray:
        i = np.asarray(i, dtype=np.int64)
        if i.size and (i.min() < 1 or i.max() > self.n):
            raise IndexError("position out of range")
        return get_kernels(backend).epr_access_many(self.kernel_args, i - 1)

    @cached_property
    def kernel_args(self):
        m = self.masks
        magic, k = reciprocal(self.chars_per_block)
        sb_shift = self.blocks_per_superblock.bit_length() - 1
        return (
            self.records,
            self.records.view(np.uint16),
            self.superblocks,
            m.rb,
            m.prefix,
            np.array([m.m_e, m.bm, self.b, magic, k, *reciprocal(self.chars_per_word)],
                     dtype=np.uint64),
            # entry 5: (t * it) >> 16 == t // chars_per_word for t < chars_per_block
            np.array([self.chars_per_word, sb_shift, self.sigma_eff, self.words_per_block,
                      self.chars_per_block, -(-(1 << 16) // self.chars_per_word),
                      self.anchor_word, self.scan_words], dtype=np.int64),
        )

    def space(self) -> dict[str, int]:
        """Bytes per component; record padding is charged to the counts."""
        bwt = self.records.shape[0] * self.words_per_block * 8
        counts = self.records.nbytes - bwt + self.superblocks.nbytes
        return {"bwt": bwt, "counts": counts, "fixed": self.masks.nbytes}

    @property
    def nbytes(self) -> int:
        return sum(self.space().values())

    def __eq__(self, other):
        return (
            isinstance(other, EPRDictionary)
            and (self.n, self.sigma_eff, self.words_per_block, self.blocks_per_superblock)
            == (other.n, other.sigma_eff, other.words_per_block, other.blocks_per_superblock)
            and np.array_equal(self.records, other.records)
            and np.array_equal(self.superblocks, other.superblocks)
        )


def _check_many(c, i, sigma_eff, n):
    if c.shape != i.shape:
        raise ValueError("character and position arrays differ in shape")
    if c.size and (c.min() < 0 or c.max() >= sigma_eff):
        raise IndexError("character rank out of range")
    if i.size and (i.min() < 0 or i.max() > n):
        raise IndexError("position out of range")


def build_epr(bwt, alphabet: Alphabet | int, blocks_per_superblock: int | None = None) -> EPRDictionary:
    """Build the dictionary from a BWT given as ranks or as a PackedText.

    ``alphabet`` may be an :class:`Alphabet` or just the effective size.
    """
    sigma_eff = alphabet.sigma_eff if isinstance(alphabet, Alphabet) else int(alphabet)
    if sigma_eff < 2:
        raise ValueError("need at least two characters")
    b = max(1, (sigma_eff - 1).bit_length())
    x = bwt.unpack() if isinstance(bwt, PackedText) else np.asarray(bwt, dtype=np.uint8).ravel()
    n = x.size
    if n == 0:
        raise ValueError("empty BWT")
    if n > MAX_LENGTH:
        raise ValueError(f"BWT longer than {MAX_LENGTH} characters")
    if int(x.max()) >= sigma_eff:
        bad = int(np.flatnonzero(x >= sigma_eff)[0])
        raise ValueError(f"character code {int(x[bad])} at position {bad + 1} exceeds the alphabet")
    cpw = chars_per_word(b)
    wpb, rec_words = block_shape(sigma_eff)
    cpb = wpb * cpw
    bps = default_blocks_per_superblock(cpb) if blocks_per_superblock is None else int(blocks_per_superblock)
    if bps < 1 or bps & (bps - 1):
        raise ValueError("blocks_per_superblock must be a power of two")
    if bps * cpb > 1 << 16:
        raise ValueError("superblock too large for 16-bit block counts")

    nblocks = n // cpb + 1
    # padding slots hold the largest code so they never count as <= c
    grid = np.full(nblocks * cpb, (1 << b) - 1, dtype=np.uint8)
    grid[:n] = x
    records = aligned_zeros((nblocks, rec_words), np.uint64, align=CACHE_LINE)
    assert wpb // 2 + _scan_words(wpb) <= rec_words
    records[:, :wpb] = pack(grid, b, cpw).words.reshape(nblocks, wpb)

    grid = grid.reshape(nblocks, cpb)
    anchor = (wpb // 2) * cpw
    nsb = -(-nblocks // bps)
    per_block = np.zeros((nsb * bps, sigma_eff - 1), dtype=np.int64)
    head = np.zeros((nblocks, sigma_eff - 1), dtype=np.int64)
    for c in range(sigma_eff - 1):
        le = grid <= c
        per_block[:nblocks, c] = np.count_nonzero(le, axis=1)
        head[:, c] = np.count_nonzero(le[:, :anchor], axis=1)
    per_block = per_block.reshape(nsb, bps, sigma_eff - 1)
    within = (np.cumsum(per_block, axis=1) - per_block).reshape(nsb * bps, sigma_eff - 1)[:nblocks] + head
    if within.max(initial=0) > np.iinfo(np.uint16).max:
        raise ValueError("superblock too large for 16-bit block counts")
    superblocks = np.zeros((nsb + 1, sigma_eff - 1), dtype=np.int64)
    superblocks[1:] = np.cumsum(per_block.sum(axis=1), axis=0)
    first = 4 * wpb
    records.view(np.uint16)[:, first:first + sigma_eff - 1] = within
    return EPRDictionary(
        n=n,
        sigma_eff=sigma_eff,
        records=records,
        superblocks=superblocks,
        masks=LaneMasks.build(b, sigma_eff),
        words_per_block=wpb,
        blocks_per_superblock=bps,
    )
