"""Balanced binary wavelet tree, the O(log sigma) baseline.

The tree is code-based: level k splits on bit k (from the top) of the
b-bit character code. Each level is one n-bit :class:`RankBitVector` in
which the nodes occupy consecutive spans, ordered by code prefix. Node
spans and the number of ones before each node are kept in small tables,
so moving to a child costs one rank query. A node holding a single
character is a leaf; the bits below it are stored but never read.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ._accel import get_kernels
from .alphabet import Alphabet
from .bitrank import RankBitVector, build_rank
from .eprdict import _check_many
from .textcore import PackedText


@dataclass(frozen=True, eq=False)
class WaveletTree:
    levels: tuple[RankBitVector, ...]
    sigma_eff: int
    n: int
    node_start: np.ndarray  # int64 [levels, 2**levels]
    node_ones: np.ndarray   # int64 [levels, 2**levels]
    node_symbols: np.ndarray  # int64 [levels, 2**levels]

    kind = "wt"

    @property
    def height(self) -> int:
        return len(self.levels)

    def _check(self, c_rank, i):
        if not 0 <= c_rank < self.sigma_eff:
            raise IndexError(f"character rank {c_rank} outside [0, {self.sigma_eff})")
        if not 0 <= i <= self.n:
            raise IndexError(f"position {i} outside [0, {self.n}]")

    def pair(self, c_rank: int, i: int) -> tuple[int, int]:
        """(#chars < c, #chars == c) among the first i, in one root-to-leaf walk."""
        self._check(c_rank, i)
        h = self.height
        lt, pos, p = 0, i, 0
        for k in range(h):
            if self.node_symbols[k, p] <= 1:
                break
            ones = self.levels[k].rank1(int(self.node_start[k, p]) + pos) - int(self.node_ones[k, p])
            if (c_rank >> (h - 1 - k)) & 1:
                lt += pos - ones
                pos = ones
                p = 2 * p + 1
            else:
                pos -= ones
                p = 2 * p
        return lt, pos

    def occ(self, c_rank: int, i: int) -> int:
        return self.pair(c_rank, i)[1]

    def prefix_occ(self, c_rank: int, i: int) -> int:
        lt, eq = self.pair(c_rank, i)
        return lt + eq

    def smaller(self, c_rank: int, i: int) -> int:
        return self.pair(c_rank, i)[0]

    def access(self, i: int) -> int:
        """Character at 1-based position ``i``, read from the path bits."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        pos, p, h = i - 1, 0, self.height
        for k in range(h):
            x = int(self.node_start[k, p]) + pos
            bit = self.levels[k][x]
            ones = self.levels[k].rank1(x) - int(self.node_ones[k, p])
            pos = ones if bit else pos - ones
            p = 2 * p + bit
        return p

    def pair_many(self, c, i, backend: str | None = None):
        c = np.asarray(c, dtype=np.int64)
        i = np.asarray(i, dtype=np.int64)
        _check_many(c, i, self.sigma_eff, self.n)
        return get_kernels(backend).pair_many("wt", self.kernel_args, c, i)

    def prefix_occ_many(self, c, i, backend: str | None = None) -> np.ndarray:
        lt, eq = self.pair_many(c, i, backend)
        return lt + eq

    def occ_many(self, c, i, backend: str | None = None) -> np.ndarray:
        return self.pair_many(c, i, backend)[1]

    def access_many(self, i, backend: str | None = None) -> np.ndarray:
        i = np.asarray(i, dtype=np.int64)
        if i.size and (i.min() < 1 or i.max() > self.n):
            raise IndexError("position out of range")
        return get_kernels(backend).wt_access_many(self.kernel_args, i - 1)

    @cached_property
    def kernel_args(self):
        return (
            np.stack([lv.words for lv in self.levels]),
            np.stack([lv.superblocks for lv in self.levels]),
            np.stack([lv.blocks for lv in self.levels]),
            self.node_start,
            self.node_ones,
            self.node_symbols,
            np.array([self.height], dtype=np.int64),
        )

    def space(self) -> dict[str, int]:
        bits = sum(lv.words.nbytes for lv in self.levels)
        counts = sum(lv.superblocks.nbytes + lv.blocks.nbytes for lv in self.levels)
        fixed = self.node_start.nbytes + self.node_ones.nbytes + self.node_symbols.nbytes
        return {"bwt": bits, "counts": counts, "fixed": fixed}

    @property
    def nbytes(self) -> int:
        return sum(self.space().values())

    def __eq__(self, other):
        return (
            isinstance(other, WaveletTree)
            and (self.sigma_eff, self.n) == (other.sigma_eff, other.n)
            and all(a == b for a, b in zip(self.levels, other.levels))
            and np.array_equal(self.node_start, other.node_start)
            and np.array_equal(self.node_ones, other.node_ones)
            and np.array_equal(self.node_symbols, other.node_symbols)
        )


def _node_tables(codes: np.ndarray, sigma_eff: int, height: int):
    width = 1 << height
    hist = np.bincount(codes, minlength=width)
    start = np.zeros((height, width), dtype=np.int64)
    nsym = np.zeros((height, width), dtype=np.int64)
    present = np.zeros(width, dtype=np.int64)
    present[:sigma_eff] = 1
    for k in range(height):
        shift = height - k
        # counts per code prefix of length k
        by_prefix = hist.reshape(-1, 1 << shift).sum(axis=1)
        start[k, : by_prefix.size] = np.cumsum(by_prefix) - by_prefix
        nsym[k, : by_prefix.size] = present.reshape(-1, 1 << shift).sum(axis=1)
    return start, nsym


def build_wt(bwt, alphabet: Alphabet | int) -> WaveletTree:
    sigma_eff = alphabet.sigma_eff if isinstance(alphabet, Alphabet) else int(alphabet)
    x = bwt.unpack() if isinstance(bwt, PackedText) else np.asarray(bwt, dtype=np.uint8).ravel()
    n = x.size
    if n == 0:
        raise ValueError("empty BWT")
    if int(x.max()) >= sigma_eff:
        raise ValueError("character code exceeds the alphabet")
    height = max(1, (sigma_eff - 1).bit_length())
    codes = x.astype(np.int64)
    node_start, node_symbols = _node_tables(codes, sigma_eff, height)
    node_ones = np.zeros_like(node_start)
    levels = []
    for k in range(height):
        # stable order by the k-bit code prefix = node order at level k
        order = np.argsort(codes >> (height - k), kind="stable")
        bits = (codes[order] >> (height - 1 - k)) & 1
        rbv = build_rank(bits)
        levels.append(rbv)
        nodes = np.flatnonzero(node_symbols[k] > 0)
        node_ones[k, nodes] = rbv.rank1_many(node_start[k, nodes], backend="numpy")
    return WaveletTree(tuple(levels), sigma_eff, n, node_start, node_ones, node_symbols)
