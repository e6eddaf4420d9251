"""Bidirectional FM index: one index over T, one over its reverse.

A state holds the range of the current infix P in both indices. Extending
P on one side is a backward step in the index of that side's reading
direction. The other range moves by ``smaller``, the number of
occurrences of xP (or Px) with x < c. That is one ``prefix_occ``
difference on the stepping index.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ._accel import get_kernels
from .alphabet import Alphabet
from .fmindex import DEFAULT_SAMPLE_RATE, FMIndex, SearchRange, encode_pattern, encode_patterns
from .textcore import reverse_text, with_sentinel


class BiSearchRange(NamedTuple):
    a: int
    b: int
    a_rev: int
    b_rev: int

    @property
    def empty(self) -> bool:
        return self.a > self.b

    @property
    def forward(self) -> SearchRange:
        return SearchRange(self.a, self.b)

    @property
    def reverse(self) -> SearchRange:
        return SearchRange(self.a_rev, self.b_rev)


EMPTY_BI = BiSearchRange(1, 0, 1, 0)


def _step(index: FMIndex, a: int, b: int, c: int):
    """Backward step on ``index``; returns (a', b', smaller)."""
    d = index.dictionary
    base = int(index.C[c])
    if c == 0:
        lo_a, lo_b = 0, 0
        eq_a, eq_b = d.occ(c, a - 1), d.occ(c, b)
    else:
        lo_a, lo_b = d.prefix_occ(c - 1, a - 1), d.prefix_occ(c - 1, b)
        eq_a = d.prefix_occ(c, a - 1) - lo_a
        eq_b = d.prefix_occ(c, b) - lo_b
    return base + eq_a + 1, base + eq_b, lo_b - lo_a


class BiFMIndex:
    def __init__(self, fwd: FMIndex, rev: FMIndex):
        if fwd.alphabet != rev.alphabet or fwd.n != rev.n or fwd.dict_kind != rev.dict_kind:
            raise ValueError("component indices disagree in alphabet, length or dictionary kind")
        self.fwd = fwd
        self.rev = rev

    @classmethod
    def build(cls, text, alphabet: Alphabet | None = None, dict_kind: str = "epr",
              sample_rate: int | None = DEFAULT_SAMPLE_RATE) -> "BiFMIndex":
        if alphabet is None:
            alphabet = Alphabet.from_text(text)
        return cls.from_ranks(with_sentinel(alphabet.encode(text)), alphabet, dict_kind, sample_rate)

    @classmethod
    def from_ranks(cls, ranks, alphabet: Alphabet, dict_kind: str = "epr",
                   sample_rate: int | None = DEFAULT_SAMPLE_RATE) -> "BiFMIndex":
        ranks = np.asarray(ranks, dtype=np.uint8)
        fwd = FMIndex.from_ranks(ranks, alphabet, dict_kind, sample_rate)
        # locate runs on the forward index only
        rev = FMIndex.from_ranks(reverse_text(ranks), alphabet, dict_kind, None)
        return cls(fwd, rev)

    @property
    def n(self) -> int:
        return self.fwd.n

    @property
    def alphabet(self) -> Alphabet:
        return self.fwd.alphabet

    @property
    def dict_kind(self) -> str:
        return self.fwd.dict_kind

    def init_range(self) -> BiSearchRange:
        return BiSearchRange(1, self.n, 1, self.n)

    def _check_rank(self, c: int) -> None:
        if not 0 <= c < self.alphabet.sigma_eff:
            raise IndexError(f"character rank {c} out of range")

    def extend_right(self, st: BiSearchRange, c_rank: int) -> BiSearchRange:
        """State of Pc from the state of P."""
        self._check_rank(c_rank)
        if st.empty:
            return EMPTY_BI
        ar, br, smaller = _step(self.rev, st.a_rev, st.b_rev, c_rank)
        if ar > br:
            return EMPTY_BI
        a = st.a + smaller
        return BiSearchRange(a, a + br - ar, ar, br)

    def extend_left(self, st: BiSearchRange, c_rank: int) -> BiSearchRange:
        """State of cP from the state of P."""
        self._check_rank(c_rank)
        if st.empty:
            return EMPTY_BI
        a, b, smaller = _step(self.fwd, st.a, st.b, c_rank)
        if a > b:
            return EMPTY_BI
        ar = st.a_rev + smaller
        return BiSearchRange(a, b, ar, ar + b - a)

    def smaller_explicit(self, st: BiSearchRange, c_rank: int, right: bool = True) -> int:
        """``smaller`` as the sum of per-character range sizes, one Occ pair per x < c."""
        index, a, b = (self.rev, st.a_rev, st.b_rev) if right else (self.fwd, st.a, st.b)
        d = index.dictionary
        return sum(d.occ(x, b) - d.occ(x, a - 1) for x in range(c_rank))

    def smaller(self, st: BiSearchRange, c_rank: int, right: bool = True) -> int:
        index, a, b = (self.rev, st.a_rev, st.b_rev) if right else (self.fwd, st.a, st.b)
        return _step(index, a, b, c_rank)[2]

    @staticmethod
    def bi_count(st: BiSearchRange) -> int:
        return 0 if st.empty else st.b - st.a + 1

    def search(self, pattern, split: int | None = None) -> BiSearchRange:
        """Search ``pattern[split:]`` left to right, then ``pattern[:split]`` right to left.

        The default split is ``len // 2``, so the right half has ceil(m/2) characters.
        """
        p = encode_pattern(self.alphabet, pattern)
        split = len(p) // 2 if split is None else split
        st = self.init_range()
        for c in p[split:]:
            st = self.extend_right(st, int(c))
        for c in p[:split][::-1]:
            st = self.extend_left(st, int(c))
        return st

    def count(self, pattern, split: int | None = None) -> int:
        return self.bi_count(self.search(pattern, split))

    def count_many(self, patterns, splits=None, backend: str | None = None) -> np.ndarray:
        queries, lengths = encode_patterns(self.alphabet, patterns)
        splits = lengths // 2 if splits is None else np.asarray(splits, dtype=np.int64)
        counts, _ = get_kernels(backend).count_bi(
            self.dict_kind, self.fwd.dictionary.kernel_args, self.rev.dictionary.kernel_args,
            self.fwd.C, self.rev.C, self.n, queries, lengths, splits,
        )
        return counts

    def locate(self, st: BiSearchRange, backend: str | None = None) -> np.ndarray:
        return self.fwd.locate(st.forward, backend)

    def space(self) -> dict[str, int]:
        f, r = self.fwd.space(), self.rev.space()
        return {k: f[k] + r[k] for k in f}

    def __eq__(self, other):
        return isinstance(other, BiFMIndex) and self.fwd == other.fwd and self.rev == other.rev
