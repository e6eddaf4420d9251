"""Unidirectional FM index over an EPR dictionary or a wavelet tree."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from ._accel import get_kernels
from .alphabet import SENTINEL, Alphabet
from .bitrank import RankBitVector, build_rank
from .eprdict import build_epr
from .errors import SentinelError
from .textcore import build_suffix_array, bwt_ranks, with_sentinel
from .wavelet import build_wt

DEFAULT_SAMPLE_RATE = 10
DICT_KINDS = ("epr", "wt")


class SearchRange(NamedTuple):
    """1-based inclusive interval of sorted suffixes; empty iff a > b."""

    a: int
    b: int

    @property
    def empty(self) -> bool:
        return self.a > self.b

    def __len__(self):
        return max(0, self.b - self.a + 1)


EMPTY_RANGE = SearchRange(1, 0)


@dataclass(frozen=True, eq=False)
class SampledSA:
    """Suffix-array values kept for every text position p with p % rate == 1.

    ``marked`` flags the sampled suffix-array rows; ``values`` lists their
    text positions in row order, so the sample of row i sits at
    ``values[marked.rank1(i - 1)]``.
    """

    rate: int
    marked: RankBitVector
    values: np.ndarray

    @classmethod
    def build(cls, sa: np.ndarray, rate: int) -> "SampledSA":
        if rate < 1:
            raise ValueError("sampling rate must be >= 1")
        sa = np.asarray(sa, dtype=np.int64)
        keep = (sa - 1) % rate == 0
        return cls(rate, build_rank(keep), sa[keep].astype(np.int64))

    @property
    def nbytes(self) -> int:
        return self.marked.nbytes + self.values.nbytes

    def __eq__(self, other):
        return (
            isinstance(other, SampledSA)
            and self.rate == other.rate
            and self.marked == other.marked
            and np.array_equal(self.values, other.values)
        )


def make_dictionary(kind: str, bwt, alphabet: Alphabet):
    if kind == "epr":
        return build_epr(bwt, alphabet)
    if kind == "wt":
        return build_wt(bwt, alphabet)
    raise ValueError(f"unknown dictionary kind {kind!r}; expected one of {DICT_KINDS}")


def encode_pattern(alphabet: Alphabet, pattern) -> np.ndarray:
    if isinstance(pattern, np.ndarray):
        p = pattern.astype(np.int64)
        if p.size and (p.min() < alphabet.offset or p.max() >= alphabet.sigma_eff):
            raise SentinelError("pattern ranks must exclude the sentinel and fit the alphabet")
        return p
    if alphabet.sentinel_included:
        raw = pattern.encode("latin-1") if isinstance(pattern, str) else bytes(pattern)
        if SENTINEL.encode() in raw:
            raise SentinelError("patterns may not contain the sentinel")
    return alphabet.encode(pattern).astype(np.int64)


def encode_patterns(alphabet: Alphabet, patterns) -> tuple[np.ndarray, np.ndarray]:
    """(queries, lengths) for a pattern list or a 2-D array of rank rows."""
    if isinstance(patterns, np.ndarray) and patterns.ndim == 2:
        q = encode_pattern(alphabet, patterns)
        return np.ascontiguousarray(q, dtype=np.uint8), np.full(q.shape[0], q.shape[1], dtype=np.int64)
    return pad_patterns([encode_pattern(alphabet, p) for p in patterns])


def pad_patterns(encoded: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    lengths = np.array([len(p) for p in encoded], dtype=np.int64)
    out = np.zeros((len(encoded), int(lengths.max(initial=0))), dtype=np.uint8)
    for j, p in enumerate(encoded):
        out[j, : len(p)] = p
    return out, lengths


class FMIndex:
    """C table, rank dictionary and sampled suffix array for one text."""

    def __init__(self, dictionary, C: np.ndarray, alphabet: Alphabet, samples: SampledSA | None):
        self.dictionary = dictionary
        self.C = np.asarray(C, dtype=np.int64)
        self.alphabet = alphabet
        self.samples = samples

    @classmethod
    def build(cls, text, alphabet: Alphabet | None = None, dict_kind: str = "epr",
              sample_rate: int | None = DEFAULT_SAMPLE_RATE) -> "FMIndex":
        """Index a sentinel-free text (str/bytes); the sentinel is appended here."""
        if alphabet is None:
            alphabet = Alphabet.from_text(text)
        return cls.from_ranks(with_sentinel(alphabet.encode(text)), alphabet, dict_kind, sample_rate)

    @classmethod
    def from_ranks(cls, ranks, alphabet: Alphabet, dict_kind: str = "epr",
                   sample_rate: int | None = DEFAULT_SAMPLE_RATE) -> "FMIndex":
        """Index a rank array that already ends with the sentinel rank 0."""
        if not alphabet.sentinel_included:
            raise SentinelError("FM indices need an alphabet with the sentinel")
        ranks = np.asarray(ranks, dtype=np.uint8)
        sa = build_suffix_array(ranks)
        dictionary = make_dictionary(dict_kind, bwt_ranks(ranks, sa), alphabet)
        n = dictionary.n
        sig = alphabet.sigma_eff
        # C[c] = prefix_occ(c - 1, n); C[sigma_eff] = n closes the table
        C = np.zeros(sig + 1, dtype=np.int64)
        C[1:] = dictionary.prefix_occ_many(np.arange(sig), np.full(sig, n), backend="numpy")
        samples = SampledSA.build(sa, sample_rate) if sample_rate else None
        return cls(dictionary, C, alphabet, samples)

    @property
    def n(self) -> int:
        return self.dictionary.n

    @property
    def dict_kind(self) -> str:
        return self.dictionary.kind

    def full_range(self) -> SearchRange:
        return SearchRange(1, self.n)

    def backward_extend(self, rng: SearchRange, c_rank: int) -> SearchRange:
        """Range of cP from the range of P."""
        if not 0 <= c_rank < self.alphabet.sigma_eff:
            raise IndexError(f"character rank {c_rank} out of range")
        if rng.a > rng.b:
            return EMPTY_RANGE
        d = self.dictionary
        base = int(self.C[c_rank])
        new = SearchRange(base + d.occ(c_rank, rng.a - 1) + 1, base + d.occ(c_rank, rng.b))
        return new if new.a <= new.b else EMPTY_RANGE

    def search(self, pattern) -> SearchRange:
        rng = self.full_range()
        for c in encode_pattern(self.alphabet, pattern)[::-1]:
            rng = self.backward_extend(rng, int(c))
            if rng.empty:
                break
        return rng

    def count(self, pattern) -> int:
        return len(self.search(pattern))

    def count_many(self, patterns, backend: str | None = None) -> np.ndarray:
        """Counts for a list of patterns or a 2-D array of equal-length rank rows."""
        queries, lengths = encode_patterns(self.alphabet, patterns)
        counts, _ = get_kernels(backend).count_uni(
            self.dictionary.kind, self.dictionary.kernel_args, self.C, self.n, queries, lengths
        )
        return counts

    def search_many(self, patterns, backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Ranges (a, b) of all patterns, one vectorised backward step at a time."""
        queries, lengths = encode_patterns(self.alphabet, patterns)
        d = self.dictionary
        a = np.ones(lengths.size, dtype=np.int64)
        b = np.full(lengths.size, self.n, dtype=np.int64)
        for s in range(int(lengths.max(initial=0))):
            rows = np.flatnonzero(lengths > s)
            c = queries[rows, lengths[rows] - 1 - s].astype(np.int64)
            # an empty range stays empty: occ(c, a - 1) >= occ(c, b) when a > b
            ea = d.occ_many(c, a[rows] - 1, backend)
            eb = d.occ_many(c, b[rows], backend)
            a[rows] = self.C[c] + ea + 1
            b[rows] = self.C[c] + eb
        return a, np.maximum(b, a - 1)

    def locate_many(self, patterns, backend: str | None = None) -> list[np.ndarray]:
        """Sorted positions per pattern, all rows resolved in one LF walk."""
        a, b = self.search_many(patterns, backend)
        sizes = b - a + 1
        rows = np.repeat(a - np.cumsum(sizes) + sizes, sizes) + np.arange(sizes.sum())
        pos = self._locate_rows(rows, backend)
        return [np.sort(p) for p in np.split(pos, np.cumsum(sizes)[:-1])]

    def lf(self, i: int) -> int:
        """Row of the rotation that precedes row ``i`` in text order."""
        c = self.dictionary.access(i)
        return int(self.C[c]) + self.dictionary.occ(c, i)

    def lf_many(self, rows, backend: str | None = None) -> np.ndarray:
        d = self.dictionary
        rows = np.asarray(rows, dtype=np.int64)
        c = d.access_many(rows, backend)
        return self.C[c] + d.occ_many(c, rows, backend)

    def locate(self, rng: SearchRange, backend: str | None = None) -> np.ndarray:
        """Sorted 1-based text positions of the rows in ``rng``."""
        if rng.a > rng.b:
            return self._locate_rows(np.zeros(0, dtype=np.int64), backend)
        return np.sort(self._locate_rows(np.arange(rng.a, rng.b + 1, dtype=np.int64), backend))

    def _locate_rows(self, rows, backend=None) -> np.ndarray:
        """Text positions of suffix-array ``rows``: walk LF until a sampled row."""
        if self.samples is None:
            raise ValueError("index was built without suffix-array samples")
        s = self.samples
        kern = get_kernels(backend)
        marked = s.marked.kernel_args()
        rows = np.array(rows, dtype=np.int64)
        out = np.empty(rows.size, dtype=np.int64)
        todo = np.arange(rows.size)
        for steps in range(s.rate):
            if todo.size == 0:
                break
            r = rows[todo] - 1
            hit = ((s.marked.words[r >> 6] >> (r & 63).astype(np.uint64)) & np.uint64(1)).astype(bool)
            done = todo[hit]
            out[done] = s.values[kern.rank1_many(*marked, r[hit])] + steps
            todo = todo[~hit]
            if todo.size:
                rows[todo] = self.lf_many(rows[todo], backend)
        if todo.size:
            raise AssertionError("suffix-array samples are inconsistent with the BWT")
        return out

    def locate_pattern(self, pattern, backend: str | None = None) -> np.ndarray:
        return self.locate(self.search(pattern), backend)

    def inverse_bwt(self) -> np.ndarray:
        """Recover the sentinel-terminated rank text by walking LF from row 1."""
        n = self.n
        out = np.zeros(n, dtype=np.uint8)
        row = 1
        for k in range(n - 2, -1, -1):
            c = self.dictionary.access(row)
            out[k] = c
            row = int(self.C[c]) + self.dictionary.occ(c, row)
        return out

    def space(self) -> dict[str, int]:
        sp = dict(self.dictionary.space())
        sp["fixed"] += self.C.nbytes
        return sp

    def __eq__(self, other):
        return (
            isinstance(other, FMIndex)
            and self.alphabet == other.alphabet
            and self.dictionary == other.dictionary
            and np.array_equal(self.C, other.C)
            and self.samples == other.samples
        )
