"""FM indices over an enhanced prefix-sum rank (EPR) dictionary.

The EPR dictionary answers ``prefix_occ(c, i)`` in constant time straight
from the packed BWT; a levelwise wavelet tree is included as the
O(log sigma) baseline. Both back unidirectional and bidirectional FM
indices with count and locate.
"""
from ._accel import DEFAULT_BACKEND, available_backends, get_kernels
from .alphabet import SENTINEL, Alphabet
from .bifmindex import BiFMIndex, BiSearchRange
from .bitrank import RankBitVector, build_rank
from .eprdict import EPRDictionary, LaneMasks, build_epr, in_block_prefix_rank
from .errors import (
    BadMagicError,
    ChecksumError,
    EprIndexError,
    IndexFileError,
    SentinelError,
    TruncatedIndexError,
    UnknownSymbolError,
    VersionMismatchError,
)
from .fmindex import FMIndex, SampledSA, SearchRange
from .persist import load_index, save_index
from .textcore import PackedText, build_suffix_array, bwt_ranks, pack
from .wavelet import WaveletTree, build_wt

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BACKEND", "available_backends", "get_kernels",
    "SENTINEL", "Alphabet",
    "BiFMIndex", "BiSearchRange",
    "RankBitVector", "build_rank",
    "EPRDictionary", "LaneMasks", "build_epr", "in_block_prefix_rank",
    "BadMagicError", "ChecksumError", "EprIndexError", "IndexFileError", "SentinelError",
    "TruncatedIndexError", "UnknownSymbolError", "VersionMismatchError",
    "FMIndex", "SampledSA", "SearchRange",
    "load_index", "save_index",
    "PackedText", "build_suffix_array", "bwt_ranks", "pack",
    "WaveletTree", "build_wt",
]
