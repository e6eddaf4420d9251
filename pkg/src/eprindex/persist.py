"""Versioned binary index files.

Layout, all integers little-endian::

    offset  size  field
    0       4     magic b"EPRX"
    4       4     u32 format version
    8       4     u32 endianness tag 0x01020304
    12      1     u8 structure tag (0 EPR-uni, 1 WT-uni, 2 EPR-bi, 3 WT-bi)
    13      8     u64 total file length, checksum included
    21      8     u64 n (BWT length, sentinel included)
    29      1     u8 sentinel flag
    30      2     u16 sigma (symbols without the sentinel)
    32      sigma symbol bytes in rank order
    ...     1     u8 b (bits per packed character)
    ...     4     u32 blob count
    ...           blobs: u64 payload length, then u8 dtype code, u8 ndim,
                  ndim x u64 dims, raw little-endian data
    end-8   8     blake2b-64 digest of every preceding byte

Blobs come in a fixed order per FM index (forward first, then reverse for
bidirectional files): meta int64 [sample rate (0 = none), dictionary
params...], C, the dictionary arrays, then the sample arrays if any.
"""
from __future__ import annotations

import hashlib
import os
import struct

import numpy as np

from .alphabet import Alphabet
from .bifmindex import BiFMIndex
from .bitrank import RankBitVector
from .eprdict import CACHE_LINE, EPRDictionary, LaneMasks, aligned_zeros, block_shape
from .errors import (
    BadMagicError,
    ChecksumError,
    IndexFileError,
    TruncatedIndexError,
    VersionMismatchError,
)
from .fmindex import FMIndex, SampledSA
from .wavelet import WaveletTree

MAGIC = b"EPRX"
VERSION = 1
ENDIAN_TAG = 0x01020304
DIGEST_BYTES = 8

_FIXED = struct.Struct("<4sIIBQQBH")
STRUCTURE_TAGS = {("epr", False): 0, ("wt", False): 1, ("epr", True): 2, ("wt", True): 3}
_TAG_KIND = {v: k for k, v in STRUCTURE_TAGS.items()}

_DTYPES = {1: "<u1", 2: "<u2", 3: "<u8", 4: "<i8", 5: "<i2"}
_DTYPE_CODES = {np.dtype(v): k for k, v in _DTYPES.items()}


def checksum(data: bytes) -> bytes:
    return hashlib.blake2b(data, digest_size=DIGEST_BYTES).digest()


# ---------------------------------------------------------------- encoding

def _blob(arr: np.ndarray) -> bytes:
    arr = np.asarray(arr)
    le = arr.dtype.newbyteorder("<")
    code = _DTYPE_CODES.get(le)
    if code is None:
        raise TypeError(f"unsupported dtype {arr.dtype}")
    body = struct.pack(f"<BB{arr.ndim}Q", code, arr.ndim, *arr.shape)
    body += np.ascontiguousarray(arr, dtype=le).tobytes()
    return struct.pack("<Q", len(body)) + body


def _rank_arrays(rbv: RankBitVector) -> list[np.ndarray]:
    return [rbv.words, rbv.superblocks, rbv.blocks]


def _fm_arrays(index: FMIndex) -> list[np.ndarray]:
    d = index.dictionary
    rate = index.samples.rate if index.samples is not None else 0
    if d.kind == "epr":
        meta = [rate, d.words_per_block, d.blocks_per_superblock]
        arrays = [d.records, d.superblocks]
    else:
        meta = [rate, d.height]
        arrays = [a for lv in d.levels for a in _rank_arrays(lv)]
        arrays += [d.node_start, d.node_ones, d.node_symbols]
    out = [np.array(meta, dtype=np.int64), index.C, *arrays]
    if index.samples is not None:
        out += [*_rank_arrays(index.samples.marked), index.samples.values]
    return out


def _parts(index) -> tuple[int, list[FMIndex]]:
    if isinstance(index, BiFMIndex):
        return STRUCTURE_TAGS[(index.dict_kind, True)], [index.fwd, index.rev]
    if isinstance(index, FMIndex):
        return STRUCTURE_TAGS[(index.dict_kind, False)], [index]
    raise TypeError(f"cannot serialize {type(index).__name__}")


def dumps(index) -> bytes:
    """Serialize an :class:`FMIndex` or :class:`BiFMIndex`."""
    tag, parts = _parts(index)
    alpha = index.alphabet
    blobs = [_blob(a) for p in parts for a in _fm_arrays(p)]
    tail = (alpha.symbols + struct.pack("<BI", alpha.bits_per_char, len(blobs)) + b"".join(blobs))
    total = _FIXED.size + len(tail) + DIGEST_BYTES
    head = _FIXED.pack(MAGIC, VERSION, ENDIAN_TAG, tag, total, index.n,
                       int(alpha.sentinel_included), alpha.sigma)
    data = head + tail
    return data + checksum(data)


def save_index(index, path) -> int:
    """Write ``index`` to ``path`` atomically; returns the byte count."""
    data = dumps(index)
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)
    return len(data)


# ---------------------------------------------------------------- decoding

class _Reader:
    def __init__(self, data: bytes, pos: int, end: int):
        self.buf = memoryview(data)
        self.pos = pos
        self.end = end

    def take(self, size: int) -> memoryview:
        if size < 0 or self.pos + size > self.end:
            raise IndexFileError("field runs past the end of the payload")
        out = self.buf[self.pos:self.pos + size]
        self.pos += size
        return out

    def unpack(self, fmt: str):
        s = struct.Struct(fmt)
        return s.unpack(self.take(s.size))

    def array(self) -> np.ndarray:
        (size,) = self.unpack("<Q")
        sub = _Reader(self.buf.obj, self.pos, self.pos + size)
        self.take(size)
        code, ndim = sub.unpack("<BB")
        if code not in _DTYPES:
            raise IndexFileError(f"unknown dtype code {code}")
        dims = sub.unpack(f"<{ndim}Q")
        dt = np.dtype(_DTYPES[code])
        count = int(np.prod(dims, dtype=np.int64)) if ndim else 1
        raw = sub.take(count * dt.itemsize)
        if sub.pos != sub.end:
            raise IndexFileError("blob length does not match its shape")
        return np.frombuffer(raw, dtype=dt).astype(dt.newbyteorder("="), copy=True).reshape(dims)


def _expect(cond: bool, what: str) -> None:
    if not cond:
        raise IndexFileError(f"inconsistent index file: {what}")


def _read_rank(r: _Reader, n_bits: int) -> RankBitVector:
    words, sb, blk = r.array(), r.array(), r.array()
    nwords = n_bits // 64 + 1
    _expect(words.dtype == np.uint64 and words.shape == (nwords,), "bit vector words")
    _expect(sb.dtype == np.int64 and sb.shape == (-(-nwords // 4) + 1,), "bit vector superblocks")
    _expect(blk.dtype == np.uint16 and blk.shape == (nwords,), "bit vector blocks")
    return RankBitVector(words, n_bits, sb, blk)


def _read_epr(r: _Reader, meta, n: int, alpha: Alphabet) -> EPRDictionary:
    _expect(len(meta) == 3, "EPR parameters")
    wpb, bps = int(meta[1]), int(meta[2])
    sig = alpha.sigma_eff
    shape = block_shape(sig)
    _expect(wpb == shape[0], "words per block")
    records, superblocks = r.array(), r.array()
    masks = LaneMasks.build(alpha.bits_per_char, sig)
    nblocks = n // (wpb * masks.chars_per_word) + 1
    _expect(records.dtype == np.uint64 and records.shape == (nblocks, shape[1]), "records")
    _expect(bps >= 1 and bps & (bps - 1) == 0 and bps * wpb * masks.chars_per_word <= 1 << 16,
            "blocks per superblock")
    _expect(superblocks.dtype == np.int64 and superblocks.shape == (-(-nblocks // bps) + 1, sig - 1),
            "superblocks")
    # the kernels rely on cache-line aligned records
    aligned = aligned_zeros(records.shape, np.uint64, align=CACHE_LINE)
    aligned[...] = records
    return EPRDictionary(n, sig, aligned, superblocks, masks, wpb, bps)


def _read_wt(r: _Reader, meta, n: int, alpha: Alphabet) -> WaveletTree:
    _expect(len(meta) == 2 and int(meta[1]) == alpha.bits_per_char, "wavelet height")
    height = int(meta[1])
    levels = tuple(_read_rank(r, n) for _ in range(height))
    tables = [r.array() for _ in range(3)]
    for t in tables:
        _expect(t.dtype == np.int64 and t.shape == (height, 1 << height), "node tables")
    return WaveletTree(levels, alpha.sigma_eff, n, *tables)


def _read_fm(r: _Reader, kind: str, n: int, alpha: Alphabet) -> FMIndex:
    meta = r.array()
    _expect(meta.dtype == np.int64 and meta.ndim == 1 and meta.size >= 1, "component header")
    C = r.array()
    _expect(C.dtype == np.int64 and C.shape == (alpha.sigma_eff + 1,), "C table")
    d = _read_epr(r, meta, n, alpha) if kind == "epr" else _read_wt(r, meta, n, alpha)
    rate = int(meta[0])
    samples = None
    if rate:
        _expect(rate >= 1, "sampling rate")
        marked = _read_rank(r, n)
        values = r.array()
        _expect(values.dtype == np.int64 and values.ndim == 1, "sample values")
        samples = SampledSA(rate, marked, values)
    return FMIndex(d, C, alpha, samples)


def loads(data: bytes):
    """Decode bytes produced by :func:`dumps`, verifying the framing first."""
    if data[:4] != MAGIC:
        raise BadMagicError("not an index file (bad magic)")
    if len(data) < _FIXED.size:
        raise TruncatedIndexError(f"file holds {len(data)} bytes, shorter than the header")
    _, version, endian, tag, total, n, sflag, sigma = _FIXED.unpack_from(data)
    if version != VERSION:
        raise VersionMismatchError(f"format version {version}, this build reads {VERSION}")
    if endian != ENDIAN_TAG:
        raise IndexFileError(f"unexpected endianness tag {endian:#x}")
    if len(data) < total:
        raise TruncatedIndexError(f"file holds {len(data)} of {total} declared bytes")
    if len(data) > total:
        raise IndexFileError(f"{len(data) - total} unexpected bytes after the declared end")
    body, digest = data[:-DIGEST_BYTES], data[-DIGEST_BYTES:]
    if checksum(body) != digest:
        raise ChecksumError("checksum mismatch; the file is corrupt")
    if tag not in _TAG_KIND:
        raise IndexFileError(f"unknown structure tag {tag}")
    kind, bi = _TAG_KIND[tag]
    r = _Reader(data, _FIXED.size, len(body))
    symbols = bytes(r.take(sigma))
    try:
        alpha = Alphabet(symbols, bool(sflag))
    except ValueError as exc:
        raise IndexFileError(f"bad alphabet descriptor: {exc}") from exc
    _expect(alpha.sentinel_included, "FM indices carry the sentinel")
    b, nblobs = r.unpack("<BI")
    _expect(b == alpha.bits_per_char, "bits per character")
    parts = [_read_fm(r, kind, n, alpha) for _ in range(2 if bi else 1)]
    _expect(r.pos == r.end, "trailing bytes before the checksum")
    index = BiFMIndex(*parts) if bi else parts[0]
    _expect(nblobs == sum(len(_fm_arrays(p)) for p in parts), "blob count")
    return index


def load_index(path):
    with open(path, "rb") as fh:
        return loads(fh.read())


def describe(data: bytes) -> dict:
    """Header fields of a serialized index, without decoding the payload."""
    _, version, _, tag, total, n, sflag, sigma = _FIXED.unpack_from(data)
    return {"version": version, "structure": _TAG_KIND.get(tag), "total": total, "n": n,
            "sentinel": bool(sflag), "sigma": sigma}


__all__ = ["MAGIC", "VERSION", "dumps", "loads", "save_index", "load_index", "describe",
           "checksum", "STRUCTURE_TAGS"]
