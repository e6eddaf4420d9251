"""numba kernels for rank queries and batched search.

Dictionary payloads travel as plain tuples of arrays so that one compiled
search loop serves both dictionary kinds; see ``EPRDictionary.kernel_args``
and ``WaveletTree.kernel_args`` for the tuple layouts.
"""
import numpy as np
from llvmlite import ir
from numba import njit, types
from numba.extending import intrinsic

_ONE = np.uint64(1)
_ZERO = np.uint64(0)
_U = np.uint64


def _i64(x):
    return np.ascontiguousarray(x, dtype=np.int64)


@intrinsic
def popcount(typingctx, x):
    sig = types.uint64(types.uint64)

    def codegen(context, builder, signature, args):
        fn = builder.module.declare_intrinsic("llvm.ctpop", [ir.IntType(64)])
        return builder.call(fn, args)

    return sig, codegen


# ---------------------------------------------------------------- bit vectors

@njit(inline="always")
def _rank1(words, sb, blk, i):
    p = i >> 6
    low = (_ONE << np.uint64(i & 63)) - _ONE
    return sb[p >> 2] + np.int64(blk[p]) + np.int64(popcount(words[p] & low))


@njit(inline="always")
def _rank1_level(lw, lsb, lblk, k, i):
    p = i >> 6
    low = (_ONE << np.uint64(i & 63)) - _ONE
    return lsb[k, p >> 2] + np.int64(lblk[k, p]) + np.int64(popcount(lw[k, p] & low))


@njit(_nrt=False, cache=True)
def _rank1_into(words, sb, blk, i, out):
    for j in range(i.size):
        out[j] = _rank1(words, sb, blk, i[j])


def rank1_many(words, sb, blk, i):
    i = _i64(i)
    out = np.empty(i.size, dtype=np.int64)
    _rank1_into(words, sb, blk, i, out)
    return out


# ---------------------------------------------------------------- EPR

@njit(inline="always")
def _inblock(w, rbc, me, bm, bsh, pm):
    odd = (rbc - (w & me)) & bm
    even = (rbc - ((w >> bsh) & me)) & bm
    return np.int64(popcount((even | (odd << _ONE)) & pm))


@njit(inline="always")
def _epr_raw(d, ch, cl, i):
    """Prefix counts for columns ch and cl at i, plus the word holding i.

    Returns (hi, lo, g, slot, x, rh, rl): g is the global word index, slot
    the offset of i inside it and x the word itself.
    """
    rec, rec16, sb, rb, pmask, consts, params = d
    cpw = _U(params[0])
    # block and global word index straight from i by reciprocal
    # multiplication, so neither waits on the other
    iu = _U(i)
    q = (iu * consts[3]) >> consts[4]
    g = (iu * consts[5]) >> consts[6]
    w = g - q * _U(params[3])
    slot = iu - g * cpw
    rh = rb[ch]
    rl = rb[cl]
    me = consts[0]
    bm = consts[1]
    bsh = consts[2]
    # words between the anchor word and w, added or subtracted; the trip
    # count is fixed per dictionary and extra words are masked out.
    # anchor + scan <= record words, so reads stay in the record
    h = _U(params[6])
    j = min(w, h)
    end = max(w, h)
    full = pmask[cpw]
    hi = np.int64(0)
    lo = np.int64(0)
    for _ in range(params[7]):
        m = full if j < end else _ZERO
        x = rec[q, j]
        hi += _inblock(x, rh, me, bm, bsh, m)
        lo += _inblock(x, rl, me, bm, bsh, m)
        j += _ONE
    neg = -np.int64(w < h)
    hi = (hi ^ neg) - neg
    lo = (lo ^ neg) - neg
    x = rec[q, w]
    part = pmask[slot]
    hi += _inblock(x, rh, me, bm, bsh, part)
    lo += _inblock(x, rl, me, bm, bsh, part)
    s = q >> _U(params[1])
    base = _U(4 * params[3])
    hi += sb[s, ch] + np.int64(rec16[q, base + ch])
    lo += sb[s, cl] + np.int64(rec16[q, base + cl])
    return hi, lo, g, slot, x, rh, rl


@njit(inline="always")
def epr_pair(d, c, i):
    """(#chars < c, #chars == c) among the first i BWT characters.

    Both prefix counts come from one pass over the block: columns c and
    c - 1 are clamped into the stored range and the edge cases patched
    afterwards (the largest character has no column, c = 0 has no
    predecessor). Indices are unsigned so no wraparound code is emitted.
    """
    top = d[6][2] - 1
    hi, lo, _, _, _, _, _ = _epr_raw(d, _U(min(c, top - 1)), _U(max(c - 1, 0)), i)
    if c == top:
        hi = i
    if c == 0:
        lo = 0
    return lo, hi - lo


@njit(inline="always")
def epr_pair2(d, c, i1, i2):
    """``epr_pair`` at i1 <= i2.

    When both positions fall in one BWT word, the counts at i1 are those at
    i2 minus the characters in between, taken from the word already loaded.
    """
    pmask = d[4]
    consts = d[5]
    top = d[6][2] - 1
    ch = _U(min(c, top - 1))
    cl = _U(max(c - 1, 0))
    hi2, lo2, g2, slot2, x, rh, rl = _epr_raw(d, ch, cl, i2)
    iu = _U(i1)
    g1 = (iu * consts[5]) >> consts[6]
    if g1 == g2:
        m = pmask[slot2] & ~pmask[iu - g1 * _U(d[6][0])]
        hi1 = hi2 - _inblock(x, rh, consts[0], consts[1], consts[2], m)
        lo1 = lo2 - _inblock(x, rl, consts[0], consts[1], consts[2], m)
    else:
        hi1, lo1, _, _, _, _, _ = _epr_raw(d, ch, cl, i1)
    if c == top:
        hi1 = i1
        hi2 = i2
    if c == 0:
        lo1 = 0
        lo2 = 0
    return lo1, hi1 - lo1, lo2, hi2 - lo2


@njit(_nrt=False, cache=True)
def _epr_access_into(d, i, out):
    rec, rec16, sb, rb, pmask, consts, params = d
    cpw = params[0]
    b = consts[2]
    mask = (_ONE << b) - _ONE
    for j in range(i.size):
        q = np.int64((np.uint64(i[j]) * consts[3]) >> consts[4])
        t = i[j] - q * params[4]
        w = t // cpw
        slot = np.uint64(t - w * cpw)
        out[j] = np.int64((rec[q, w] >> (slot * b)) & mask)


def epr_access_many(d, i):
    i = _i64(i)
    out = np.empty(i.size, dtype=np.int64)
    _epr_access_into(d, i, out)
    return out


# ---------------------------------------------------------------- wavelet tree

@njit(inline="always")
def _rank1_level_u(lw, lsb, lblk, k, i):
    p = i >> _U(6)
    low = (_ONE << (i & _U(63))) - _ONE
    return _U(lsb[k, p >> _U(2)]) + _U(lblk[k, p]) + popcount(lw[k, p] & low)


@njit(inline="always")
def wt_pair(d, c, i):
    # unsigned arithmetic throughout, as in epr_pair
    lw, lsb, lblk, nstart, nones, nsym, params = d
    levels = params[0]
    lt = _ZERO
    pos = _U(i)
    p = _ZERO
    cu = _U(c)
    for k in range(levels):
        if nsym[k, p] <= 1:
            break
        ones = _rank1_level_u(lw, lsb, lblk, k, _U(nstart[k, p]) + pos) - _U(nones[k, p])
        if (cu >> _U(levels - 1 - k)) & _ONE:
            lt += pos - ones
            pos = ones
            p = _U(2) * p + _ONE
        else:
            pos -= ones
            p = _U(2) * p
    return np.int64(lt), np.int64(pos)


@njit(inline="always")
def wt_pair2(d, c, i1, i2):
    """``wt_pair`` at i1 <= i2, walking both positions down together.

    At each level, when both bit positions share a word, the smaller rank
    is the larger one minus a popcount over the word already loaded.
    """
    lw, lsb, lblk, nstart, nones, nsym, params = d
    levels = params[0]
    lt1 = _ZERO
    lt2 = _ZERO
    pos1 = _U(i1)
    pos2 = _U(i2)
    p = _ZERO
    cu = _U(c)
    for k in range(levels):
        if nsym[k, p] <= 1:
            break
        base = _U(nstart[k, p])
        off = _U(nones[k, p])
        x1 = base + pos1
        x2 = base + pos2
        r2 = _rank1_level_u(lw, lsb, lblk, k, x2)
        if (x1 >> _U(6)) == (x2 >> _U(6)):
            span = ((_ONE << (x2 & _U(63))) - _ONE) & ~((_ONE << (x1 & _U(63))) - _ONE)
            r1 = r2 - popcount(lw[k, x2 >> _U(6)] & span)
        else:
            r1 = _rank1_level_u(lw, lsb, lblk, k, x1)
        ones1 = r1 - off
        ones2 = r2 - off
        if (cu >> _U(levels - 1 - k)) & _ONE:
            lt1 += pos1 - ones1
            lt2 += pos2 - ones2
            pos1 = ones1
            pos2 = ones2
            p = _U(2) * p + _ONE
        else:
            pos1 -= ones1
            pos2 -= ones2
            p = _U(2) * p
    return np.int64(lt1), np.int64(pos1), np.int64(lt2), np.int64(pos2)


@njit(_nrt=False, cache=True)
def _wt_access_into(d, i, out):
    lw, lsb, lblk, nstart, nones, nsym, params = d
    levels = params[0]
    for j in range(i.size):
        pos = i[j]
        p = 0
        code = -1
        for k in range(levels):
            if nsym[k, p] <= 1:
                code = p << (levels - k)
                break
            x = nstart[k, p] + pos
            ones = _rank1_level(lw, lsb, lblk, k, x) - nones[k, p]
            if (lw[k, x >> 6] >> np.uint64(x & 63)) & _ONE:
                pos = ones
                p = 2 * p + 1
            else:
                pos -= ones
                p = 2 * p
        out[j] = p if code < 0 else code


def wt_access_many(d, i):
    i = _i64(i)
    out = np.empty(i.size, dtype=np.int64)
    _wt_access_into(d, i, out)
    return out


# ---------------------------------------------------------------- batched search
# One kernel set per dictionary kind: passing ``pair`` as a first-class
# function argument defeats inlining. The loops are compiled without the
# reference-counting runtime (outputs are preallocated by the wrappers);
# with it, every inlined array access pays incref/decref calls.

_FAST = dict(_nrt=False)


def _make_search_kernels(pair, pair2):
    @njit(**_FAST)
    def pair_into(d, c, i, lt, eq):
        for j in range(i.size):
            x, y = pair(d, c[j], i[j])
            lt[j] = x
            eq[j] = y

    @njit(**_FAST)
    def count_uni(d, C, n, queries, lengths, out):
        steps = 0
        for j in range(queries.shape[0]):
            a = 1
            b = n
            for s in range(lengths[j] - 1, -1, -1):
                c = np.int64(queries[j, s])
                _, ea, _, eb = pair2(d, c, a - 1, b)
                a = C[c] + ea + 1
                b = C[c] + eb
                steps += 1
                if a > b:
                    break
            out[j] = b - a + 1 if a <= b else 0
        return steps

    @njit(**_FAST)
    def count_bi(dF, dR, CF, CR, n, queries, lengths, splits, out):
        steps = 0
        for j in range(queries.shape[0]):
            a = 1
            b = n
            ar = 1
            br = n
            empty = False
            for s in range(splits[j], lengths[j]):
                c = np.int64(queries[j, s])
                la, ea, lb, eb = pair2(dR, c, ar - 1, br)
                ar2 = CR[c] + ea + 1
                br2 = CR[c] + eb
                steps += 1
                if ar2 > br2:
                    empty = True
                    break
                a = a + lb - la
                b = a + br2 - ar2
                ar = ar2
                br = br2
            if not empty:
                for s in range(splits[j] - 1, -1, -1):
                    c = np.int64(queries[j, s])
                    la, ea, lb, eb = pair2(dF, c, a - 1, b)
                    a2 = CF[c] + ea + 1
                    b2 = CF[c] + eb
                    steps += 1
                    if a2 > b2:
                        empty = True
                        break
                    ar = ar + lb - la
                    br = ar + b2 - a2
                    a = a2
                    b = b2
            out[j] = 0 if empty else b - a + 1
        return steps

    return pair_into, count_uni, count_bi


_KERNELS = {
    "epr": _make_search_kernels(epr_pair, epr_pair2),
    "wt": _make_search_kernels(wt_pair, wt_pair2),
}


def pair_many(kind, d, c, i):
    c, i = _i64(c), _i64(i)
    lt = np.empty(i.size, dtype=np.int64)
    eq = np.empty(i.size, dtype=np.int64)
    _KERNELS[kind][0](d, c, i, lt, eq)
    return lt, eq


def count_uni(kind, d, C, n, queries, lengths):
    out = np.empty(queries.shape[0], dtype=np.int64)
    steps = _KERNELS[kind][1](d, C, n, np.ascontiguousarray(queries), _i64(lengths), out)
    return out, steps


def count_bi(kind, dF, dR, CF, CR, n, queries, lengths, splits):
    out = np.empty(queries.shape[0], dtype=np.int64)
    steps = _KERNELS[kind][2](dF, dR, CF, CR, n, np.ascontiguousarray(queries),
                              _i64(lengths), _i64(splits), out)
    return out, steps
