"""Pure-numpy kernels, vectorised across queries.

Same entry points and tuple layouts as ``_kernels_numba``; every function
accepts arrays of characters and positions instead of scalars.
"""
import numpy as np

_ONE = np.uint64(1)

if hasattr(np, "bitwise_count"):
    def popcount(x):
        return np.bitwise_count(x).astype(np.int64)
else:  # numpy < 2.0
    def popcount(x):
        x = np.asarray(x, dtype=np.uint64)
        x = x - ((x >> _ONE) & np.uint64(0x5555555555555555))
        x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
        x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
        return ((x * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def _rank1(words, sb, blk, i):
    p = i >> 6
    low = (_ONE << (i & 63).astype(np.uint64)) - _ONE
    return sb[p >> 2] + blk[p].astype(np.int64) + popcount(words[p] & low)


def rank1_many(words, sb, blk, i):
    return _rank1(words, sb, blk, np.asarray(i, dtype=np.int64))


# ---------------------------------------------------------------- EPR

def _epr_prefix_occ(d, c, i):
    rec, rec16, sb, rb, pmask, consts, params = d
    cpw, sb_shift, sigma_eff, wpb, cpb, _, h = (int(v) for v in params[:7])
    me, bm, bsh = consts[:3]
    q, t = np.divmod(i, cpb)
    w, tt = np.divmod(t, cpw)
    top = c >= sigma_eff - 1
    cc = np.where(top, 0, c)
    rbc = rb[cc]
    val = sb[q >> sb_shift, cc] + rec16[q, 4 * wpb + cc].astype(np.int64)
    lo_j, hi_j = np.minimum(w, h), np.maximum(w, h)
    sign = np.where(w >= h, 1, -1)
    for j in range(wpb):
        x = rec[q, j]
        odd = (rbc - (x & me)) & bm
        even = (rbc - ((x >> bsh) & me)) & bm
        merged = even | (odd << _ONE)
        val += np.where((j >= lo_j) & (j < hi_j), sign * popcount(merged & pmask[cpw]), 0)
        val += np.where(j == w, popcount(merged & pmask[np.where(j == w, tt, 0)]), 0)
    return np.where(top, i, val)


def epr_pair(d, c, i):
    c = np.asarray(c, dtype=np.int64)
    i = np.asarray(i, dtype=np.int64)
    hi = _epr_prefix_occ(d, c, i)
    lo = np.where(c > 0, _epr_prefix_occ(d, np.maximum(c - 1, 0), i), 0)
    return lo, hi - lo


def epr_access_many(d, i):
    rec, params, b = d[0], d[6], d[5][2]
    cpw, cpb = int(params[0]), int(params[4])
    i = np.asarray(i, dtype=np.int64)
    q, t = np.divmod(i, cpb)
    w, slot = np.divmod(t, cpw)
    shift = slot.astype(np.uint64) * b
    return ((rec[q, w] >> shift) & ((_ONE << b) - _ONE)).astype(np.int64)


# ---------------------------------------------------------------- wavelet tree

def _level_rank(lw, lsb, lblk, k, x):
    p = x >> 6
    low = (_ONE << (x & 63).astype(np.uint64)) - _ONE
    return lsb[k, p >> 2] + lblk[k, p].astype(np.int64) + popcount(lw[k, p] & low)


def wt_pair(d, c, i):
    lw, lsb, lblk, nstart, nones, nsym, params = d
    levels = int(params[0])
    c = np.asarray(c, dtype=np.int64)
    pos = np.array(i, dtype=np.int64, copy=True)
    lt = np.zeros_like(pos)
    p = np.zeros_like(pos)
    running = np.ones(pos.size, dtype=bool)
    for k in range(levels):
        # a leaf reached at level k stays finished at deeper levels
        running &= nsym[k, p] > 1
        live = np.flatnonzero(running)
        if live.size == 0:
            break
        pl, xl = p[live], pos[live]
        ones = _level_rank(lw, lsb, lblk, k, nstart[k, pl] + xl) - nones[k, pl]
        right = ((c[live] >> (levels - 1 - k)) & 1).astype(bool)
        lt[live] += np.where(right, xl - ones, 0)
        pos[live] = np.where(right, ones, xl - ones)
        p[live] = 2 * pl + right
    return lt, pos


def wt_access_many(d, i):
    lw, lsb, lblk, nstart, nones, nsym, params = d
    levels = int(params[0])
    pos = np.array(i, dtype=np.int64, copy=True)
    p = np.zeros_like(pos)
    depth = np.full(pos.size, levels, dtype=np.int64)
    for k in range(levels):
        stop = (nsym[k, p] <= 1) & (depth == levels)
        depth[stop] = k
        live = np.flatnonzero(depth == levels)
        if live.size == 0:
            break
        pl = p[live]
        x = nstart[k, pl] + pos[live]
        ones = _level_rank(lw, lsb, lblk, k, x) - nones[k, pl]
        bit = ((lw[k, x >> 6] >> (x & 63).astype(np.uint64)) & _ONE).astype(bool)
        pos[live] = np.where(bit, ones, pos[live] - ones)
        p[live] = 2 * pl + bit
    return p << (levels - depth)


# ---------------------------------------------------------------- batched search

_PAIRS = {"epr": epr_pair, "wt": wt_pair}


def pair_many(kind, d, c, i):
    return _PAIRS[kind](d, c, i)


def _backward_steps(pair, d, C, queries, cols, a, b, rows):
    """One backward step for ``rows``; returns the rows still non-empty."""
    c = queries[rows, cols].astype(np.int64)
    _, ea = pair(d, c, a[rows] - 1)
    _, eb = pair(d, c, b[rows])
    a[rows] = C[c] + ea + 1
    b[rows] = C[c] + eb
    return rows[a[rows] <= b[rows]]


def count_uni(kind, d, C, n, queries, lengths):
    pair = _PAIRS[kind]
    q = queries.shape[0]
    lengths = np.asarray(lengths, dtype=np.int64)
    a = np.ones(q, dtype=np.int64)
    b = np.full(q, n, dtype=np.int64)
    alive = np.ones(q, dtype=bool)
    steps = 0
    for s in range(int(lengths.max(initial=0))):
        rows = np.flatnonzero(alive & (lengths > s))
        if rows.size == 0:
            break
        steps += rows.size
        keep = _backward_steps(pair, d, C, queries, lengths[rows] - 1 - s, a, b, rows)
        alive[rows] = False
        alive[keep] = True
    return np.where(alive, b - a + 1, 0), steps


def count_bi(kind, dF, dR, CF, CR, n, queries, lengths, splits):
    pair = _PAIRS[kind]
    q = queries.shape[0]
    lengths = np.asarray(lengths, dtype=np.int64)
    splits = np.asarray(splits, dtype=np.int64)
    a = np.ones(q, dtype=np.int64)
    b = np.full(q, n, dtype=np.int64)
    ar = a.copy()
    br = b.copy()
    alive = np.ones(q, dtype=bool)
    steps = 0
    for s in range(int((lengths - splits).max(initial=0))):
        rows = np.flatnonzero(alive & (splits + s < lengths))
        if rows.size == 0:
            break
        steps += rows.size
        c = queries[rows, splits[rows] + s].astype(np.int64)
        la, ea = pair(dR, c, ar[rows] - 1)
        lb, eb = pair(dR, c, br[rows])
        ar2 = CR[c] + ea + 1
        br2 = CR[c] + eb
        ok = ar2 <= br2
        alive[rows[~ok]] = False
        rows, la, lb, ar2, br2 = rows[ok], la[ok], lb[ok], ar2[ok], br2[ok]
        a[rows] += lb - la
        b[rows] = a[rows] + br2 - ar2
        ar[rows] = ar2
        br[rows] = br2
    for s in range(int(splits.max(initial=0))):
        rows = np.flatnonzero(alive & (splits - 1 - s >= 0))
        if rows.size == 0:
            break
        steps += rows.size
        c = queries[rows, splits[rows] - 1 - s].astype(np.int64)
        la, ea = pair(dF, c, a[rows] - 1)
        lb, eb = pair(dF, c, b[rows])
        a2 = CF[c] + ea + 1
        b2 = CF[c] + eb
        ok = a2 <= b2
        alive[rows[~ok]] = False
        rows, la, lb, a2, b2 = rows[ok], la[ok], lb[ok], a2[ok], b2[ok]
        ar[rows] += lb - la
        br[rows] = ar[rows] + b2 - a2
        a[rows] = a2
        b[rows] = b2
    return np.where(alive, b - a + 1, 0), steps
