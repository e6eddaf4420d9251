"""Naive reference implementations used as test oracles."""
import numpy as np


def naive_sa(ranks):
    """1-based suffix array by sorting suffix tuples."""
    x = [int(v) for v in ranks]
    return np.array(sorted(range(1, len(x) + 1), key=lambda i: x[i - 1:]), dtype=np.int64)


def naive_bwt(ranks):
    x = np.asarray(ranks)
    return np.array([x[i - 2] for i in naive_sa(ranks)], dtype=np.uint8)


def prefix_occ_table(bwt, sigma_eff):
    """table[c, i] = #chars <= c among the first i."""
    bwt = np.asarray(bwt, dtype=np.int64)
    le = bwt[None, :] <= np.arange(sigma_eff)[:, None]
    return np.concatenate((np.zeros((sigma_eff, 1), dtype=np.int64), np.cumsum(le, axis=1)), axis=1)


def occ_table(bwt, sigma_eff):
    bwt = np.asarray(bwt, dtype=np.int64)
    eq = bwt[None, :] == np.arange(sigma_eff)[:, None]
    return np.concatenate((np.zeros((sigma_eff, 1), dtype=np.int64), np.cumsum(eq, axis=1)), axis=1)


def find_all(text, pattern):
    """Sorted 1-based start positions of (possibly overlapping) occurrences."""
    if len(pattern) == 0:
        return list(range(1, len(text) + 2))
    out, start = [], text.find(pattern)
    while start >= 0:
        out.append(start + 1)
        start = text.find(pattern, start + 1)
    return out


def random_text(rng, symbols, n):
    return "".join(rng.choice(list(symbols), size=n))
