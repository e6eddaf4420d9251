import numpy as np
import pytest
from hypothesis import given, strategies as st

from eprindex import build_rank
from eprindex.bitrank import build_rank_from_words, pack_bits


@given(st.lists(st.booleans(), max_size=2000))
def test_rank_matches_cumsum(bits):
    rbv = build_rank(bits)
    ref = np.concatenate(([0], np.cumsum(np.array(bits, dtype=np.int64))))
    for i in range(0, len(bits) + 1, max(1, len(bits) // 50)):
        assert rbv.rank1(i) == ref[i]
    assert rbv.rank1(len(bits)) == ref[-1]
    assert np.array_equal(rbv.to_bits(), np.array(bits, dtype=np.uint8))


def test_rank_many_backends(backend, rng):
    bits = rng.random(5000) < 0.3
    rbv = build_rank(bits)
    ref = np.concatenate(([0], np.cumsum(bits)))
    i = np.arange(bits.size + 1)
    assert np.array_equal(rbv.rank1_many(i, backend=backend), ref)


def test_bounds():
    rbv = build_rank([1, 0, 1])
    assert len(rbv) == 3 and rbv[2] == 1
    with pytest.raises(IndexError):
        rbv.rank1(4)
    with pytest.raises(IndexError):
        rbv[3]
    with pytest.raises(IndexError):
        rbv.rank1_many([-1])


def test_all_ones_fill_uint16_blocks():
    rbv = build_rank(np.ones(256 * 10 + 5, dtype=bool))
    assert rbv.rank1(rbv.n_bits) == rbv.n_bits
    assert rbv.blocks.max() == 192


def test_words_shape_checked():
    words, n = pack_bits([1] * 64)
    assert words.size == 2
    with pytest.raises(ValueError):
        build_rank_from_words(words[:1], n)


def test_equality():
    assert build_rank([1, 0, 1]) == build_rank([1, 0, 1])
    assert build_rank([1, 0, 1]) != build_rank([1, 1, 1])
