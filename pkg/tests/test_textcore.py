import numpy as np
import pytest
from hypothesis import given, strategies as st

from eprindex import SentinelError, build_suffix_array, bwt_ranks, pack
from eprindex.textcore import PackedText, reverse_text, with_sentinel
from oracles import naive_bwt, naive_sa

texts = st.lists(st.integers(1, 6), min_size=0, max_size=120).map(lambda v: with_sentinel(np.array(v, dtype=np.uint8)))


def test_mississippi_bwt():
    s = "mississippi"
    order = {c: i + 1 for i, c in enumerate(sorted(set(s)))}
    x = with_sentinel(np.array([order[c] for c in s], dtype=np.uint8))
    sa = build_suffix_array(x)
    assert list(sa) == [12, 11, 8, 5, 2, 1, 10, 9, 7, 4, 6, 3]
    inv = {v: k for k, v in order.items()} | {0: "$"}
    assert "".join(inv[int(c)] for c in bwt_ranks(x, sa)) == "ipssm$pissii"


@given(texts)
def test_suffix_array_matches_sorting(x):
    assert np.array_equal(build_suffix_array(x), naive_sa(x))


@given(texts)
def test_bwt_matches_rotation_definition(x):
    assert np.array_equal(bwt_ranks(x, build_suffix_array(x)), naive_bwt(x))


def test_periodic_text_needs_many_rounds():
    x = with_sentinel(np.ones(1000, dtype=np.uint8))
    assert list(build_suffix_array(x)[:3]) == [1001, 1000, 999]


@pytest.mark.parametrize("bad", [[1, 2, 3], [1, 0, 2, 0], [0, 0], []])
def test_sentinel_checks(bad):
    with pytest.raises(SentinelError):
        build_suffix_array(np.array(bad, dtype=np.uint8))


def test_with_sentinel_rejects_rank_zero():
    with pytest.raises(SentinelError):
        with_sentinel([1, 0, 2])


def test_reverse_keeps_sentinel_last():
    assert list(reverse_text([1, 2, 3, 0])) == [3, 2, 1, 0]


@given(st.integers(1, 8), st.lists(st.integers(0, 255), max_size=300), st.booleans())
def test_pack_roundtrip(b, vals, fixed):
    x = np.array(vals, dtype=np.int64) & ((1 << b) - 1)
    cpw = 64 // b if fixed else None
    p = pack(x, b, cpw)
    assert np.array_equal(p.unpack(), x)
    for j in range(0, len(x), 37):
        assert p.get(j) == x[j]


def test_pack_stream_straddles_words():
    p = pack(np.full(30, 5), 3)
    assert p.words.size == 2 and np.all(p.unpack() == 5)


def test_pack_validation():
    with pytest.raises(ValueError):
        pack([4], 2)
    with pytest.raises(ValueError):
        pack([1], 9)
    with pytest.raises(ValueError):
        pack([1], 3, 22)
    with pytest.raises(IndexError):
        PackedText(np.zeros(1, np.uint64), 2, 3).get(2)
