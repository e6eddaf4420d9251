import numpy as np
import pytest
from hypothesis import given, strategies as st

from eprindex import Alphabet, BiFMIndex, FMIndex
from oracles import find_all, random_text


@pytest.fixture(params=["epr", "wt"])
def kind(request):
    return request.param


def test_mississippi_all_splits(kind):
    bi = BiFMIndex.build("mississippi", dict_kind=kind)
    for split in range(4):
        st_ = bi.search("ssi", split)
        assert bi.bi_count(st_) == 2
        assert list(bi.locate(st_)) == [3, 6]


def test_steps_keep_mirror_and_smaller(kind, rng):
    text = random_text(rng, "ACGTN", 500)
    bi = BiFMIndex.build(text, Alphabet(b"ACGTN"), kind)
    for _ in range(60):
        st_ = bi.init_range()
        for _ in range(8):
            c = int(rng.integers(1, 6))
            right = bool(rng.integers(0, 2))
            assert bi.smaller(st_, c, right) == bi.smaller_explicit(st_, c, right)
            st_ = bi.extend_right(st_, c) if right else bi.extend_left(st_, c)
            if st_.empty:
                break
            assert st_.b - st_.a == st_.b_rev - st_.a_rev


@given(st.text(alphabet="ACG", min_size=1, max_size=80), st.text(alphabet="ACG", min_size=1, max_size=6),
       st.data())
def test_any_split_matches_unidirectional(text, pat, data):
    bi = BiFMIndex.build(text, Alphabet(b"ACG"), "epr")
    split = data.draw(st.integers(0, len(pat)))
    assert bi.count(pat, split) == len(find_all(text, pat)) == FMIndex.build(text, Alphabet(b"ACG")).count(pat)


@pytest.mark.parametrize("symbols", ["AC", "ACGT", "ACDEFGHIKLMNPQRSTVWYBJOUXZ*"])
def test_batched_matches_scalar(symbols, kind, backend, rng):
    text = random_text(rng, symbols, 900)
    bi = BiFMIndex.build(text, Alphabet(symbols.encode()), kind)
    pats = [text[o:o + m] for o in rng.integers(0, 880, 30) for m in (1, 2, 7, 20)]
    pats += [random_text(rng, symbols, 4) for _ in range(40)] + [""]
    splits = np.array([int(rng.integers(0, len(p) + 1)) for p in pats])
    got = bi.count_many(pats, splits, backend)
    assert list(got) == [bi.count(p, s) for p, s in zip(pats, splits)]
    assert list(got) == [len(find_all(text, p)) if p else len(text) + 1 for p in pats]


def test_reverse_index_has_no_samples():
    bi = BiFMIndex.build("ACGTACGT")
    assert bi.rev.samples is None and bi.fwd.samples is not None


def test_mismatched_components():
    with pytest.raises(ValueError):
        BiFMIndex(FMIndex.build("ACGT"), FMIndex.build("ACGTT"))


def test_empty_state_stays_empty(kind):
    bi = BiFMIndex.build("AAAA", Alphabet(b"AC"), kind)
    st_ = bi.extend_right(bi.init_range(), 2)
    assert st_.empty and bi.extend_left(st_, 1).empty and bi.bi_count(st_) == 0
    with pytest.raises(IndexError):
        bi.extend_left(bi.init_range(), 3)


def test_space_sums_both(kind):
    bi = BiFMIndex.build("ACGT" * 100, dict_kind=kind)
    assert bi.space()["bwt"] == bi.fwd.space()["bwt"] + bi.rev.space()["bwt"]
