import numpy as np
import pytest
from hypothesis import given, strategies as st

from eprindex import Alphabet, FMIndex, SearchRange, SentinelError, UnknownSymbolError
from eprindex.textcore import with_sentinel
from oracles import find_all, random_text

KINDS = ["epr", "wt"]


@pytest.fixture(params=KINDS)
def kind(request):
    return request.param


def test_mississippi(kind, backend):
    fm = FMIndex.build("mississippi", dict_kind=kind)
    a = fm.alphabet
    assert fm.C[a.rank_of("i")] == 1
    assert fm.dictionary.occ(a.rank_of("i"), 12) == 4
    assert fm.backward_extend(fm.full_range(), a.rank_of("i")) == SearchRange(2, 5)
    assert fm.count("ssi") == 2
    assert list(fm.locate_pattern("ssi", backend)) == [3, 6]
    assert list(fm.count_many(["ssi", "", "p", "pp", "ssippis", "m"], backend)) == [2, 12, 2, 1, 0, 1]


def test_C_table(kind):
    fm = FMIndex.build("abracadabra", dict_kind=kind)
    # $ a b c d r
    assert list(fm.C) == [0, 1, 6, 8, 9, 10, 12]


@pytest.mark.parametrize("symbols", ["ab", "ACGT", "ACGTURYSWKMBDHVN", "abcdefghijklmnopqrstuvwxyz0"])
def test_count_locate_vs_naive(symbols, kind, backend, rng):
    text = random_text(rng, symbols, 700)
    fm = FMIndex.build(text, Alphabet(symbols.encode()), kind, sample_rate=7)
    pats = [text[o:o + m] for o in rng.integers(0, 690, 40) for m in (1, 3, 9)]
    pats += [random_text(rng, symbols, 3) for _ in range(30)]
    got = fm.count_many(pats, backend)
    for p, g in zip(pats, got):
        ref = find_all(text, p)
        assert g == len(ref) == fm.count(p)
        assert list(fm.locate_pattern(p, backend)) == ref


@given(st.text(alphabet="ACGT", min_size=1, max_size=120), st.integers(1, 12), st.data())
def test_property_count_locate(text, rate, data):
    fm = FMIndex.build(text, Alphabet.preset("dna"), "epr", sample_rate=rate)
    p = data.draw(st.text(alphabet="ACGT", min_size=1, max_size=6))
    assert list(fm.locate_pattern(p, "numpy")) == find_all(text, p)


@given(st.text(alphabet="xyz", min_size=1, max_size=150))
def test_inverse_bwt(text):
    fm = FMIndex.build(text, Alphabet(b"xyz"), "epr", sample_rate=None)
    assert fm.alphabet.decode(fm.inverse_bwt()[:-1]) == text


def test_lf_is_a_permutation(kind, backend, rng):
    text = random_text(rng, "ACGT", 400)
    fm = FMIndex.build(text, dict_kind=kind)
    rows = np.arange(1, fm.n + 1)
    lf = fm.lf_many(rows, backend)
    assert sorted(lf) == list(rows)
    assert [fm.lf(i) for i in (1, 50, fm.n)] == list(lf[[0, 49, fm.n - 1]])


def test_sample_rate_one_and_none(kind):
    fm = FMIndex.build("banana", dict_kind=kind, sample_rate=1)
    assert list(fm.locate_pattern("ana")) == [2, 4]
    bare = FMIndex.build("banana", dict_kind=kind, sample_rate=None)
    with pytest.raises(ValueError):
        bare.locate_pattern("ana")


def test_pattern_validation(kind):
    fm = FMIndex.build("banana", dict_kind=kind)
    with pytest.raises(SentinelError):
        fm.count("an$")
    with pytest.raises(UnknownSymbolError):
        fm.count("anx")
    with pytest.raises(IndexError):
        fm.backward_extend(fm.full_range(), 9)
    assert fm.count("") == 7


def test_needs_sentinel():
    with pytest.raises(SentinelError):
        FMIndex.from_ranks(with_sentinel([1, 2]), Alphabet(b"ab", sentinel_included=False))


def test_unknown_dict_kind():
    with pytest.raises(ValueError):
        FMIndex.build("ab", dict_kind="rrr")


def test_rank_input_and_equality(kind):
    a = Alphabet.preset("dna")
    r = with_sentinel(a.encode("GATTACA"))
    assert FMIndex.from_ranks(r, a, kind) == FMIndex.build("GATTACA", a, kind)
    assert FMIndex.build("GATTACA", a, kind) != FMIndex.build("GATTACC", a, kind)


def test_space_includes_C(kind):
    fm = FMIndex.build("GATTACA" * 50, dict_kind=kind)
    assert fm.space()["fixed"] == fm.dictionary.space()["fixed"] + fm.C.nbytes


def test_batched_search_and_locate(kind, backend, rng):
    text = random_text(rng, "ACGT", 900)
    fm = FMIndex.build(text, Alphabet.preset("dna"), kind, sample_rate=5)
    pats = [text[o:o + m] for o in rng.integers(0, 880, 30) for m in (1, 4, 15)]
    pats += [random_text(rng, "ACGT", 9) for _ in range(20)] + [""]
    a, b = fm.search_many(pats, backend)
    for p, aa, bb in zip(pats, a, b):
        r = fm.search(p)
        assert (bb - aa + 1) == len(r) and (len(r) == 0 or (aa, bb) == (r.a, r.b))
    for p, got in zip(pats, fm.locate_many(pats, backend)):
        assert list(got) == (find_all(text, p) if p else list(range(1, fm.n + 1)))


def test_rank_matrix_patterns(kind):
    fm = FMIndex.build("GATTACA", Alphabet.preset("dna"), kind)
    rows = np.array([[4, 4], [1, 2], [3, 3]], dtype=np.uint8)  # TT, AC, GG
    assert list(fm.count_many(rows)) == [1, 1, 0]
    with pytest.raises(SentinelError):
        fm.count_many(np.zeros((1, 2), dtype=np.uint8))
