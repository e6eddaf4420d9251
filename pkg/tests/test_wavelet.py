import numpy as np
import pytest
from hypothesis import given, strategies as st

from eprindex import build_epr, build_wt
from oracles import occ_table, prefix_occ_table


@pytest.mark.parametrize("sigma_eff", [2, 3, 5, 6, 11, 17, 28, 100])
def test_matches_naive_and_epr(sigma_eff, backend, rng):
    n = 2000
    bwt = rng.integers(0, sigma_eff, n).astype(np.uint8)
    wt = build_wt(bwt, sigma_eff)
    epr = build_epr(bwt, sigma_eff)
    ref = prefix_occ_table(bwt, sigma_eff)
    occ = occ_table(bwt, sigma_eff)
    c = np.repeat(np.arange(sigma_eff), n + 1)
    i = np.tile(np.arange(n + 1), sigma_eff)
    assert np.array_equal(wt.prefix_occ_many(c, i, backend=backend), ref[c, i])
    assert np.array_equal(wt.occ_many(c, i, backend=backend), occ[c, i])
    assert np.array_equal(wt.pair_many(c, i, backend=backend)[0],
                          epr.pair_many(c, i, backend=backend)[0])
    assert np.array_equal(wt.access_many(np.arange(1, n + 1), backend=backend), bwt)
    for cc in range(sigma_eff):
        assert wt.occ(cc, 1234) == occ[cc, 1234]
        assert wt.smaller(cc, 1234) == (ref[cc - 1, 1234] if cc else 0)
    assert wt.access(17) == bwt[16]


@given(st.integers(2, 70), st.lists(st.integers(0, 255), min_size=1, max_size=300))
def test_property_against_table(sigma_eff, vals):
    bwt = np.array(vals, dtype=np.uint8) % sigma_eff
    wt = build_wt(bwt, sigma_eff)
    ref = prefix_occ_table(bwt, sigma_eff)
    for c in range(sigma_eff):
        for i in range(0, len(bwt) + 1, 7):
            assert wt.prefix_occ(c, i) == ref[c, i]


def test_missing_characters_form_leaves():
    # only ranks 0 and 6 occur among 7: most nodes are empty or leaves
    bwt = np.array([6, 0, 6, 6, 0], dtype=np.uint8)
    wt = build_wt(bwt, 7)
    assert wt.height == 3
    ref = prefix_occ_table(bwt, 7)
    for c in range(7):
        assert [wt.prefix_occ(c, i) for i in range(6)] == list(ref[c])


def test_space_grows_with_height(rng):
    a = build_wt(rng.integers(0, 4, 10_000).astype(np.uint8), 4)
    b = build_wt(rng.integers(0, 16, 10_000).astype(np.uint8), 16)
    assert b.space()["bwt"] == 2 * a.space()["bwt"]


def test_validation_and_equality():
    wt = build_wt(np.array([1, 0, 2], dtype=np.uint8), 3)
    with pytest.raises(IndexError):
        wt.occ(3, 0)
    with pytest.raises(IndexError):
        wt.access_many([4])
    with pytest.raises(ValueError):
        build_wt(np.array([5], dtype=np.uint8), 3)
    assert wt == build_wt(np.array([1, 0, 2], dtype=np.uint8), 3)
    assert wt != build_wt(np.array([2, 0, 1], dtype=np.uint8), 3)
