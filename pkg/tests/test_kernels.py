import os
import subprocess
import sys

import numpy as np
import pytest

from eprindex import Alphabet, BiFMIndex, available_backends, get_kernels
from eprindex._accel import BACKENDS
from eprindex.bench import gen_text
from eprindex.fmindex import encode_pattern, pad_patterns

needs_numba = pytest.mark.skipif("numba" not in available_backends(), reason="numba not installed")


def test_get_kernels():
    assert get_kernels("numpy").__name__.endswith("_numpy")
    with pytest.raises(ValueError):
        get_kernels("cuda")
    assert set(available_backends()) <= set(BACKENDS)


def test_env_flag_selects_numpy():
    env = dict(os.environ, EPRINDEX_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "import eprindex; print(eprindex.DEFAULT_BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"


@needs_numba
@pytest.mark.parametrize("sigma", [1, 2, 3, 4, 7, 10, 16, 27, 60, 94])
@pytest.mark.parametrize("kind", ["epr", "wt"])
def test_backends_agree_on_search(sigma, kind):
    rng = np.random.default_rng(sigma)
    a = Alphabet.of_size(sigma)
    text = gen_text(a, 4000, sigma)
    bi = BiFMIndex.build(text, a, kind, None)
    pats = [text[o:o + m] for o in rng.integers(0, 3900, 60) for m in (0, 1, 5, 40)]
    pats += [gen_text(a, int(k), int(k)) for k in rng.integers(1, 12, 60)]
    queries, lengths = pad_patterns([encode_pattern(a, p) for p in pats])
    splits = rng.integers(0, lengths + 1)
    res = {}
    for be in ("numba", "numpy"):
        k = get_kernels(be)
        f, r = bi.fwd, bi.rev
        uni = k.count_uni(kind, f.dictionary.kernel_args, f.C, bi.n, queries, lengths)
        two = k.count_bi(kind, f.dictionary.kernel_args, r.dictionary.kernel_args, f.C, r.C, bi.n,
                         queries, lengths, splits)
        res[be] = (uni[0].tolist(), uni[1], two[0].tolist(), two[1])
    assert res["numba"] == res["numpy"]
    assert res["numba"][0] == res["numba"][2]


@needs_numba
@pytest.mark.parametrize("kind", ["epr", "wt"])
def test_steps_stop_at_empty_range(kind):
    bi = BiFMIndex.build("AAAAAAAA", Alphabet(b"AC"), kind)
    queries, lengths = pad_patterns([encode_pattern(bi.alphabet, p) for p in ["CAAAA", "AAAAC", "AA"]])
    for be in ("numba", "numpy"):
        k = get_kernels(be)
        counts, steps = k.count_uni(kind, bi.fwd.dictionary.kernel_args, bi.fwd.C, bi.n, queries, lengths)
        # CAAAA empties on its fifth step, AAAAC on its first
        assert counts.tolist() == [0, 0, 7] and steps == 5 + 1 + 2
