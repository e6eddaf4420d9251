import io

import pytest

from eprindex.cli import EXIT_CORRUPT, EXIT_DATA, EXIT_OK, EXIT_USAGE, main, read_text


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def toy(tmp_path):
    src = tmp_path / "toy.txt"
    src.write_text("mississippi\n")
    idx = tmp_path / "toy.idx"
    code, out, _ = run("build", src, "-o", idx)
    assert code == EXIT_OK and "n=12" in out
    return idx


def test_count(toy):
    assert run("count", toy, "ssi", "", "i") == (EXIT_OK, "2\n12\n4\n", "")


def test_count_from_file(toy, tmp_path):
    pats = tmp_path / "p.txt"
    pats.write_text("ssi\npp\n")
    code, out, _ = run("count", toy, "s", "-f", pats)
    assert code == EXIT_OK and out.split() == ["4", "2", "1"]


def test_locate(toy):
    assert run("locate", toy, "ssi") == (EXIT_OK, "3 6\n", "")
    assert run("locate", toy, "ppp") == (EXIT_OK, "", "")


def test_bad_patterns(toy):
    code, _, err = run("count", toy, "sxi")
    assert code == EXIT_DATA and "position 2" in err
    assert run("locate", toy, "s$")[0] == EXIT_DATA


def test_usage_errors(toy):
    assert run()[0] == EXIT_USAGE
    assert run("frobnicate")[0] == EXIT_USAGE
    assert run("count", toy)[0] == EXIT_USAGE
    assert run("build", "x.txt")[0] == EXIT_USAGE


def test_corrupt_and_missing(toy, tmp_path):
    data = bytearray(toy.read_bytes())
    data[40] ^= 1
    bad = tmp_path / "bad.idx"
    bad.write_bytes(bytes(data))
    assert run("count", bad, "s")[0] == EXIT_CORRUPT
    bad.write_bytes(bytes(data[:30]))
    assert run("count", bad, "s")[0] == EXIT_CORRUPT
    assert run("count", tmp_path / "nope.idx", "s")[0] == EXIT_DATA


def test_build_rejects_symbol_outside_alphabet(tmp_path):
    src = tmp_path / "dna.txt"
    src.write_text("ACGTXA")
    code, _, err = run("build", src, "--alphabet", "dna", "-o", tmp_path / "o.idx")
    assert code == EXIT_DATA and "position 5" in err
    src.write_text("AC$GT")
    assert run("build", src, "-o", tmp_path / "o.idx")[0] == EXIT_DATA


@pytest.mark.parametrize("kind", ["epr", "wt"])
def test_fasta_bidirectional(kind, tmp_path):
    src = tmp_path / "x.fa"
    src.write_text(">chr1 test\nACGT\nACGA\n>chr2\nTTAC\n")
    assert read_text(src, fasta=True) == b"ACGTACGATTAC"
    idx = tmp_path / "x.idx"
    assert run("build", src, "--fasta", "--alphabet", "dna", "--dict", kind, "--bidirectional",
               "--sample-rate", 3, "-o", idx)[0] == EXIT_OK
    assert run("count", idx, "AC", "TTACG") == (EXIT_OK, "3\n0\n", "")
    assert run("locate", idx, "AC") == (EXIT_OK, "1 5 11\n", "")


def test_locate_without_samples(tmp_path):
    src = tmp_path / "t.txt"
    src.write_text("banana")
    idx = tmp_path / "t.idx"
    run("build", src, "--sample-rate", 0, "-o", idx)
    assert run("count", idx, "ana")[1] == "2\n"
    assert run("locate", idx, "ana")[0] == EXIT_DATA


def test_literal_alphabet_order(tmp_path):
    src = tmp_path / "t.txt"
    src.write_text("cabbage")
    idx = tmp_path / "t.idx"
    assert run("build", src, "--alphabet", "gecba", "-o", idx)[0] == EXIT_OK
    assert run("count", idx, "ab")[1] == "1\n"


def test_gen_is_deterministic(tmp_path):
    a = run("gen", "-n", 50, "--alphabet", "dna", "--seed", 7)[1]
    b = run("gen", "-n", 50, "--alphabet", "dna", "--seed", 7)[1]
    assert a == b and len(a.strip()) == 50 and set(a.strip()) <= set("ACGT")
    out = tmp_path / "g.txt"
    assert run("gen", "-n", 30, "--sigma", 10, "-o", out)[0] == EXIT_OK
    assert len(read_text(out)) == 30


def test_bench_csv(tmp_path):
    code, out, _ = run("bench", "--sigma", 4, 16, "-n", 3000, "-q", 50, "-m", 12, "--reps", 1,
                       "--warmup", 0, "--mode", "uni", "bi")
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == "dict,sigma_eff,n,q,m,mode,steps,ns_per_step,index_bytes,ratio,checksum"
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 8 and all(r[6] == "600" for r in rows)
    # identical configs give identical checksums for both dictionaries
    sums = {(r[1], r[5]): set() for r in rows}
    for r in rows:
        sums[(r[1], r[5])].add(r[10])
    assert all(len(v) == 1 for v in sums.values())
    path = tmp_path / "b.csv"
    assert run("bench", "--sigma", 4, "-n", 500, "-q", 5, "-m", 5, "--reps", 1, "-o", path)[0] == EXIT_OK
    assert path.read_text().count("\n") == 3
