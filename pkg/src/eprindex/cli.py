"""Command-line front end: build, count, locate, bench and gen.

Exit codes: 0 success, 1 usage, 2 data or validation or IO problem,
3 corrupt index file.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import bench
from .alphabet import PRESETS, Alphabet
from .bifmindex import BiFMIndex
from .errors import EprIndexError, IndexFileError
from .fmindex import DEFAULT_SAMPLE_RATE, DICT_KINDS, FMIndex
from .persist import load_index, save_index

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CORRUPT = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def read_text(path, fasta: bool = False) -> bytes:
    """Input text as bytes.

    Raw mode drops one trailing line break. FASTA mode skips header lines
    and concatenates the sequence lines without their whitespace.
    """
    data = Path(path).read_bytes()
    if not fasta:
        if data.endswith(b"\r\n"):
            return data[:-2]
        return data[:-1] if data.endswith(b"\n") else data
    return b"".join(
        b"".join(line.split()) for line in data.splitlines() if not line.startswith(b">")
    )


def resolve_alphabet(name: str | None, text: bytes) -> Alphabet:
    if name is None or name == "auto":
        return Alphabet.from_text(text)
    if name.lower() in PRESETS:
        return Alphabet.preset(name)
    return Alphabet(name.encode("latin-1"))


def _load(path):
    index = load_index(path)
    if not isinstance(index, (FMIndex, BiFMIndex)):
        raise IndexFileError("file does not hold an FM index")
    return index


def cmd_build(args, out) -> int:
    text = read_text(args.text, args.fasta)
    alphabet = resolve_alphabet(args.alphabet, text)
    rate = args.sample_rate or None
    t0 = time.perf_counter()
    cls = BiFMIndex if args.bidirectional else FMIndex
    index = cls.build(text, alphabet, args.dict, rate)
    elapsed = time.perf_counter() - t0
    size = save_index(index, args.output)
    kind = f"{args.dict}-{'bi' if args.bidirectional else 'uni'}"
    print(f"built {kind} index: n={index.n} sigma_eff={alphabet.sigma_eff} "
          f"bytes={size} build_seconds={elapsed:.3f} -> {args.output}", file=out)
    return EXIT_OK


def _patterns(args) -> list[str]:
    pats = list(args.patterns)
    if args.patterns_file:
        lines = Path(args.patterns_file).read_text(encoding="latin-1").splitlines()
        pats += [ln.rstrip("\r") for ln in lines]
    if not pats:
        raise UsageError("count: give at least one pattern or --patterns-file")
    return pats


def cmd_count(args, out) -> int:
    index = _load(args.index)
    for c in index.count_many(_patterns(args)):
        print(int(c), file=out)
    return EXIT_OK


def cmd_locate(args, out) -> int:
    index = _load(args.index)
    fwd = index.fwd if isinstance(index, BiFMIndex) else index
    if fwd.samples is None:
        raise ValueError("index was built without suffix-array samples (--sample-rate 0)")
    pos = fwd.locate_pattern(args.pattern)
    if pos.size:
        print(" ".join(map(str, pos.tolist())), file=out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    reports = []
    for sigma in args.sigma:
        for mode in args.mode:
            for kind in args.dict:
                cfg = bench.BenchConfig(sigma=sigma, n=args.n, q=args.q, m=args.m, dict_kind=kind,
                                        mode=mode, seed=args.seed, backend=args.backend,
                                        warmup=args.warmup, reps=args.reps)
                reports.append(bench.run_bench(cfg))
    if args.output:
        with open(args.output, "w", newline="") as fh:
            bench.write_csv(reports, fh)
    else:
        bench.write_csv(reports, out)
    return EXIT_OK


def cmd_gen(args, out) -> int:
    alphabet = (Alphabet.preset(args.alphabet) if args.alphabet
                else Alphabet.of_size(args.sigma))
    text = bench.gen_text(alphabet, args.n, args.seed)
    if args.output:
        Path(args.output).write_bytes(text + b"\n")
    else:
        out.write(text.decode("latin-1") + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eprindex", description="FM indices over EPR dictionaries and wavelet trees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", help="index a text file")
    b.add_argument("text", help="input file (raw bytes or FASTA)")
    b.add_argument("-o", "--output", required=True, help="index file to write")
    b.add_argument("--alphabet", default="auto",
                   help=f"'auto', a preset ({', '.join(PRESETS)}) or the symbols in order")
    b.add_argument("--dict", choices=DICT_KINDS, default="epr")
    b.add_argument("--bidirectional", action="store_true")
    b.add_argument("--sample-rate", type=int, default=DEFAULT_SAMPLE_RATE,
                   help="sample every k-th text position for locate; 0 disables")
    b.add_argument("--fasta", action="store_true", help="skip '>' headers and join sequence lines")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("count", help="occurrence counts, one per line")
    c.add_argument("index")
    c.add_argument("patterns", nargs="*")
    c.add_argument("-f", "--patterns-file", help="file with one pattern per line")
    c.set_defaults(func=cmd_count)

    lo = sub.add_parser("locate", help="sorted 1-based occurrence positions")
    lo.add_argument("index")
    lo.add_argument("pattern")
    lo.set_defaults(func=cmd_locate)

    be = sub.add_parser("bench", help="search benchmark, CSV to stdout or --output")
    be.add_argument("--sigma", type=int, nargs="+", default=[4, 10, 16, 27])
    be.add_argument("--dict", choices=DICT_KINDS, nargs="+", default=list(DICT_KINDS))
    be.add_argument("--mode", choices=bench.MODES, nargs="+", default=["bi"])
    be.add_argument("-n", type=int, default=10**6)
    be.add_argument("-q", type=int, default=10**4)
    be.add_argument("-m", type=int, default=50)
    be.add_argument("--seed", type=int, default=0)
    be.add_argument("--backend", choices=("numba", "numpy"))
    be.add_argument("--warmup", type=int, default=3)
    be.add_argument("--reps", type=int, default=5)
    be.add_argument("-o", "--output")
    be.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="uniform random text")
    grp = g.add_mutually_exclusive_group()
    grp.add_argument("--sigma", type=int, default=4)
    grp.add_argument("--alphabet", choices=sorted(PRESETS))
    g.add_argument("-n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except IndexFileError as exc:
        print(f"error: corrupt index: {exc}", file=err)
        return EXIT_CORRUPT
    except (EprIndexError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
