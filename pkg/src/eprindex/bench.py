"""Search benchmark: uniform random texts, sampled queries, ns per step.

Queries are substrings of the text, so no search stops early and every
configuration executes exactly q * m steps. In ``bi`` mode the right half
of each query (ceil(m/2) characters) is matched left to right starting in
the middle, then the left half right to left; every extended character is
one step. Timings cover the search kernel only, never the build.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, TextIO

import numpy as np

from ._accel import get_kernels
from .alphabet import Alphabet
from .bifmindex import BiFMIndex
from .fmindex import DICT_KINDS, FMIndex
from .textcore import with_sentinel

MODES = ("uni", "bi")
CSV_COLUMNS = ("dict", "sigma_eff", "n", "q", "m", "mode", "steps", "ns_per_step",
               "index_bytes", "ratio", "checksum")


@dataclass(frozen=True)
class BenchConfig:
    sigma: int = 4
    n: int = 10**6
    q: int = 10**4
    m: int = 50
    dict_kind: str = "epr"
    mode: str = "bi"
    seed: int = 0
    backend: str | None = None
    warmup: int = 3
    reps: int = 5

    def __post_init__(self):
        if self.dict_kind not in DICT_KINDS:
            raise ValueError(f"dictionary kind must be one of {DICT_KINDS}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.n < 1 or self.q < 0 or self.m < 1:
            raise ValueError("need n >= 1, q >= 0 and m >= 1")
        if self.m > self.n:
            raise ValueError("query length exceeds the text length")
        if self.reps < 1 or self.warmup < 0:
            raise ValueError("need reps >= 1 and warmup >= 0")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet.of_size(self.sigma)


@dataclass
class BenchReport:
    config: BenchConfig
    sigma_eff: int
    steps: int
    seconds: float
    ns_per_step: float
    space: dict[str, int]
    ratio: float
    checksum: int
    times: list[float] = field(default_factory=list)

    @property
    def index_bytes(self) -> int:
        return self.space["total"]

    def row(self) -> dict:
        c = self.config
        return {
            "dict": c.dict_kind, "sigma_eff": self.sigma_eff, "n": c.n, "q": c.q, "m": c.m,
            "mode": c.mode, "steps": self.steps, "ns_per_step": round(self.ns_per_step, 3),
            "index_bytes": self.index_bytes, "ratio": round(self.ratio, 4), "checksum": self.checksum,
        }

    def to_dict(self) -> dict:
        d = asdict(self)
        d["config"] = asdict(self.config)
        return d


def gen_ranks(alphabet: Alphabet, n: int, seed: int) -> np.ndarray:
    """Uniform i.i.d. character ranks (sentinel excluded)."""
    if n < 1:
        raise ValueError("text length must be >= 1")
    rng = np.random.default_rng(seed)
    return rng.integers(alphabet.offset, alphabet.sigma_eff, n).astype(np.uint8)


def gen_text(alphabet: Alphabet, n: int, seed: int) -> bytes:
    """Uniform random text over ``alphabet``, deterministic in ``seed``."""
    syms = np.frombuffer(alphabet.symbols, dtype=np.uint8)
    return syms[gen_ranks(alphabet, n, seed) - alphabet.offset].tobytes()


def sample_offsets(n: int, q: int, m: int, seed: int) -> np.ndarray:
    if m > n:
        raise ValueError(f"query length {m} exceeds text length {n}")
    rng = np.random.default_rng(seed)
    return rng.integers(0, n - m + 1, q)


def sample_queries(text, q: int, m: int, seed: int) -> list:
    """``q`` substrings of length ``m`` at uniformly random offsets."""
    off = sample_offsets(len(text), q, m, seed)
    return [text[o:o + m] for o in off]


def space_report(index) -> dict[str, float]:
    """Byte counts per component and bits / (log2(sigma_eff) * n).

    Accepts a dictionary, an :class:`FMIndex` or a :class:`BiFMIndex`.
    """
    sp = dict(index.space())
    sp["total"] = sum(sp.values())
    sigma_eff = index.alphabet.sigma_eff if hasattr(index, "alphabet") else index.sigma_eff
    sp["ratio"] = sp["total"] * 8 / (math.log2(sigma_eff) * index.n)
    return sp


def build_index(cfg: BenchConfig, ranks: np.ndarray):
    text = with_sentinel(ranks)
    if cfg.mode == "uni":
        return FMIndex.from_ranks(text, cfg.alphabet, cfg.dict_kind, None)
    return BiFMIndex.from_ranks(text, cfg.alphabet, cfg.dict_kind, None)


def search_fn(cfg: BenchConfig, index):
    """Zero-argument callable running all of ``cfg``'s queries once.

    Returns ``(counts, steps)``. Query sampling happens here, outside any
    timed region.
    """
    ranks = gen_ranks(cfg.alphabet, cfg.n, cfg.seed)
    off = sample_offsets(cfg.n, cfg.q, cfg.m, cfg.seed + 1)
    queries = np.ascontiguousarray(ranks[off[:, None] + np.arange(cfg.m)])
    lengths = np.full(cfg.q, cfg.m, dtype=np.int64)
    kern = get_kernels(cfg.backend)
    if cfg.mode == "uni":
        d = index.dictionary

        def search():
            return kern.count_uni(d.kind, d.kernel_args, index.C, index.n, queries, lengths)
    else:
        splits = lengths // 2
        f, r = index.fwd, index.rev

        def search():
            return kern.count_bi(f.dictionary.kind, f.dictionary.kernel_args, r.dictionary.kernel_args,
                                 f.C, r.C, index.n, queries, lengths, splits)
    return search


def run_bench(cfg: BenchConfig, index=None) -> BenchReport:
    """Run one configuration; ``index`` may be passed to reuse a build."""
    if index is None:
        index = build_index(cfg, gen_ranks(cfg.alphabet, cfg.n, cfg.seed))
    search = search_fn(cfg, index)
    for _ in range(cfg.warmup):
        search()
    times = []
    for _ in range(cfg.reps):
        t0 = time.perf_counter_ns()
        counts, steps = search()
        times.append((time.perf_counter_ns() - t0) * 1e-9)
    if steps != cfg.q * cfg.m:
        raise AssertionError(f"executed {steps} steps, expected {cfg.q * cfg.m}")
    if cfg.q and counts.min() < 1:
        raise AssertionError("a sampled query was not found")
    seconds = float(np.median(times))
    sp = space_report(index)
    return BenchReport(
        config=cfg,
        sigma_eff=cfg.alphabet.sigma_eff,
        steps=int(steps),
        seconds=seconds,
        ns_per_step=seconds * 1e9 / steps if steps else float("nan"),
        space={k: int(v) for k, v in sp.items() if k != "ratio"},
        ratio=float(sp["ratio"]),
        checksum=int(counts.sum()),
        times=times,
    )


def write_csv(reports: Iterable[BenchReport], out: TextIO) -> None:
    w = csv.DictWriter(out, fieldnames=CSV_COLUMNS, lineterminator="\n")
    w.writeheader()
    for rep in reports:
        w.writerow(rep.row())
