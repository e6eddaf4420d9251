"""Numba kernels against the pure-numpy fallback on the same indices.

    python benchmarks/compare_backends.py [-n 200000] [-q 2000] [--sigma 4 10 16 27]

Each index is built once and searched by both backends; the occurrence
checksums must agree. Prints ns/step per backend and the speedup.
"""
from __future__ import annotations

import argparse

from eprindex import available_backends
from eprindex.bench import BenchConfig, build_index, gen_ranks, run_bench


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-n", type=int, default=200_000)
    ap.add_argument("-q", type=int, default=2_000)
    ap.add_argument("-m", type=int, default=50)
    ap.add_argument("--sigma", type=int, nargs="+", default=[4, 10, 16, 27])
    ap.add_argument("--mode", choices=("uni", "bi"), default="bi")
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args(argv)

    backends = available_backends()
    if "numba" not in backends:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'dict':>4} {'sigma':>5} {'numba ns/step':>14} {'numpy ns/step':>14} {'speedup':>8}")
    for sigma in args.sigma:
        for kind in ("epr", "wt"):
            base = BenchConfig(sigma=sigma, n=args.n, q=args.q, m=args.m, dict_kind=kind,
                               mode=args.mode, reps=args.reps, warmup=1)
            index = build_index(base, gen_ranks(base.alphabet, base.n, base.seed))
            res = {}
            for backend in ("numba", "numpy"):
                cfg = BenchConfig(**{**base.__dict__, "backend": backend})
                res[backend] = run_bench(cfg, index)
            if res["numba"].checksum != res["numpy"].checksum:
                raise SystemExit(f"checksum mismatch for {kind} sigma={sigma}")
            a, b = res["numba"].ns_per_step, res["numpy"].ns_per_step
            print(f"{kind:>4} {sigma:>5} {a:14.1f} {b:14.1f} {b / a:8.1f}")


if __name__ == "__main__":
    main()
