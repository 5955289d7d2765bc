"""Wall-clock comparison of the compiled and pure-Python run kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import time

from onemaxmin._backend import available
from onemaxmin.benchmark import ProblemInstance
from onemaxmin.bitcore import RngStream
from onemaxmin.moea import EngineConfig, run_to_coverage
from onemaxmin.single import epsilon_constraint_pipeline

CASES = [
    ("rls-pipeline", ProblemInstance(64, 32)),
    ("semo", ProblemInstance(32, 16)),
    ("gsemo", ProblemInstance(32, 16)),
    ("moead", ProblemInstance(32, 16)),
    ("nsga2", ProblemInstance(24, 6)),
    ("smsemoa", ProblemInstance(24, 6)),
]


def one(name, inst, backend, seed):
    rng = RngStream(seed)
    if name == "rls-pipeline":
        res = epsilon_constraint_pipeline(inst, None, rng, backend=backend)
        return res.total_evaluations
    return run_to_coverage(EngineConfig(name), inst, None, rng, backend=backend).evaluations


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = available()
    print(f"{'case':<24}" + "".join(f"{b:>14}" for b in backends) + "   speedup  same-result")
    for name, inst in CASES:
        times, evals = {}, {}
        for b in backends:
            one(name, inst, b, 10_000)  # warm-up
            start = time.perf_counter()
            evals[b] = [one(name, inst, b, seed) for seed in range(args.repeat)]
            times[b] = (time.perf_counter() - start) / args.repeat
        label = f"{name} n={inst.n} k={inst.k}"
        cells = "".join(f"{times[b] * 1000:>11.1f} ms" for b in backends)
        speed = f"{times['python'] / times['compiled']:>9.0f}x" if len(backends) == 2 else "      n/a"
        same = len({tuple(v) for v in evals.values()}) == 1
        print(f"{label:<24}{cells}{speed}  {same}")


if __name__ == "__main__":
    main()
