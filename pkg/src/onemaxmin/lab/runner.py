"""Seeded, parallel trial execution."""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Optional

from ..benchmark import ProblemInstance
from ..bitcore import RngStream, derive_seed
from ..moea import default_budget, run_to_coverage
from ..records import TrialRecord
from ..single import default_scalar_budget, epsilon_constraint_pipeline
from .config import PIPELINES, AlgorithmSpec, ExperimentConfig


def run_trial(alg: AlgorithmSpec, inst: ProblemInstance, trial: int, seed: int,
              multiplier: float = 200, timing: bool = True,
              backend: Optional[str] = None, budget: Optional[int] = None) -> TrialRecord:
    """One seeded trial. ``budget`` overrides the law-based default (per run for pipelines)."""
    mult = alg.budget_multiplier if alg.budget_multiplier is not None else multiplier
    rng = RngStream(seed)
    start = time.perf_counter()
    if alg.name in PIPELINES:
        res = epsilon_constraint_pipeline(
            inst, budget or default_scalar_budget(inst.n, mult), rng, r=alg.r,
            algorithm="rls" if alg.name == "rls-pipeline" else "ea", backend=backend)
        full = res.evals_full_coverage
        rec = TrialRecord(alg.name, inst.n, inst.k, trial, seed, res.evals_first_pareto, full,
                          full is None, evaluations=res.total_evaluations)
    else:
        engine = alg.engine()
        rec = run_to_coverage(engine, inst, budget or default_budget(engine, inst, mult), rng, backend=backend)
        rec = TrialRecord(alg.name, inst.n, inst.k, trial, seed, rec.evals_first_pareto,
                          rec.evals_full_coverage, rec.censored, evaluations=rec.evaluations,
                          violations=rec.violations)
    wall = (time.perf_counter() - start) * 1000.0 if timing else None
    return rec.with_trial(trial, wall)


def _task(args):
    return args[0], args[1], run_trial(*args[2:])


def run_suite(cfg: ExperimentConfig, workers: Optional[int] = None,
              backend: Optional[str] = None) -> list[TrialRecord]:
    """Every (cell, trial) of ``cfg``; stream seed = split(master, cell, trial).

    Output is sorted by (cell, trial) whatever the worker count.
    """
    tasks = []
    for cell, inst, alg in cfg.cells():
        for trial in range(cfg.trials):
            seed = derive_seed(cfg.master_seed, cell, trial)
            tasks.append((cell, trial, alg, inst, trial, seed, cfg.budget_multiplier,
                          cfg.timing, backend))
    workers = workers or cfg.workers or os.cpu_count() or 1
    workers = max(1, min(workers, len(tasks)))
    if workers == 1:
        done = [_task(t) for t in tasks]
    else:
        chunk = max(1, math.ceil(len(tasks) / (workers * 8)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            done = list(pool.map(_task, tasks, chunksize=chunk))
    done.sort(key=lambda item: (item[0], item[1]))
    return [rec for _, _, rec in done]
