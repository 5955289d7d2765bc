"""Pure-Python run kernels.

Same signatures, same random-draw order and same results as the compiled
module ``_kernels``; selected automatically when the extension is missing or
``ONEMAXMIN_PURE_PYTHON=1`` is set. The population engines are thin loops over
the reference step functions in :mod:`onemaxmin.moea`.

Every population kernel returns
``(evals, evals_first, evals_full, violations, final_values)`` with ``-1`` for
a milestone that was not reached. ``violations`` counts front points lost
between consecutive checks plus any capacity or reference-point breach.
"""
from __future__ import annotations

from .benchmark import ObjectivePair, ProblemInstance, pareto_front
from .bitcore import RngStream, random_bits
from . import moea

SELECTION_CODES = {"fair": 0, "random": 1, "tournament": 2}
_SELECTION_NAMES = {v: s for s, v in SELECTION_CODES.items()}

KIND_WEIGHTED = 0
KIND_PENALTY = 1


def scalar_run(n, k, kind, c1, c2, c3, c4, ceil_eps, check, bitwise, mask, budget, rng: RngStream):
    """Elitist single-solution search on an integer-scaled objective.

    ``kind`` 0 scores ``c1*f1 + (c2 - c1)*f2`` (weight ``c1/c2``). ``kind`` 1
    scores ``f1*c2*c4 + c3*min(0, f2*c2 - c1)``, the exterior penalty with
    ``eps = c1/c2`` and ``r = c3/c4``. ``mask[i]`` marks level ``D_i`` as a
    target. With ``check`` set (penalty, one-bit moves) each accepted move
    is tested against the survival rules of feasible and infeasible parents.

    Returns ``(genome, f1, f2, evals, hit, violations)``.
    """
    a = n - k
    g = bytearray(random_bits(n, rng))
    f1 = sum(g)
    head = sum(g[:a])
    f2 = head + k - (f1 - head)

    def score(u1, u2):
        if kind == KIND_WEIGHTED:
            return c1 * u1 + (c2 - c1) * u2
        return u1 * c2 * c4 + c3 * min(0, u2 * c2 - c1)

    def on_target(u1, u2):
        return u1 + u2 == 2 * n - k and mask[u2]

    cur = score(f1, f2)
    evals = 1
    violations = 0
    hit = on_target(f1, f2)
    while not hit and evals < budget:
        if bitwise:
            flips = rng.flip_positions(n)
        else:
            flips = [rng.randbelow(n)]
        u1, u2 = f1, f2
        for j in flips:
            up = 1 if g[j] == 0 else -1
            u1 += up
            u2 += up if j < a else -up
        evals += 1
        val = score(u1, u2)
        if val >= cur:
            if check:
                j = flips[0]
                feasible = f2 * c2 >= c1
                if feasible:
                    ok = u2 * c2 >= c1 and (
                        (j < a and g[j] == 0) or (j >= a and g[j] == 0 and f2 >= ceil_eps + 1))
                else:
                    ok = (j < a and g[j] == 0) or (j >= a and g[j] == 1)
                if not ok:
                    violations += 1
            for j in flips:
                g[j] ^= 1
            f1, f2, cur = u1, u2, val
            hit = on_target(f1, f2)
    return bytes(g), f1, f2, evals, bool(hit), violations


class _Tracker:
    """Milestones and lost-front-point accounting shared by the engines."""

    def __init__(self, inst: ProblemInstance):
        self.front = set(pareto_front(inst))
        self.size = inst.k + 1
        self.covered: set = set()
        self.first = -1
        self.full = -1
        self.violations = 0

    def update(self, values, evals: int) -> bool:
        now = self.front.intersection(values)
        self.violations += len(self.covered - now)
        self.covered = now
        if now and self.first < 0:
            self.first = evals
        if len(now) == self.size and self.full < 0:
            self.full = evals
        return self.full >= 0


def _finish(evals, tr: _Tracker, values):
    return evals, tr.first, tr.full, tr.violations, [tuple(v) for v in values]


def semo_run(n, k, bitwise, budget, rng: RngStream):
    inst = ProblemInstance(n, k)
    step = moea.gsemo_step if bitwise else moea.semo_step
    pop = moea.semo_init(inst, rng)
    evals = 1
    tr = _Tracker(inst)
    done = tr.update([m.value for m in pop], evals)
    while not done and evals + 1 <= budget:
        pop = step(pop, inst, rng)
        evals += 1
        if len(pop) > k + 1:
            tr.violations += 1
        done = tr.update([m.value for m in pop], evals)
    return _finish(evals, tr, [m.value for m in pop])


def smsemoa_run(n, k, mu, ref1, ref2, budget, rng: RngStream):
    inst = ProblemInstance(n, k)
    ref = ObjectivePair(ref1, ref2)
    pop = moea.smsemoa_init(inst, mu, rng)
    evals = mu
    tr = _Tracker(inst)
    done = tr.update([m.value for m in pop], evals)
    while not done and evals + 1 <= budget:
        pop = moea.smsemoa_step(pop, inst, rng, ref)
        evals += 1
        if len(pop) != mu:
            tr.violations += 1
        done = tr.update([m.value for m in pop], evals)
    return _finish(evals, tr, [m.value for m in pop])


def nsga2_run(n, k, N, selection, budget, rng: RngStream):
    inst = ProblemInstance(n, k)
    name = _SELECTION_NAMES[selection]
    state = moea.nsga2_init(inst, N, rng)
    evals = N
    tr = _Tracker(inst)
    done = tr.update([m.value for m in state.pop], evals)
    while not done and evals + N <= budget:
        state = moea.nsga2_generation(state, inst, name, rng)
        evals += N
        if len(state.pop) != N:
            tr.violations += 1
        done = tr.update([m.value for m in state.pop], evals)
    return _finish(evals, tr, [m.value for m in state.pop])


def moead_run(n, k, budget, rng: RngStream):
    inst = ProblemInstance(n, k)
    state = moea.moead_init(inst, rng)
    evals = k + 1
    tr = _Tracker(inst)
    done = tr.update([a.value for a in state.archive], evals)
    while not done and evals + k + 1 <= budget:
        z = state.z
        state = moea.moead_generation(state, inst, rng)
        evals += k + 1
        if state.z[0] < z[0] or state.z[1] < z[1]:
            tr.violations += 1
        done = tr.update([a.value for a in state.archive], evals)
    return _finish(evals, tr, [a.value for a in state.archive])


def tournament_hits(rank, crowd, target, generations, rng: RngStream):
    """Generations in which ``target`` wins at least one of ``len(rank)`` tournaments."""
    N = len(rank)
    hits = 0
    for _ in range(generations):
        won = False
        for _ in range(N):
            if moea.tournament_pick(rank, crowd, rng) == target:
                won = True
        hits += won
    return hits
