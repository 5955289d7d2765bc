"""Population-based engines and their shared primitives.

The step functions in this module are the reference semantics. They fix the
details the run kernels in :mod:`onemaxmin._pykernels` and
:mod:`onemaxmin._kernels` must reproduce draw for draw:

* (G)SEMO keeps its population ordered by ascending ``f1``;
* SMS-EMOA appends the offspring and removes one member in place;
* NSGA-II lists survivors in their order within ``parents + offspring``;
* random tie-breaks draw only when there is more than one candidate, with
  truncation ties broken by a Fisher-Yates shuffle followed by a stable sort.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .benchmark import ObjectivePair, ProblemInstance, dominates, evaluate, weakly_dominates
from .bitcore import BitString, RngStream, one_bit_mutation, random_bitstring, standard_bitwise_mutation

INF = math.inf
DEFAULT_REF = ObjectivePair(-1, -1)

SELECTIONS = ("fair", "random", "tournament")


@dataclass(frozen=True)
class Individual:
    genome: BitString
    value: ObjectivePair

    @classmethod
    def of(cls, inst: ProblemInstance, genome: BitString) -> "Individual":
        return cls(genome, evaluate(inst, genome))


def _values(items: Sequence) -> list[ObjectivePair]:
    return [it.value if isinstance(it, Individual) else ObjectivePair(*it) for it in items]


# -- sorting, crowding, hypervolume --------------------------------------------

@dataclass
class FrontPartition:
    """Fronts as index lists into the sorted sequence, in input order."""

    fronts: list[list[int]]

    def rank_of(self, size: int) -> list[int]:
        rank = [0] * size
        for r, front in enumerate(self.fronts, start=1):
            for i in front:
                rank[i] = r
        return rank

    def members(self, items: Sequence) -> list[list]:
        return [[items[i] for i in front] for front in self.fronts]


def fast_nondominated_sort(items: Sequence) -> FrontPartition:
    """Deb's dominance-count layering over individuals or objective pairs."""
    vals = _values(items)
    size = len(vals)
    dominated_by: list[list[int]] = [[] for _ in range(size)]
    count = [0] * size
    for p in range(size):
        for q in range(p + 1, size):
            if dominates(vals[p], vals[q]):
                dominated_by[p].append(q)
                count[q] += 1
            elif dominates(vals[q], vals[p]):
                dominated_by[q].append(p)
                count[p] += 1
    fronts = []
    current = [i for i in range(size) if count[i] == 0]
    while current:
        fronts.append(current)
        nxt = []
        for p in current:
            for q in dominated_by[p]:
                count[q] -= 1
                if count[q] == 0:
                    nxt.append(q)
        current = sorted(nxt)
    return FrontPartition(fronts)


def crowding_distance(front: Sequence) -> list[float]:
    """Crowding distance of every member of ``front``, aligned with the input.

    Each objective is sorted ascending with ties kept in input order. The two
    ends get ``inf``; an interior member gains the normalized gap between its
    neighbours. An objective whose values are all equal adds nothing to the
    interior members.
    """
    vals = _values(front)
    size = len(vals)
    dist = [0.0] * size
    if size == 0:
        return dist
    for j in (0, 1):
        order = sorted(range(size), key=lambda i: vals[i][j])
        lo, hi = vals[order[0]][j], vals[order[-1]][j]
        dist[order[0]] = INF
        dist[order[-1]] = INF
        if hi == lo:
            continue
        span = hi - lo
        for t in range(1, size - 1):
            dist[order[t]] += (vals[order[t + 1]][j] - vals[order[t - 1]][j]) / span
    return dist


def hypervolume_2d(values, ref=DEFAULT_REF) -> int:
    """Area dominated by ``values`` and dominating ``ref`` (staircase sweep)."""
    r1, r2 = ref
    pts = sorted((p for p in _values(list(values)) if p[0] > r1 and p[1] > r2), reverse=True)
    area = 0
    top = r2
    for p1, p2 in pts:
        if p2 > top:
            area += (p1 - r1) * (p2 - top)
            top = p2
    return area


def hv_contribution(index: int, front: Sequence, ref=DEFAULT_REF) -> int:
    """Hypervolume lost when member ``index`` is removed from ``front``."""
    vals = _values(front)
    rest = vals[:index] + vals[index + 1:]
    return hypervolume_2d(vals, ref) - hypervolume_2d(rest, ref)


# -- (G)SEMO ----------------------------------------------------------------------

def semo_init(inst: ProblemInstance, rng: RngStream) -> list[Individual]:
    return [Individual.of(inst, random_bitstring(inst.n, rng))]


def _semo_update(pop: list[Individual], child: Individual) -> list[Individual]:
    v = child.value
    if any(dominates(m.value, v) for m in pop):
        return pop
    kept = [m for m in pop if not weakly_dominates(v, m.value)]
    pos = bisect.bisect_left([m.value[0] for m in kept], v[0])
    kept.insert(pos, child)
    return kept


def semo_step(pop: list[Individual], inst: ProblemInstance, rng: RngStream) -> list[Individual]:
    parent = pop[rng.randbelow(len(pop))]
    return _semo_update(pop, Individual.of(inst, one_bit_mutation(parent.genome, rng)))


def gsemo_step(pop: list[Individual], inst: ProblemInstance, rng: RngStream) -> list[Individual]:
    parent = pop[rng.randbelow(len(pop))]
    return _semo_update(pop, Individual.of(inst, standard_bitwise_mutation(parent.genome, rng)))


# -- SMS-EMOA -------------------------------------------------------------------

def smsemoa_init(inst: ProblemInstance, mu: int, rng: RngStream) -> list[Individual]:
    if mu < 1:
        raise ValueError("mu must be >= 1")
    return [Individual.of(inst, random_bitstring(inst.n, rng)) for _ in range(mu)]


def smsemoa_step(pop: list[Individual], inst: ProblemInstance, rng: RngStream,
                 ref=DEFAULT_REF) -> list[Individual]:
    parent = pop[rng.randbelow(len(pop))]
    child = Individual.of(inst, standard_bitwise_mutation(parent.genome, rng))
    merged = pop + [child]
    last = fast_nondominated_sort(merged).fronts[-1]
    last_vals = [merged[i].value for i in last]
    contrib = [hv_contribution(j, last_vals, ref) for j in range(len(last))]
    low = min(contrib)
    cands = [last[j] for j, c in enumerate(contrib) if c == low]
    drop = cands[0] if len(cands) == 1 else cands[rng.randbelow(len(cands))]
    return merged[:drop] + merged[drop + 1:]


# -- NSGA-II --------------------------------------------------------------------

@dataclass
class NsgaState:
    pop: list[Individual]
    rank: list[int]
    crowd: list[float]


def _rank_and_crowd(vals: list[ObjectivePair], upto: int | None = None):
    part = fast_nondominated_sort(vals)
    rank = part.rank_of(len(vals))
    crowd = [0.0] * len(vals)
    for front in part.fronts[:upto]:
        for i, d in zip(front, crowding_distance([vals[i] for i in front])):
            crowd[i] = d
    return part, rank, crowd


def nsga2_init(inst: ProblemInstance, N: int, rng: RngStream) -> NsgaState:
    if N < 1:
        raise ValueError("N must be >= 1")
    pop = [Individual.of(inst, random_bitstring(inst.n, rng)) for _ in range(N)]
    _, rank, crowd = _rank_and_crowd([m.value for m in pop])
    return NsgaState(pop, rank, crowd)


def crowded_better(rank: Sequence[int], crowd: Sequence[float], a: int, b: int) -> int:
    """1 if ``a`` wins the crowded comparison, -1 if ``b`` wins, 0 on a tie."""
    if rank[a] != rank[b]:
        return 1 if rank[a] < rank[b] else -1
    if crowd[a] != crowd[b]:
        return 1 if crowd[a] > crowd[b] else -1
    return 0


def tournament_pick(rank: Sequence[int], crowd: Sequence[float], rng: RngStream) -> int:
    """Binary tournament between two distinct uniformly drawn members."""
    size = len(rank)
    if size == 1:
        return 0
    a = rng.randbelow(size)
    b = rng.randbelow(size - 1)
    if b >= a:
        b += 1
    cmp = crowded_better(rank, crowd, a, b)
    if cmp == 0:
        return a if rng.randbelow(2) == 0 else b
    return a if cmp > 0 else b


def select_parent(state: NsgaState, j: int, selection: str, rng: RngStream) -> int:
    if selection == "fair":
        return j
    if selection == "random":
        return rng.randbelow(len(state.pop))
    if selection == "tournament":
        return tournament_pick(state.rank, state.crowd, rng)
    raise ValueError(f"unknown selection {selection!r}")


def nsga2_generation(state: NsgaState, inst: ProblemInstance, selection: str,
                     rng: RngStream) -> NsgaState:
    N = len(state.pop)
    offspring = []
    for j in range(N):
        parent = state.pop[select_parent(state, j, selection, rng)]
        offspring.append(Individual.of(inst, standard_bitwise_mutation(parent.genome, rng)))
    merged = state.pop + offspring
    vals = [m.value for m in merged]
    part = fast_nondominated_sort(vals)
    rank = part.rank_of(len(merged))
    crowd = [0.0] * len(merged)
    chosen: list[int] = []
    for front in part.fronts:
        for i, d in zip(front, crowding_distance([vals[i] for i in front])):
            crowd[i] = d
        need = N - len(chosen)
        if len(front) <= need:
            chosen.extend(front)
            if len(front) == need:
                break
            continue
        order = list(front)
        for t in range(len(order) - 1, 0, -1):
            s = rng.randbelow(t + 1)
            order[t], order[s] = order[s], order[t]
        order.sort(key=lambda i: -crowd[i])
        chosen.extend(order[:need])
        break
    chosen.sort()
    return NsgaState([merged[i] for i in chosen], [rank[i] for i in chosen],
                     [crowd[i] for i in chosen])


# -- MOEA/D ---------------------------------------------------------------------

@dataclass
class MoeadState:
    xs: list[Individual]
    z: ObjectivePair
    archive: list[Individual] = field(default_factory=list)
    T: int = 1


def moead_init(inst: ProblemInstance, rng: RngStream) -> MoeadState:
    xs = [Individual.of(inst, random_bitstring(inst.n, rng)) for _ in range(inst.k + 1)]
    z = ObjectivePair(max(x.value[0] for x in xs), max(x.value[1] for x in xs))
    return MoeadState(xs, z)


def tchebycheff_scaled(inst: ProblemInstance, i: int, v: ObjectivePair, z: ObjectivePair) -> int:
    """``max{k}`` times the Tchebycheff value of subproblem ``i`` (integer)."""
    k = inst.k
    if k == 0:
        return abs(v[1] - z[1])
    return max(i * abs(v[0] - z[0]), (k - i) * abs(v[1] - z[1]))


def _archive_update(archive: list[Individual], child: Individual) -> list[Individual]:
    v = child.value
    if any(dominates(a.value, v) or a.value == v for a in archive):
        return archive
    kept = [a for a in archive if not dominates(v, a.value)]
    pos = bisect.bisect_left([a.value[0] for a in kept], v[0])
    kept.insert(pos, child)
    return kept


def moead_generation(state: MoeadState, inst: ProblemInstance, rng: RngStream) -> MoeadState:
    xs = list(state.xs)
    z = state.z
    archive = state.archive
    for i in range(len(xs)):
        child = Individual.of(inst, one_bit_mutation(xs[i].genome, rng))
        if inst.k == 0:
            accept = child.value[0] >= xs[i].value[0]
        else:
            accept = tchebycheff_scaled(inst, i, child.value, z) <= tchebycheff_scaled(inst, i, xs[i].value, z)
        if accept:
            xs[i] = child
        z = ObjectivePair(max(z[0], child.value[0]), max(z[1], child.value[1]))
        archive = _archive_update(archive, child)
    return MoeadState(xs, z, archive, state.T)


# -- driving an engine to full coverage ------------------------------------

ALGORITHMS = ("semo", "gsemo", "nsga2", "smsemoa", "moead")


class SurvivalInvariantError(AssertionError):
    """A covered front point was lost where the theory says it must survive."""


@dataclass(frozen=True)
class EngineConfig:
    algorithm: str
    N: Optional[int] = None
    mu: Optional[int] = None
    selection: str = "random"
    ref: tuple = (-1, -1)

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.selection not in SELECTIONS:
            raise ValueError(f"unknown selection {self.selection!r}; choose from {SELECTIONS}")

    def population(self, inst: ProblemInstance) -> int:
        """Members evaluated per unit of the runtime law (N, mu, or max{k,1})."""
        if self.algorithm == "nsga2":
            return self.N if self.N is not None else 4 * (inst.k + 1)
        if self.algorithm == "smsemoa":
            return self.mu if self.mu is not None else inst.k + 1
        return max(inst.k, 1)

    def survival_gaps(self, inst: ProblemInstance) -> list[str]:
        """Unmet population-size conditions for the survival guarantee (empty if none)."""
        size = self.population(inst)
        if self.algorithm == "nsga2" and size < 4 * (inst.k + 1):
            return [f"N={size} < 4(k+1)={4 * (inst.k + 1)}"]
        if self.algorithm == "smsemoa" and size < inst.k + 1:
            return [f"mu={size} < k+1={inst.k + 1}"]
        return []


def default_budget(engine: EngineConfig, inst: ProblemInstance,
                   multiplier: float = 200) -> int:
    """``multiplier`` times population size times ``n ln n`` (log clamped at 1)."""
    return max(1, math.ceil(multiplier * engine.population(inst) * inst.n * max(1.0, math.log(inst.n))))


def run_to_coverage(engine: EngineConfig, inst: ProblemInstance, budget: Optional[int],
                    rng: RngStream, *, backend: Optional[str] = None):
    """Run ``engine`` until the front is fully covered or ``budget`` is spent.

    Front-point losses are counted live on every step. When the configuration
    meets the survival guarantee any loss raises :class:`SurvivalInvariantError`;
    otherwise the count is only recorded.
    """
    from ._backend import get as _get_backend
    from ._pykernels import SELECTION_CODES
    from .records import TrialRecord

    if budget is None:
        budget = default_budget(engine, inst)
    if budget < 1:
        raise ValueError("budget must be at least 1")
    kern = _get_backend(backend)
    n, k = inst.n, inst.k
    alg = engine.algorithm
    if alg in ("semo", "gsemo"):
        out = kern.semo_run(n, k, alg == "gsemo", budget, rng)
    elif alg == "smsemoa":
        out = kern.smsemoa_run(n, k, engine.population(inst), int(engine.ref[0]),
                               int(engine.ref[1]), budget, rng)
    elif alg == "nsga2":
        out = kern.nsga2_run(n, k, engine.population(inst), SELECTION_CODES[engine.selection],
                             budget, rng)
    else:
        out = kern.moead_run(n, k, budget, rng)
    evals, first, full, violations, _ = out
    if violations and not engine.survival_gaps(inst):
        raise SurvivalInvariantError(
            f"{alg} on (n={n}, k={k}) lost covered front points {violations} time(s)")
    return TrialRecord(
        algorithm=alg, n=n, k=k, trial=0, seed=rng.seed,
        evals_first_pareto=first if first >= 0 else None,
        evals_full_coverage=full if full >= 0 else None,
        censored=full < 0, evaluations=evals, violations=violations)


def tournament_win_frequency(rank: Sequence[int], crowd: Sequence[float], target: int,
                             generations: int, rng: RngStream, *,
                             backend: Optional[str] = None) -> float:
    """Share of generations in which ``target`` wins at least one of ``len(rank)`` tournaments."""
    from ._backend import get as _get_backend

    if generations < 1:
        raise ValueError("generations must be at least 1")
    if len(rank) != len(crowd) or len(rank) < 2:
        raise ValueError("need matching rank/crowd sequences of length >= 2")
    hits = _get_backend(backend).tournament_hits(
        [int(v) for v in rank], [float(v) for v in crowd], target, generations, rng)
    return hits / generations
