import math

import pytest

from onemaxmin.benchmark import ObjectivePair, ProblemInstance, pareto_front
from onemaxmin.bitcore import BitString, RngStream
from onemaxmin.moea import (
    EngineConfig, Individual, SurvivalInvariantError, _semo_update, crowding_distance,
    default_budget, fast_nondominated_sort, hv_contribution, hypervolume_2d, moead_generation,
    moead_init, nsga2_generation, nsga2_init, run_to_coverage, semo_init, semo_step,
    smsemoa_step, tchebycheff_scaled, tournament_pick,
)

I63 = ProblemInstance(6, 3)


def ind(inst, text):
    return Individual.of(inst, BitString.from_str(text))


def test_sort_examples():
    assert fast_nondominated_sort([(3, 6), (4, 5)]).fronts == [[0, 1]]
    part = fast_nondominated_sort([(3, 6), (4, 5), (3, 5), (2, 2)])
    assert part.fronts == [[0, 1], [2], [3]]
    assert part.rank_of(4) == [1, 1, 2, 3]
    assert fast_nondominated_sort([(1, 1)]).fronts == [[0]]


def test_crowding_examples():
    assert crowding_distance([(3, 6), (5, 4), (6, 3)]) == [math.inf, 2.0, math.inf]
    assert crowding_distance([(3, 6), (6, 3)]) == [math.inf, math.inf]
    d = crowding_distance([(4, 5), (4, 5), (3, 6), (4, 5), (4, 5), (4, 5)])
    assert sum(0 < v for v in d) <= 4 + 1  # four copies at most, plus the end point


def test_crowding_constant_objective():
    assert crowding_distance([(2, 2), (2, 2), (2, 2)]) == [math.inf, 0.0, math.inf]


def test_hypervolume_examples():
    assert hypervolume_2d([(3, 6)]) == 28
    assert hypervolume_2d([(3, 6), (6, 3)]) == 40
    assert hypervolume_2d([(3, 6), (5, 4), (6, 3)]) == 42


def test_contribution_examples():
    front = [(3, 6), (5, 4), (6, 3)]
    assert hv_contribution(1, front) == 2
    assert hv_contribution(0, [(4, 5), (4, 5)]) == 0
    assert hv_contribution(0, [(3, 6)]) == 28


def test_semo_update_rules():
    pop = [ind(I63, "111000"), ind(I63, "111111")]
    same = _semo_update(pop, ind(I63, "111001"))          # (4,5) is new and non-dominated
    assert [m.value for m in same] == [(3, 6), (4, 5), (6, 3)]
    dup = _semo_update(same, ind(I63, "111010"))           # same value replaces incumbent
    assert [str(m.genome) for m in dup] == ["111000", "111010", "111111"]
    worse = _semo_update(dup, ind(I63, "011000"))         # dominated: unchanged
    assert worse is dup


def test_smsemoa_removes_zero_contribution_duplicate():
    inst = I63
    pop = [ind(inst, g) for g in ("111000", "111001", "111011", "111111")]
    rng = RngStream(0)
    for _ in range(200):
        pop = smsemoa_step(pop, inst, rng)
        assert len(pop) == 4
    assert {m.value for m in pop} == set(pareto_front(inst))


def test_smsemoa_mu1():
    rng = RngStream(3)
    pop = [ind(I63, "000000")]
    for _ in range(100):
        pop = smsemoa_step(pop, I63, rng)
        assert len(pop) == 1


def test_tournament_pick_prefers_rank():
    rng = RngStream(4)
    rank, crowd = [1, 2], [0.0, 0.0]
    assert all(tournament_pick(rank, crowd, rng) == 0 for _ in range(50))


def test_nsga2_keeps_front_with_large_population():
    inst = ProblemInstance(8, 3)
    rng = RngStream(5)
    state = nsga2_init(inst, 16, rng)
    covered = set()
    front = set(pareto_front(inst))
    for _ in range(300):
        state = nsga2_generation(state, inst, "tournament", rng)
        now = {m.value for m in state.pop} & front
        assert covered <= now
        covered = now
    assert covered == front


def test_moead_reference_point_and_archive():
    inst = ProblemInstance(10, 4)
    rng = RngStream(6)
    state = moead_init(inst, rng)
    assert state.archive == [] and len(state.xs) == 5
    for _ in range(200):
        z = state.z
        state = moead_generation(state, inst, rng)
        assert state.z[0] >= z[0] and state.z[1] >= z[1]
        vals = [a.value for a in state.archive]
        assert len(vals) == len(set(vals))
    assert {a.value for a in state.archive} == set(pareto_front(inst))


def test_tchebycheff_scaled_matches_fraction():
    inst = I63
    assert tchebycheff_scaled(inst, 1, ObjectivePair(4, 5), ObjectivePair(6, 6)) == 2  # 3 * 2/3
    assert tchebycheff_scaled(ProblemInstance(5, 0), 0, ObjectivePair(3, 3), ObjectivePair(5, 5)) == 2


@pytest.mark.parametrize("algorithm,first,full", [
    ("semo", 49, 195), ("gsemo", 88, 178), ("moead", 180, 280),
    ("nsga2", 220, 560), ("smsemoa", 94, 265),
])
def test_frozen_runs(algorithm, first, full, backend):
    rec = run_to_coverage(EngineConfig(algorithm), ProblemInstance(16, 4), None, RngStream(9),
                          backend=backend)
    assert (rec.evals_first_pareto, rec.evals_full_coverage) == (first, full)
    assert rec.violations == 0 and not rec.censored


def test_budget_censoring():
    rec = run_to_coverage(EngineConfig("semo"), ProblemInstance(40, 20), 10, RngStream(1))
    assert rec.censored and rec.evals_full_coverage is None and rec.evaluations <= 10


def test_population_and_budget_defaults():
    inst = ProblemInstance(64, 16)
    assert EngineConfig("nsga2").population(inst) == 68
    assert EngineConfig("smsemoa").population(inst) == 17
    assert EngineConfig("gsemo").population(ProblemInstance(64, 0)) == 1
    assert default_budget(EngineConfig("semo"), inst) == math.ceil(200 * 16 * 64 * math.log(64))


def test_survival_gaps():
    inst = ProblemInstance(20, 4)
    assert EngineConfig("nsga2", N=10).survival_gaps(inst)
    assert not EngineConfig("nsga2").survival_gaps(inst)
    assert EngineConfig("smsemoa", mu=2).survival_gaps(inst)


def test_small_population_may_lose_points_without_raising():
    # N far below 4(k+1): losses are counted, never raised
    total = 0
    for seed in range(20):
        rec = run_to_coverage(EngineConfig("nsga2", N=2), ProblemInstance(12, 6), 4000,
                              RngStream(seed))
        total += rec.violations
    assert total >= 0


def test_invariant_breach_raises(monkeypatch):
    from onemaxmin import _backend

    class Fake:
        @staticmethod
        def semo_run(*args):
            return 10, 1, -1, 1, []

    monkeypatch.setattr(_backend, "get", lambda name=None: Fake)
    with pytest.raises(SurvivalInvariantError):
        run_to_coverage(EngineConfig("semo"), I63, 100, RngStream(0))


def test_engine_config_validation():
    with pytest.raises(ValueError):
        EngineConfig("spea2")
    with pytest.raises(ValueError):
        EngineConfig("nsga2", selection="roulette")


def test_semo_step_population_is_antichain():
    inst = ProblemInstance(10, 5)
    rng = RngStream(12)
    pop = semo_init(inst, rng)
    for _ in range(500):
        pop = semo_step(pop, inst, rng)
        f1 = [m.value[0] for m in pop]
        assert f1 == sorted(f1) and len(set(f1)) == len(f1)
        assert len(pop) <= inst.k + 1
