from fractions import Fraction

import pytest

from onemaxmin.benchmark import ProblemInstance
from onemaxmin.bitcore import RngStream
from onemaxmin.single import (
    ScalarProblem, SurvivalRuleViolation, default_scalar_budget, epsilon_constraint_pipeline,
    nonparameter_problem, one_plus_one_ea, rls,
)

I84 = ProblemInstance(8, 4)


def test_problem_counts_evaluations():
    from onemaxmin.bitcore import BitString
    p = ScalarProblem.penalty(I84, 5.25, 3)
    assert p(BitString.ones(8)) == Fraction(17, 4)
    p(BitString.zeros(8))
    assert p.evaluations == 2


def test_rls_reaches_target(backend):
    p = ScalarProblem.penalty(I84, 5.25, 5)
    run = rls(p, p.optima(), 10_000, RngStream(1), backend=backend)
    assert run.hit_optimum and run.value == (6, 6)
    assert run.evaluations == p.evaluations


def test_rls_budget_exhaustion_is_not_an_error():
    inst = ProblemInstance(40, 20)
    p = ScalarProblem.penalty(inst, 30.5, 3)
    run = rls(p, p.optima(), 5, RngStream(1))
    assert not run.hit_optimum and run.evaluations == 5


def test_ea_on_weighted_sum(backend):
    p = ScalarProblem.weighted(ProblemInstance(20, 5), Fraction(9, 10))
    run = one_plus_one_ea(p, p.optima(), 50_000, RngStream(3), backend=backend)
    assert run.hit_optimum and run.value == (20, 15)


def test_survival_rules_only_for_steep_penalties():
    assert ScalarProblem.penalty(I84, 5.5, 3).survival_rules_apply()
    assert not ScalarProblem.penalty(I84, 5.5, 2).survival_rules_apply()   # r = r2
    assert not ScalarProblem.penalty(I84, 5.25, 1).survival_rules_apply()
    assert not ScalarProblem.weighted(I84, 0.5).survival_rules_apply()


def test_survival_rule_violation_is_raised(monkeypatch):
    # a kernel reporting a broken rule must surface as an exception
    from onemaxmin import single

    class Fake:
        @staticmethod
        def scalar_run(*args):
            return b"\x01" * 8, 8, 4, 3, False, 1

    monkeypatch.setattr(single, "_get_backend", lambda name=None: Fake)
    p = ScalarProblem.penalty(I84, 5.5, 3)
    with pytest.raises(SurvivalRuleViolation):
        rls(p, p.optima(), 10, RngStream(0))


def test_large_coefficients_use_exact_fallback():
    p = ScalarProblem.penalty(I84, Fraction(10 ** 20 + 1, 10 ** 19), 10 ** 30)
    _, fits = p._kernel_args()
    assert not fits
    run = rls(p, p.optima(), 20_000, RngStream(4))
    assert run.hit_optimum


def test_pipeline_frozen_counts():
    inst = ProblemInstance(16, 4)
    res = epsilon_constraint_pipeline(inst, None, RngStream(9))
    assert [r.evaluations for r in res.runs] == [45, 19, 36, 38, 56]
    assert res.coverage.full and res.all_hit
    assert res.evals_full_coverage == res.total_evaluations == 194
    assert res.evals_first_pareto == 45
    ea = epsilon_constraint_pipeline(inst, None, RngStream(9), algorithm="ea")
    assert [r.evaluations for r in ea.runs] == [149, 61, 26, 88, 152]


def test_pipeline_partial_coverage_is_reported():
    res = epsilon_constraint_pipeline(ProblemInstance(64, 32), 3, RngStream(2))
    assert not res.coverage.full
    assert res.evals_full_coverage is None


def test_pipeline_rejects_unknown_algorithm():
    with pytest.raises(ValueError):
        epsilon_constraint_pipeline(I84, None, RngStream(0), algorithm="sa")


def test_nonparameter_problem_targets():
    p = nonparameter_problem(I84, 5.25)
    assert p.optima().levels == {4, 5}
    run = rls(p, p.optima(), 10_000, RngStream(8))
    assert run.hit_optimum and run.value in {(8, 4), (7, 5)}


def test_default_budget_guard_for_tiny_n():
    assert default_scalar_budget(1) == 200
    assert default_scalar_budget(2) == 400
