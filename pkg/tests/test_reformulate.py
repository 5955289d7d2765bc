from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from onemaxmin import oracles
from onemaxmin.benchmark import ProblemInstance, evaluate
from onemaxmin.bitcore import BitString
from onemaxmin.reformulate import (
    NONPARAMETER, PenaltySpec, ScalarizationSpec, SubproblemSpec, constrained_optima,
    coverage_schedule, exact, exterior_optima, nonparameter_optima, penalty_thresholds,
    penalty_value, scalarization_optima, scalarize, subproblem_optima, subproblem_value,
)

I63 = ProblemInstance(6, 3)
I84 = ProblemInstance(8, 4)
ONES8 = BitString.ones(8)


def bs(text):
    return BitString.from_str(text)


def test_exact_conversion_uses_decimal_repr():
    assert exact(0.3) == Fraction(3, 10)
    assert exact(5.25) == Fraction(21, 4)
    with pytest.raises(ValueError):
        exact(float("nan"))


def test_scalarize_examples():
    assert scalarize(ScalarizationSpec(I63, 0.5), bs("111010")) == Fraction(9, 2)
    assert scalarize(ScalarizationSpec(I63, 1), bs("111111")) == 6
    assert scalarize(ScalarizationSpec(I63, 0.3), bs("111000")) == Fraction(51, 10)


def test_scalarization_optima_examples():
    assert scalarization_optima(ScalarizationSpec(I63, 0.9)).expand() == {bs("111111")}
    assert scalarization_optima(ScalarizationSpec(I63, 0.1)).expand() == {bs("111000")}
    half = scalarization_optima(ScalarizationSpec(I63, 0.5)).expand()
    assert len(half) == 8 and all(str(x).startswith("111") for x in half)


def test_constrained_examples():
    assert constrained_optima(I84, 3).expand() == {ONES8}
    assert constrained_optima(I84, 9).infeasible
    assert constrained_optima(I84, 5.25).values() == {(6, 6)}


def test_penalty_values():
    assert penalty_value(PenaltySpec(I84, 5.25, 3), ONES8) == Fraction(17, 4)
    feasible = bs("11110011")
    f1, f2 = evaluate(I84, feasible)
    assert f2 >= 5.25 and penalty_value(PenaltySpec(I84, 5.25, 3), feasible) == f1
    nonpar = penalty_value(PenaltySpec(I84, 5.25, mode=NONPARAMETER), ONES8)
    assert nonpar == Fraction(27, 4) == penalty_value(PenaltySpec(I84, 5.25, 1), ONES8)


def test_thresholds_examples():
    th = penalty_thresholds(I84, 5.25)
    assert (th.r1, th.r2) == (Fraction(8, 5), 4)
    th = penalty_thresholds(I84, 4.5)
    assert th.r1 == th.r2 == 2
    th = penalty_thresholds(I84, 5)
    assert th.r1 == th.r2 == 1
    for eps in (4, 8, 3.5):
        with pytest.raises(ValueError):
            penalty_thresholds(I84, eps)


@pytest.mark.parametrize("r,label,values", [
    (5, "r>r2", {(6, 6)}),
    (0.5, "eps>n-k,r<1", {(8, 4)}),
    (2, "r1<r<r2", {(7, 5)}),
])
def test_exterior_examples(r, label, values):
    desc = exterior_optima(PenaltySpec(I84, 5.25, r))
    assert desc.label == label and desc.values() == values


def test_nonparameter_examples():
    assert nonparameter_optima(I84, 9).levels == frozenset(range(4, 9))
    assert nonparameter_optima(I84, 3).expand() == {ONES8}
    got = nonparameter_optima(I84, 5.25)
    assert got.levels == {4, 5}
    assert got.values() != constrained_optima(I84, 5.25).values()


def test_coverage_schedule_examples():
    specs = coverage_schedule(I63)
    assert [s.eps for s in specs] == [3, Fraction(7, 2), Fraction(9, 2), Fraction(11, 2)]
    assert all(s.r == 3 for s in specs)
    assert [sorted(exterior_optima(s).levels) for s in specs] == [[3], [4], [5], [6]]
    only = coverage_schedule(ProblemInstance(5, 0))
    assert len(only) == 1 and exterior_optima(only[0]).expand() == {BitString.ones(5)}


def test_subproblem_values():
    assert subproblem_value(SubproblemSpec(I63, 1), BitString.ones(6)) == 2
    assert subproblem_value(SubproblemSpec(I63, 1), bs("111100")) == Fraction(2, 3)
    # the last weight ignores f2
    x = bs("101010")
    assert subproblem_value(SubproblemSpec(I63, 3), x) == 6 - evaluate(I63, x)[0]


def test_subproblem_optima_examples():
    assert subproblem_optima(SubproblemSpec(I63, 1)).values() == {(4, 5)}
    assert subproblem_optima(SubproblemSpec(I63, 2)).values() == set(oracles.tchebycheff(I63, 2).values) == {(5, 4)}
    assert subproblem_optima(SubproblemSpec(I63, 0)).expand() == {bs("111000")}
    assert subproblem_optima(SubproblemSpec(I63, 3)).expand() == {BitString.ones(6)}
    with pytest.raises(ValueError):
        subproblem_optima(SubproblemSpec(I63, 1, (5, 6)))
    with pytest.raises(ValueError):
        SubproblemSpec(I63, 4)


def test_end_subproblems_match_brute_force():
    for k in range(1, 7):
        inst = ProblemInstance(7, k)
        for i in (0, k):
            closed = subproblem_optima(SubproblemSpec(inst, i)).values()
            assert closed == set(oracles.tchebycheff(inst, i).values)


fractions = st.fractions(min_value=-2, max_value=12, max_denominator=8)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))),
       fractions, st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8))
def test_exterior_matches_brute_force(nk, eps, r):
    inst = ProblemInstance(*nk)
    assert exterior_optima(PenaltySpec(inst, eps, r)).values() == \
        set(oracles.exterior_penalty(inst, eps, r).values)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n))),
       st.fractions(min_value=0, max_value=1, max_denominator=20))
def test_scalarization_matches_brute_force(nk, w):
    inst = ProblemInstance(*nk)
    assert scalarization_optima(ScalarizationSpec(inst, w)).values() == \
        set(oracles.scalarization(inst, w).values)
