"""Exhaustive cross-checks of the closed-form optima against brute force."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Optional

import numpy as np

from .. import oracles
from ..benchmark import (
    ProblemInstance, all_bitstrings, all_values, longest_antichain, nondominated, pareto_front,
    realized_values,
)
from ..reformulate import (
    EXTERIOR, EXTERIOR_CASES, PenaltySpec, ScalarizationSpec, SubproblemSpec,
    constrained_optima, coverage_schedule, exterior_optima, nonparameter_optima,
    penalty_thresholds, scalarization_optima, subproblem_optima,
)

SCOPES = ("benchmark", "scalarization", "penalty", "subproblems", "all")
N_MAX_LIMIT = 16
WEIGHT_GRID = tuple(Fraction(i, 100) for i in range(101))


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""
    counterexample: Optional[str] = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} {self.name} ({self.cases} cases)"
        if self.detail:
            text += f" - {self.detail}"
        if self.counterexample:
            text += f"; first counterexample: {self.counterexample}"
        return text


@dataclass
class VerificationReport:
    scope: str
    n_max: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]

    def to_dict(self) -> dict:
        return {
            "scope": self.scope, "n_max": self.n_max, "passed": self.passed,
            "checks": [vars(c) for c in self.checks],
        }


class _Check:
    """Accumulates cases and keeps the first failure."""

    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.bad: Optional[str] = None
        self.detail = ""

    def expect(self, ok: bool, describe: Callable[[], str]) -> None:
        self.cases += 1
        if not ok and self.bad is None:
            self.bad = describe()

    def result(self) -> CheckResult:
        return CheckResult(self.name, self.bad is None, self.cases, self.detail, self.bad)


def _instances(n_max: int, n_min: int = 1, k_min: int = 0) -> Iterator[ProblemInstance]:
    for n in range(n_min, n_max + 1):
        for k in range(k_min, n + 1):
            yield ProblemInstance(n, k)


def _fmt(v) -> str:
    return str(v)


# -- benchmark ------------------------------------------------------------------

def check_benchmark(n_max: int) -> list[CheckResult]:
    front = _Check("front formula equals exhaustive non-dominated values")
    antichain = _Check("largest antichain of realized values is k+1")
    optimal = _Check("Pareto optimality iff prefix is all ones")
    for inst in _instances(n_max):
        vals = realized_values(inst)
        nd = nondominated(vals)
        front.expect(nd == pareto_front(inst), lambda: f"n={inst.n}, k={inst.k}: {nd}")
        size = longest_antichain(vals)
        antichain.expect(size == inst.k + 1, lambda: f"n={inst.n}, k={inst.k}: {size}")
        x = all_bitstrings(inst.n)
        f1, f2 = all_values(inst)
        prefix_ones = x[:, :inst.prefix].all(axis=1)
        on_front = f1 + f2 == 2 * inst.n - inst.k
        optimal.expect(bool(np.array_equal(prefix_ones, on_front)),
                       lambda: f"n={inst.n}, k={inst.k}")
    return [front.result(), antichain.result(), optimal.result()]


# -- scalarization --------------------------------------------------------------

def weighted_front_points(inst: ProblemInstance, weights=WEIGHT_GRID) -> tuple[int, set, int]:
    """Front points an optimizer returning one solution per weight can reach.

    Weights with a unique optimal value contribute that value; a weight with
    tied optimal values yields one of them, so it adds at most one point.
    Returns ``(bound, unique_points, tied_weights)``.
    """
    front = set(pareto_front(inst))
    unique: set = set()
    tied = 0
    for w in weights:
        vals = oracles.scalarization(inst, w).values
        if len(vals) == 1:
            unique |= vals & front
        else:
            tied += 1
    return len(unique) + tied, unique, tied


def check_scalarization(n_max: int) -> list[CheckResult]:
    optima = _Check("weighted-sum optima match brute force on a 101-point weight grid")
    bound = _Check("a weighted-sum sweep reaches at most three front points (k > 2)")
    for inst in _instances(n_max):
        for w in WEIGHT_GRID:
            got = scalarization_optima(ScalarizationSpec(inst, w)).values()
            want = set(oracles.scalarization(inst, w).values)
            optima.expect(got == want, lambda: f"n={inst.n}, k={inst.k}, w={w}: {got} vs {want}")
        if inst.k > 2:
            total, _, _ = weighted_front_points(inst)
            bound.expect(total <= 3, lambda: f"n={inst.n}, k={inst.k}: {total} points")
    return [optima.result(), bound.result()]


# -- penalties ------------------------------------------------------------------

def eps_grid(inst: ProblemInstance) -> list[Fraction]:
    """Epsilons below n-k, inside every unit interval of (n-k, n), at integers, and beyond n."""
    n, a = inst.n, inst.n - inst.k
    grid = {Fraction(a) - Fraction(3, 2), Fraction(a) - Fraction(1, 2), Fraction(a)}
    for j in range(1, inst.k + 1):
        base = Fraction(a + j)
        grid |= {base - Fraction(3, 4), base - Fraction(1, 2), base - Fraction(1, 4), base}
    grid |= {Fraction(n), Fraction(2 * n + 1, 2), Fraction(n + 1)}
    return sorted(grid)


def r_grid(inst: ProblemInstance, eps: Fraction) -> list[Fraction]:
    """Coefficients on and around every regime boundary for this epsilon."""
    if inst.n - inst.k < eps < inst.n:
        th = penalty_thresholds(inst, eps)
        cand = {Fraction(1, 2), Fraction(1), th.r1 - Fraction(1, 8), th.r1,
                (th.r1 + th.r2) / 2, th.r2, th.r2 + 1}
    else:
        cand = {Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3)}
    return sorted(r for r in cand if r > 0)


def check_penalty(n_max: int) -> list[CheckResult]:
    thresholds = _Check("penalty thresholds: 1 <= r1 <= r2, r1 = 1 iff eps integral")
    exterior_check = _Check("exterior-penalty optima match brute force across all regimes")
    nonpar = _Check("nonparameter-penalty optima match brute force")
    identity = _Check("nonparameter penalty equals the exterior penalty with r = 1")
    constrained = _Check("constrained optima match brute force")
    differ = _Check("nonparameter and constrained optima differ exactly where predicted")
    improper = _Check("any r < 1 reaches at most two front points (k >= 2)")
    schedule = _Check("coverage schedule targets one distinct front point per run")
    labels: set = set()
    for inst in _instances(n_max):
        n, k, a = inst.n, inst.k, inst.n - inst.k
        f1, f2 = all_values(inst)
        reached_low_r: set = set()
        front = set(pareto_front(inst))
        for eps in eps_grid(inst):
            if a < eps < n:
                th = penalty_thresholds(inst, eps)
                integral = eps.denominator == 1
                ok = (1 <= th.r1 <= th.r2 and (th.r1 == 1) == integral
                      and (th.r1 == th.r2) == (integral or math.ceil(eps) == a + 1))
                thresholds.expect(ok, lambda: f"n={n}, k={k}, eps={eps}: r1={th.r1}, r2={th.r2}")
            for r in r_grid(inst, eps):
                desc = exterior_optima(PenaltySpec(inst, eps, r, EXTERIOR))
                labels.add(desc.label)
                want = oracles.exterior_penalty(inst, eps, r).values
                exterior_check.expect(desc.values() == set(want),
                              lambda: f"n={n}, k={k}, eps={_fmt(eps)}, r={_fmt(r)} [{desc.label}]: "
                                      f"{sorted(desc.values())} vs {sorted(want)}")
                if r < 1:
                    reached_low_r |= set(want) & front
            npo = nonparameter_optima(inst, eps)
            brute_np = oracles.nonparameter_penalty(inst, eps).values
            nonpar.expect(npo.values() == set(brute_np),
                          lambda: f"n={n}, k={k}, eps={eps}: {sorted(npo.values())} vs {sorted(brute_np)}")
            if n <= 10:
                q = eps.denominator
                piecewise = np.where(f2 * q >= eps.numerator, f1 * q, (f1 + f2) * q - eps.numerator)
                exterior = f1 * q + np.minimum(0, f2 * q - eps.numerator)
                identity.expect(bool(np.array_equal(piecewise, exterior)),
                                lambda: f"n={n}, k={k}, eps={eps}")
            con = constrained_optima(inst, eps)
            brute_con = oracles.constrained(inst, eps).values
            constrained.expect(con.values() == set(brute_con),
                               lambda: f"n={n}, k={k}, eps={eps}: {sorted(con.values())} vs {sorted(brute_con)}")
            # brute-force disagreement must match the analytic tables, and below
            # eps = n it must happen exactly on (n-k, n)
            brute_differs = set(brute_np) != set(brute_con)
            table_differs = npo.values() != con.values()
            predicted = a < eps < n if eps < n else table_differs
            differ.expect(brute_differs == predicted and table_differs == brute_differs,
                          lambda: f"n={n}, k={k}, eps={eps}: brute differs={brute_differs}")
        if k >= 2:
            improper.expect(len(reached_low_r) <= 2,
                            lambda: f"n={n}, k={k}: {sorted(reached_low_r)}")
        seen = []
        for i, spec in enumerate(coverage_schedule(inst)):
            want = oracles.exterior_penalty(inst, spec.eps, spec.r).values
            seen.append(set(want))
            schedule.expect(set(want) == {inst.level_value(a + i)}
                            and exterior_optima(spec).levels == frozenset({a + i}),
                            lambda: f"n={n}, k={k}, eps={spec.eps}: {sorted(want)}")
        schedule.expect(set().union(*seen) == front, lambda: f"n={n}, k={k}: union misses points")
    missing = [lab for lab in EXTERIOR_CASES if lab not in labels]
    exterior_check.detail = f"{len(EXTERIOR_CASES) - len(missing)}/{len(EXTERIOR_CASES)} regimes exercised"
    if missing and n_max >= 4:
        exterior_check.expect(False, lambda: f"regimes never exercised: {missing}")
    return [thresholds.result(), exterior_check.result(), nonpar.result(), identity.result(),
            constrained.result(), differ.result(), improper.result(), schedule.result()]


# -- Tchebycheff subproblems ----------------------------------------------------

def check_subproblems(n_max: int) -> list[CheckResult]:
    interior = _Check("interior Tchebycheff subproblem minimizers match brute force")
    ends = _Check("end subproblems are minimized by 1^(n-k)0^k and 1^n")
    for inst in _instances(n_max, k_min=1):
        n, k = inst.n, inst.k
        for i in range(0, k + 1):
            brute = oracles.tchebycheff(inst, i)
            got = subproblem_optima(SubproblemSpec(inst, i))
            check = interior if 0 < i < k else ends
            ok = got.values() == set(brute.values)
            if 0 < i < k:
                ok = ok and brute.score == Fraction(i * (k - i), k)
            check.expect(ok, lambda: f"n={n}, k={k}, i={i}: {sorted(got.values())} vs "
                                     f"{sorted(brute.values)}")
    return [interior.result(), ends.result()]


_RUNNERS = {
    "benchmark": check_benchmark,
    "scalarization": check_scalarization,
    "penalty": check_penalty,
    "subproblems": check_subproblems,
}


def verify(scope: str = "all", n_max: int = 10) -> VerificationReport:
    if scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; choose from {', '.join(SCOPES)}")
    if n_max > N_MAX_LIMIT:
        raise ValueError(f"n_max={n_max} would enumerate 2**{n_max} bitstrings per case; "
                         f"the limit is {N_MAX_LIMIT}")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    report = VerificationReport(scope, n_max)
    for name, fn in _RUNNERS.items():
        if scope in (name, "all"):
            report.checks.extend(fn(n_max))
    return report
