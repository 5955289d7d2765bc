"""Single-solution elitist search: RLS, the (1+1) EA and the epsilon-constraint pipeline."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from ._backend import get as _get_backend
from .benchmark import CoverageReport, ObjectivePair, ProblemInstance, coverage, evaluate
from .bitcore import BitString, RngStream
from .reformulate import (
    EXTERIOR, NONPARAMETER, Number, OptimalSetDescriptor, PenaltySpec, ScalarizationSpec,
    coverage_schedule, exterior_optima, penalty_value, scalarization_optima, scalarize,
)

DEFAULT_BUDGET_MULTIPLIER = 200
_INT_LIMIT = 1 << 62


class SurvivalRuleViolation(AssertionError):
    """An accepted move broke the feasible/infeasible parent survival rules."""


def log_factor(n: int) -> float:
    """``ln n`` clamped below at 1 so tiny instances still get a usable budget."""
    return max(1.0, math.log(n))


def default_scalar_budget(n: int, multiplier: float = DEFAULT_BUDGET_MULTIPLIER) -> int:
    return max(1, math.ceil(multiplier * n * log_factor(n)))


@dataclass
class ScalarProblem:
    """A weighted-sum or penalty objective with an evaluation counter."""

    spec: Union[ScalarizationSpec, PenaltySpec]
    evaluations: int = 0

    @classmethod
    def weighted(cls, inst: ProblemInstance, w: Number) -> "ScalarProblem":
        return cls(ScalarizationSpec(inst, w))

    @classmethod
    def penalty(cls, inst: ProblemInstance, eps: Number, r: Number = 1,
                mode: str = EXTERIOR) -> "ScalarProblem":
        return cls(PenaltySpec(inst, eps, r, mode))

    @property
    def inst(self) -> ProblemInstance:
        return self.spec.inst

    def __call__(self, x: BitString) -> Fraction:
        self.evaluations += 1
        if isinstance(self.spec, ScalarizationSpec):
            return scalarize(self.spec, x)
        return penalty_value(self.spec, x)

    def optima(self) -> OptimalSetDescriptor:
        if isinstance(self.spec, ScalarizationSpec):
            return scalarization_optima(self.spec)
        return exterior_optima(self.spec)

    def survival_rules_apply(self) -> bool:
        """Whether the single-flip survival rules are guaranteed for this objective.

        They need a penalty steep enough that leaving the feasible region
        never pays: ``r > 1`` and ``r > 1 / (eps + 1 - ceil(eps))``.
        """
        if not isinstance(self.spec, PenaltySpec):
            return False
        eps, r = self.spec.eps, self.spec.r
        return r > 1 and r * (eps + 1 - math.ceil(eps)) > 1

    def _kernel_args(self):
        n = self.inst.n
        if isinstance(self.spec, ScalarizationSpec):
            w = self.spec.w
            args = (0, w.numerator, w.denominator, 0, 1, 0)
            bound = n * (abs(w.numerator) + abs(w.denominator - w.numerator))
        else:
            eps, r = self.spec.eps, self.spec.r
            args = (1, eps.numerator, eps.denominator, r.numerator, r.denominator, math.ceil(eps))
            q, v = eps.denominator, r.denominator
            bound = n * q * v + r.numerator * (n * q + abs(eps.numerator))
        return args, bound < _INT_LIMIT


@dataclass
class SolverRun:
    final: BitString
    value: ObjectivePair
    evaluations: int
    hit_optimum: bool
    violations: int = 0
    trajectory: Optional[list] = None


def _target_mask(inst: ProblemInstance, target: Optional[OptimalSetDescriptor]) -> bytes:
    mask = bytearray(inst.n + 1)
    if target is not None:
        if target.inst != inst:
            raise ValueError("target descriptor belongs to a different instance")
        for i in target.levels:
            mask[i] = 1
    return bytes(mask)


def _search(problem: ScalarProblem, target, budget: int, rng: RngStream, bitwise: bool,
            check: bool, backend: Optional[str]) -> SolverRun:
    if budget < 1:
        raise ValueError("budget must be at least 1")
    inst = problem.inst
    (kind, c1, c2, c3, c4, ceil_eps), fits = problem._kernel_args()
    live_check = check and not bitwise and problem.survival_rules_apply()
    kern = _get_backend(backend)
    if not fits:
        kern = _get_backend("python")  # arbitrary-precision fallback
    genome, f1, f2, evals, hit, violations = kern.scalar_run(
        inst.n, inst.k, kind, c1, c2, c3, c4, ceil_eps, live_check, bitwise,
        _target_mask(inst, target), budget, rng)
    problem.evaluations += evals
    if violations:
        raise SurvivalRuleViolation(
            f"{violations} accepted move(s) broke the survival rules on {problem.spec}")
    x = BitString(genome)
    return SolverRun(x, ObjectivePair(f1, f2), evals, bool(hit), violations)


def rls(problem: ScalarProblem, target: Optional[OptimalSetDescriptor], budget: int,
        rng: RngStream, *, check: bool = True, backend: Optional[str] = None) -> SolverRun:
    """Randomized local search: one-bit moves, ties accepted.

    The run stops as soon as the current value lies in ``target`` (looked up
    symbolically, costing no evaluation) or after ``budget`` evaluations,
    counting the initial one. With ``check`` the survival rules are asserted
    on every accepted move whenever they are guaranteed to hold.
    """
    return _search(problem, target, budget, rng, False, check, backend)


def one_plus_one_ea(problem: ScalarProblem, target: Optional[OptimalSetDescriptor], budget: int,
                    rng: RngStream, *, backend: Optional[str] = None) -> SolverRun:
    """(1+1) EA: standard bit-wise mutation, ties accepted."""
    return _search(problem, target, budget, rng, True, False, backend)


@dataclass
class PipelineResult:
    inst: ProblemInstance
    specs: list
    targets: list
    runs: list = field(default_factory=list)

    @property
    def total_evaluations(self) -> int:
        return sum(run.evaluations for run in self.runs)

    @property
    def values(self) -> list[ObjectivePair]:
        return [run.value for run in self.runs]

    @property
    def coverage(self) -> CoverageReport:
        return coverage(self.inst, self.values)

    @property
    def all_hit(self) -> bool:
        return all(run.hit_optimum for run in self.runs)

    @property
    def evals_first_pareto(self) -> Optional[int]:
        """Cumulative evaluations when a run first ended on a Pareto-optimal value."""
        total = 0
        top = 2 * self.inst.n - self.inst.k
        for run in self.runs:
            total += run.evaluations
            if sum(run.value) == top:
                return total
        return None

    @property
    def evals_full_coverage(self) -> Optional[int]:
        return self.total_evaluations if self.coverage.full else None


def epsilon_constraint_pipeline(inst: ProblemInstance, budget_per_run: Optional[int],
                                rng: RngStream, *, r: Number = 3, algorithm: str = "rls",
                                backend: Optional[str] = None) -> PipelineResult:
    """One exterior-penalty run per front point, consuming ``rng`` in schedule order.

    A run that exhausts its budget leaves the front partially covered; that
    is reported through :attr:`PipelineResult.coverage`, not raised.
    """
    if algorithm not in ("rls", "ea"):
        raise ValueError(f"unknown pipeline algorithm {algorithm!r}")
    budget = budget_per_run if budget_per_run is not None else default_scalar_budget(inst.n)
    specs = coverage_schedule(inst, r)
    targets = [exterior_optima(s) for s in specs]
    result = PipelineResult(inst, specs, targets)
    for spec, target in zip(specs, targets):
        problem = ScalarProblem(spec)
        if algorithm == "rls":
            run = rls(problem, target, budget, rng, backend=backend)
        else:
            run = one_plus_one_ea(problem, target, budget, rng, backend=backend)
        result.runs.append(run)
    return result


def nonparameter_problem(inst: ProblemInstance, eps: Number) -> ScalarProblem:
    return ScalarProblem(PenaltySpec(inst, eps, 1, NONPARAMETER))
