"""Single-objective reformulations of OneMaxMin_k and their exact optimal sets.

Three families are covered:

* weighted sums ``w f1 + (1 - w) f2``;
* the epsilon-constraint problem ``max f1 s.t. f2 >= eps`` together with its
  exterior penalty ``f1 + r min(0, f2 - eps)`` and the nonparameter penalty
  (the exterior one with ``r = 1``);
* the Tchebycheff subproblems used by MOEA/D with weights ``i/k``.

Optimal sets are returned symbolically as unions of level sets
``D_i = {x : f(x) = (2n - k - i, i)}`` for ``i`` in ``[n - k, n]``; every
``D_i`` consists of Pareto optima. All parameters are held as
:class:`fractions.Fraction`, so every comparison in the case analysis is exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .benchmark import ObjectivePair, ProblemInstance, evaluate
from .bitcore import BitString

Number = Union[int, float, str, Fraction]

EXTERIOR = "exterior"
NONPARAMETER = "nonparameter"


def exact(value: Number) -> Fraction:
    """Exact rational for a user-supplied number.

    Floats go through their shortest repr, so ``0.3`` becomes ``3/10``; dyadic
    floats such as ``5.25`` convert to themselves either way.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"parameter must be finite, got {value}")
        return Fraction(repr(value))
    return Fraction(value)


# -- optimal-set descriptors --------------------------------------------------

@dataclass(frozen=True)
class OptimalSetDescriptor:
    """Union of level sets ``D_i``; an empty union means infeasible."""

    inst: ProblemInstance
    levels: frozenset
    label: str = ""

    def __post_init__(self):
        lo, hi = self.inst.n - self.inst.k, self.inst.n
        bad = [i for i in self.levels if not lo <= i <= hi]
        if bad:
            raise ValueError(f"levels {sorted(bad)} outside [{lo}, {hi}]")

    @property
    def infeasible(self) -> bool:
        return not self.levels

    def values(self) -> set[ObjectivePair]:
        return {self.inst.level_value(i) for i in self.levels}

    def contains_value(self, v: ObjectivePair) -> bool:
        inst = self.inst
        return v[0] + v[1] == 2 * inst.n - inst.k and v[1] in self.levels

    def contains(self, x: BitString) -> bool:
        return self.contains_value(evaluate(self.inst, x))

    def expand(self) -> set[BitString]:
        """Explicit solution set; only for small ``n``."""
        n, k = self.inst.n, self.inst.k
        if n > 20:
            raise ValueError("expansion is limited to n <= 20")
        head = b"\x01" * (n - k)
        out = set()
        for i in self.levels:
            for ones in itertools.combinations(range(k), n - i):
                tail = bytearray(k)
                for j in ones:
                    tail[j] = 1
                out.add(BitString(head + bytes(tail)))
        return out

    def __str__(self) -> str:
        if self.infeasible:
            return "infeasible"
        parts = ", ".join(f"D_{i}={tuple(self.inst.level_value(i))}" for i in sorted(self.levels))
        return "{" + parts + "}"


def _levels(inst: ProblemInstance, idx: Iterable[int], label: str) -> OptimalSetDescriptor:
    return OptimalSetDescriptor(inst, frozenset(idx), label)


# -- weighted sum ---------------------------------------------------------------

@dataclass(frozen=True)
class ScalarizationSpec:
    inst: ProblemInstance
    w: Fraction

    def __post_init__(self):
        object.__setattr__(self, "w", exact(self.w))


def scalarize(spec: ScalarizationSpec, x: BitString) -> Fraction:
    f1, f2 = evaluate(spec.inst, x)
    return spec.w * f1 + (1 - spec.w) * f2


def scalarization_optima(spec: ScalarizationSpec) -> OptimalSetDescriptor:
    # prefix bits carry weight 1 for every w; suffix bits carry 2w - 1
    n, k = spec.inst.n, spec.inst.k
    half = Fraction(1, 2)
    if spec.w > half:
        return _levels(spec.inst, [n - k], "w>1/2")
    if spec.w < half:
        return _levels(spec.inst, [n], "w<1/2")
    return _levels(spec.inst, range(n - k, n + 1), "w=1/2")


# -- epsilon constraint and penalties -------------------------------------------

def constrained_optima(inst: ProblemInstance, eps: Number) -> OptimalSetDescriptor:
    """Optima of ``max f1`` subject to ``f2 >= eps``."""
    eps = exact(eps)
    n, k = inst.n, inst.k
    if eps > n:
        return _levels(inst, [], "infeasible")
    if eps <= n - k:
        return _levels(inst, [n - k], "eps<=n-k")
    return _levels(inst, [math.ceil(eps)], "n-k<eps<=n")


@dataclass(frozen=True)
class PenaltySpec:
    inst: ProblemInstance
    eps: Fraction
    r: Fraction = Fraction(1)
    mode: str = EXTERIOR

    def __post_init__(self):
        if self.mode not in (EXTERIOR, NONPARAMETER):
            raise ValueError(f"unknown penalty mode {self.mode!r}")
        object.__setattr__(self, "eps", exact(self.eps))
        r = exact(self.r)
        if self.mode == NONPARAMETER:
            r = Fraction(1)
        if r <= 0:
            raise ValueError(f"penalty coefficient must be positive, got {r}")
        object.__setattr__(self, "r", r)

    def feasible(self, v: ObjectivePair) -> bool:
        return v[1] >= self.eps


def penalty_value(spec: PenaltySpec, x: BitString) -> Fraction:
    f1, f2 = evaluate(spec.inst, x)
    if f2 >= spec.eps:
        return Fraction(f1)
    if spec.mode == NONPARAMETER:
        return f1 + f2 - spec.eps
    return f1 + spec.r * (f2 - spec.eps)


@dataclass(frozen=True)
class PenaltyThresholds:
    r1: Fraction
    r2: Fraction


def penalty_thresholds(inst: ProblemInstance, eps: Number) -> PenaltyThresholds:
    """Coefficients separating the exterior-penalty regimes for ``n-k < eps < n``."""
    eps = exact(eps)
    n, k = inst.n, inst.k
    if not n - k < eps < n:
        raise ValueError(f"thresholds need n-k < eps < n, got eps={eps} for n={n}, k={k}")
    c = math.ceil(eps)
    return PenaltyThresholds(r1=(c - (n - k)) / (eps - (n - k)), r2=1 / (eps + 1 - c))


EXTERIOR_CASES = (
    "eps<=n-k",
    "eps>n-k,r<1",
    "eps>=n,r=1",
    "eps>=n,r>1",
    "n-k<eps<n,r=1,eps fractional",
    "n-k<eps<n,r=1,eps integer",
    "n-k<eps<=n-k+1,1<r<r1",
    "n-k+1<eps<n,1<r<=r1",
    "r1<r<r2",
    "n-k<eps<=n-k+1,r=r1",
    "r=r2",
    "r>r2",
)


def exterior_optima(spec: PenaltySpec) -> OptimalSetDescriptor:
    """Optimal set of the exterior penalty problem, with the matching case label."""
    inst, eps, r = spec.inst, spec.eps, spec.r
    n, k = inst.n, inst.k
    a = n - k
    if eps <= a:
        return _levels(inst, [a], EXTERIOR_CASES[0])
    if r < 1:
        return _levels(inst, [a], EXTERIOR_CASES[1])
    if eps >= n:
        if r == 1:
            return _levels(inst, range(a, n + 1), EXTERIOR_CASES[2])
        return _levels(inst, [n], EXTERIOR_CASES[3])
    c = math.ceil(eps)
    if r == 1:
        if eps == c:
            return _levels(inst, range(a, c + 1), EXTERIOR_CASES[5])
        return _levels(inst, range(a, c), EXTERIOR_CASES[4])
    th = penalty_thresholds(inst, eps)
    if r > th.r2:
        return _levels(inst, [c], EXTERIOR_CASES[11])
    first_unit = eps <= a + 1  # here r1 == r2
    if r == th.r2:
        return _levels(inst, [c - 1, c], EXTERIOR_CASES[9] if first_unit else EXTERIOR_CASES[10])
    if first_unit:
        return _levels(inst, [a], EXTERIOR_CASES[6])
    if r <= th.r1:
        return _levels(inst, [c - 1], EXTERIOR_CASES[7])
    return _levels(inst, [c - 1], EXTERIOR_CASES[8])


def nonparameter_optima(inst: ProblemInstance, eps: Number) -> OptimalSetDescriptor:
    return exterior_optima(PenaltySpec(inst, eps, 1, EXTERIOR))


def penalty_optima(spec: PenaltySpec) -> OptimalSetDescriptor:
    return exterior_optima(PenaltySpec(spec.inst, spec.eps, spec.r, EXTERIOR))


def coverage_schedule(inst: ProblemInstance, r: Number = 3) -> list[PenaltySpec]:
    """One exterior-penalty problem per front point.

    ``eps_0 = n - k`` and ``eps_i = n - k + i - 1/2``; with half-integer eps the
    upper threshold ``r2`` is 2, so the default ``r = 3`` clears it everywhere.
    """
    n, k = inst.n, inst.k
    eps = [Fraction(n - k)] + [Fraction(2 * (n - k + i) - 1, 2) for i in range(1, k + 1)]
    return [PenaltySpec(inst, e, r, EXTERIOR) for e in eps]


# -- Tchebycheff subproblems ----------------------------------------------------

@dataclass(frozen=True)
class SubproblemSpec:
    inst: ProblemInstance
    i: int
    z: ObjectivePair = field(default=None)

    def __post_init__(self):
        if not 0 <= self.i <= self.H:
            raise ValueError(f"subproblem index {self.i} outside [0, {self.H}]")
        if self.z is None:
            object.__setattr__(self, "z", ObjectivePair(self.inst.n, self.inst.n))
        else:
            object.__setattr__(self, "z", ObjectivePair(*self.z))

    @property
    def H(self) -> int:
        return self.inst.k

    @property
    def weight(self) -> Fraction:
        if self.inst.k == 0:
            return Fraction(0)
        return Fraction(self.i, self.inst.k)


def subproblem_value(spec: SubproblemSpec, x: BitString) -> Fraction:
    f1, f2 = evaluate(spec.inst, x)
    w = spec.weight
    return max(w * abs(f1 - spec.z[0]), (1 - w) * abs(f2 - spec.z[1]))


def subproblem_optima(spec: SubproblemSpec) -> OptimalSetDescriptor:
    """Minimizers of ``h_i`` once the reference point has reached ``(n, n)``."""
    n, k = spec.inst.n, spec.inst.k
    if spec.z != (n, n):
        raise ValueError("the closed form holds only for the reference point (n, n)")
    if spec.i == 0:
        return _levels(spec.inst, [n], "i=0")
    if spec.i == spec.H:
        return _levels(spec.inst, [n - k], "i=H")
    return _levels(spec.inst, [n - spec.i], "0<i<H")
