"""The OneMaxMin_k bi-objective function family and its Pareto structure.

Both objectives are maximized. On the first ``n - k`` positions they agree
(both count ones); on the last ``k`` positions they disagree (the first counts
ones, the second counts zeros). ``k = n`` is OneMinMax, ``k = n/2`` is COCZ and
``k = 0`` makes the two objectives identical.

Everything here works on exact integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .bitcore import BitString


class ObjectivePair(NamedTuple):
    f1: int
    f2: int


@dataclass(frozen=True)
class ProblemInstance:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 0 <= self.k <= self.n:
            raise ValueError(f"need 0 <= k <= n, got n={self.n}, k={self.k}")

    @property
    def prefix(self) -> int:
        """Length ``n - k`` of the agreeing block."""
        return self.n - self.k

    def evaluate(self, x: BitString) -> ObjectivePair:
        return evaluate(self, x)

    def level_value(self, i: int) -> ObjectivePair:
        """Objective value shared by the level set ``D_i``: ``(2n - k - i, i)``."""
        return ObjectivePair(2 * self.n - self.k - i, i)


def evaluate(inst: ProblemInstance, x: BitString) -> ObjectivePair:
    if len(x) != inst.n:
        raise ValueError(f"bitstring of length {len(x)} for instance with n={inst.n}")
    bits = x.bits
    head = sum(bits[:inst.prefix])
    tail = sum(bits[inst.prefix:])
    return ObjectivePair(head + tail, head + inst.k - tail)


def weakly_dominates(a: ObjectivePair, b: ObjectivePair) -> bool:
    return a[0] >= b[0] and a[1] >= b[1]


def dominates(a: ObjectivePair, b: ObjectivePair) -> bool:
    return a[0] >= b[0] and a[1] >= b[1] and (a[0] > b[0] or a[1] > b[1])


def pareto_front(inst: ProblemInstance) -> list[ObjectivePair]:
    """The ``k + 1`` front points in ascending ``f1`` order."""
    n, k = inst.n, inst.k
    return [ObjectivePair(n - k + i, n - i) for i in range(k + 1)]


def is_pareto_optimal(inst: ProblemInstance, x: BitString) -> bool:
    if len(x) != inst.n:
        raise ValueError(f"bitstring of length {len(x)} for instance with n={inst.n}")
    return all(x.bits[:inst.prefix])


def max_antichain_size(inst: ProblemInstance) -> int:
    return inst.k + 1


def front_index(inst: ProblemInstance, v: ObjectivePair) -> int | None:
    """Position of ``v`` in :func:`pareto_front`, or None if ``v`` is off the front."""
    i = v[0] - (inst.n - inst.k)
    if v[0] + v[1] == 2 * inst.n - inst.k and 0 <= i <= inst.k:
        return i
    return None


@dataclass(frozen=True)
class CoverageReport:
    front: tuple[ObjectivePair, ...]
    covered: tuple[bool, ...]

    @property
    def count(self) -> int:
        return sum(self.covered)

    @property
    def size(self) -> int:
        return len(self.front)

    @property
    def fraction(self) -> float:
        return self.count / self.size

    @property
    def full(self) -> bool:
        return all(self.covered)

    @property
    def present(self) -> list[ObjectivePair]:
        return [p for p, c in zip(self.front, self.covered) if c]

    def __str__(self) -> str:
        return f"{self.count}/{self.size}"


def coverage(inst: ProblemInstance, values: Iterable[ObjectivePair]) -> CoverageReport:
    """Which front points occur among ``values`` (function-value coverage)."""
    seen = {ObjectivePair(*v) for v in values}
    front = tuple(pareto_front(inst))
    return CoverageReport(front, tuple(p in seen for p in front))


# -- exhaustive helpers (small n) -------------------------------------------

ENUMERATION_LIMIT = 20


def all_bitstrings(n: int) -> np.ndarray:
    """Every bitstring of length ``n`` as a ``(2**n, n)`` uint8 array.

    Row ``r`` holds the binary expansion of ``r``, position 1 first.
    """
    if n > ENUMERATION_LIMIT:
        raise ValueError(f"refusing to enumerate 2**{n} bitstrings")
    rows = np.arange(2 ** n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((rows[:, None] >> shifts) & 1).astype(np.uint8)


def all_values(inst: ProblemInstance) -> tuple[np.ndarray, np.ndarray]:
    """``(f1, f2)`` arrays over :func:`all_bitstrings`, summing bits directly."""
    x = all_bitstrings(inst.n).astype(np.int64)
    f1 = x.sum(axis=1)
    head = x[:, :inst.prefix].sum(axis=1)
    f2 = head + (1 - x[:, inst.prefix:]).sum(axis=1)
    return f1, f2


def realized_values(inst: ProblemInstance) -> set[ObjectivePair]:
    f1, f2 = all_values(inst)
    return {ObjectivePair(int(a), int(b)) for a, b in set(zip(f1.tolist(), f2.tolist()))}


def nondominated(values: Iterable[ObjectivePair]) -> list[ObjectivePair]:
    """Quadratic-time non-dominated filter, ascending ``f1``."""
    vals = sorted(set(values))
    return [v for v in vals if not any(dominates(u, v) for u in vals)]


def longest_antichain(values: Iterable[ObjectivePair]) -> int:
    """Size of a largest mutually incomparable subset of distinct values.

    In two dimensions an antichain is a chain with ``f1`` strictly increasing
    and ``f2`` strictly decreasing, so this is a longest-path dynamic program.
    """
    vals = sorted(set(values))
    best = [1] * len(vals)
    for j, v in enumerate(vals):
        for i in range(j):
            u = vals[i]
            if u[0] < v[0] and u[1] > v[1]:
                best[j] = max(best[j], best[i] + 1)
    return max(best, default=0)
