"""Exhaustive oracles over ``{0,1}^n``.

Each function enumerates every bitstring, scores it straight from its bits and
returns the arg-optimal rows together with their objective values. Nothing
here consults the closed forms in :mod:`onemaxmin.reformulate`; the two are
compared by :mod:`onemaxmin.lab.verify` and by the tests.

Scores are computed on integers scaled by common denominators, so ties are
exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .benchmark import ObjectivePair, ProblemInstance, all_bitstrings, all_values
from .bitcore import BitString
from .reformulate import Number, exact


@dataclass(frozen=True)
class BruteOptima:
    rows: np.ndarray          # indices into all_bitstrings(n)
    values: frozenset         # objective values of those rows
    score: Fraction | None    # optimal objective (None if infeasible)

    def solutions(self, n: int) -> set[BitString]:
        x = all_bitstrings(n)[self.rows]
        return {BitString(bytes(row)) for row in x}


def _pick(f1: np.ndarray, f2: np.ndarray, rows: np.ndarray, score: Fraction | None) -> BruteOptima:
    vals = frozenset(ObjectivePair(int(a), int(b)) for a, b in zip(f1[rows], f2[rows]))
    return BruteOptima(rows, vals, score)


def _argmax(f1, f2, scaled: np.ndarray, denom: int) -> BruteOptima:
    best = scaled.max()
    rows = np.flatnonzero(scaled == best)
    return _pick(f1, f2, rows, Fraction(int(best), denom))


def scalarization(inst: ProblemInstance, w: Number) -> BruteOptima:
    w = exact(w)
    f1, f2 = all_values(inst)
    p, q = w.numerator, w.denominator
    return _argmax(f1, f2, p * f1 + (q - p) * f2, q)


def constrained(inst: ProblemInstance, eps: Number) -> BruteOptima:
    eps = exact(eps)
    f1, f2 = all_values(inst)
    feasible = f2 * eps.denominator >= eps.numerator
    if not feasible.any():
        return BruteOptima(np.array([], dtype=np.int64), frozenset(), None)
    best = f1[feasible].max()
    rows = np.flatnonzero(feasible & (f1 == best))
    return _pick(f1, f2, rows, Fraction(int(best)))


def exterior_penalty(inst: ProblemInstance, eps: Number, r: Number) -> BruteOptima:
    eps, r = exact(eps), exact(r)
    f1, f2 = all_values(inst)
    q, v = eps.denominator, r.denominator
    violation = np.minimum(0, f2 * q - eps.numerator)
    scaled = f1 * q * v + r.numerator * violation
    return _argmax(f1, f2, scaled, q * v)


def nonparameter_penalty(inst: ProblemInstance, eps: Number) -> BruteOptima:
    """Piecewise definition: ``f1`` if feasible, else ``f1 + f2 - eps``."""
    eps = exact(eps)
    f1, f2 = all_values(inst)
    q = eps.denominator
    feasible = f2 * q >= eps.numerator
    scaled = np.where(feasible, f1 * q, (f1 + f2) * q - eps.numerator)
    return _argmax(f1, f2, scaled, q)


def tchebycheff(inst: ProblemInstance, i: int, z: tuple[int, int] | None = None) -> BruteOptima:
    """Minimizers of ``max(w |f1 - z1|, (1 - w) |f2 - z2|)`` with ``w = i/k``."""
    n, k = inst.n, inst.k
    z1, z2 = z if z is not None else (n, n)
    f1, f2 = all_values(inst)
    kk = max(k, 1)
    wi = i if k else 0
    scaled = np.maximum(wi * np.abs(f1 - z1), (kk - wi) * np.abs(f2 - z2))
    best = scaled.min()
    rows = np.flatnonzero(scaled == best)
    return _pick(f1, f2, rows, Fraction(int(best), kk))
