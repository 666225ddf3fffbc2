"""Exact rational simplex for max c·y s.t. A y <= b, y >= 0 with b >= 0."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import config
from ic_engine.errors import BudgetExceededError, InstanceValidationError, InvariantViolationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LPSolution:
    value: Fraction
    primal: tuple[Fraction, ...]
    dual: tuple[Fraction, ...]
    pivots: int


def maximize(
    objective: Sequence[Fraction | int],
    constraints: Sequence[Sequence[Fraction | int]],
    bounds: Sequence[Fraction | int],
    *,
    budget: int | None = None,
) -> LPSolution:
    """Tableau simplex with Bland's rule; the all-slack basis is the starting point."""
    budget = config.NODE_BUDGET if budget is None else budget
    n = len(objective)
    m = len(constraints)
    if len(bounds) != m:
        raise InstanceValidationError("one bound is needed per constraint row")
    if any(Fraction(b) < 0 for b in bounds):
        raise InstanceValidationError("the slack basis needs non-negative right-hand sides")

    tableau: list[list[Fraction]] = []
    for i, row in enumerate(constraints):
        if len(row) != n:
            raise InstanceValidationError(f"constraint row {i} has {len(row)} coefficients, expected {n}")
        slack = [Fraction(0)] * m
        slack[i] = Fraction(1)
        tableau.append([Fraction(a) for a in row] + slack + [Fraction(bounds[i])])
    reduced = [-Fraction(c) for c in objective] + [Fraction(0)] * m + [Fraction(0)]
    basis = list(range(n, n + m))

    pivots = 0
    while True:
        entering = next((j for j in range(n + m) if reduced[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best_ratio: Fraction | None = None
        for i in range(m):
            coefficient = tableau[i][entering]
            if coefficient <= 0:
                continue
            ratio = tableau[i][-1] / coefficient
            if best_ratio is None or ratio < best_ratio or (ratio == best_ratio and basis[i] < basis[leaving]):
                leaving, best_ratio = i, ratio
        if leaving is None:
            raise InvariantViolationError("linear program is unbounded")
        pivots += 1
        if pivots > budget:
            raise BudgetExceededError(f"simplex exceeded {budget} pivots", budget=budget)

        pivot_row = tableau[leaving]
        pivot_value = pivot_row[entering]
        pivot_row[:] = [value / pivot_value for value in pivot_row]
        for i in range(m):
            if i != leaving and tableau[i][entering] != 0:
                factor = tableau[i][entering]
                tableau[i] = [a - factor * b for a, b in zip(tableau[i], pivot_row)]
        factor = reduced[entering]
        reduced = [a - factor * b for a, b in zip(reduced, pivot_row)]
        basis[leaving] = entering

    primal = [Fraction(0)] * n
    for i, column in enumerate(basis):
        if column < n:
            primal[column] = tableau[i][-1]
    dual = tuple(reduced[n : n + m])
    logger.debug("simplex finished after %s pivots with value %s", pivots, reduced[-1])
    return LPSolution(reduced[-1], tuple(primal), dual, pivots)
