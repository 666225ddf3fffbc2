"""Seeded random small cases for the property checks (q = 2, n <= 3 by default)."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from ic_engine.coding.codes import DeterministicCode, StochasticCode
from ic_engine.model.distribution import Distribution
from ic_engine.model.instance import AdversarySpec, Instance, TupleIndex


def random_instance(rng: np.random.Generator, max_n: int = 3, q: int = 2) -> Instance:
    n = int(rng.integers(1, max_n + 1))
    side_info = [[j for j in range(1, n + 1) if j != i and rng.random() < 0.5] for i in range(1, n + 1)]
    return Instance.from_lists(n, q, side_info)


def random_distribution(rng: np.random.Generator, scope: tuple[int, ...], q: int, max_weight: int = 9) -> Distribution:
    """Full support: integer weights in 1..max_weight, normalized exactly."""
    index = TupleIndex(scope, q, 1)
    weights = [int(w) for w in rng.integers(1, max_weight + 1, size=index.size)]
    total = sum(weights)
    return Distribution(index, tuple(Fraction(w, total) for w in weights))


def random_adversary(rng: np.random.Generator, n: int) -> AdversarySpec:
    known = [i for i in range(1, n + 1) if rng.random() < 0.5]
    if len(known) == n:
        known = known[:-1]
    return AdversarySpec.build(n, known)


def random_code(rng: np.random.Generator, index: TupleIndex, max_size: int = 4) -> DeterministicCode:
    size = int(rng.integers(1, max_size + 1))
    table = tuple(int(y) for y in rng.integers(1, size + 1, size=index.size))
    return DeterministicCode(index, table, size)


def random_stochastic_code(rng: np.random.Generator, index: TupleIndex, max_size: int = 4) -> StochasticCode:
    size = int(rng.integers(1, max_size + 1))
    rows = []
    for _ in range(index.size):
        weights = [int(w) for w in rng.integers(0, 4, size=size)]
        if not any(weights):
            weights[int(rng.integers(0, size))] = 1
        total = sum(weights)
        rows.append(tuple((y + 1, Fraction(w, total)) for y, w in enumerate(weights) if w))
    return StochasticCode(index, size, tuple(rows))


def disjoint_splits(scope: tuple[int, ...]) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every (A, B) with A, B disjoint subsets of `scope`."""
    out = []
    for labels in np.ndindex(*([3] * len(scope))):
        a = tuple(m for m, label in zip(scope, labels) if label == 1)
        b = tuple(m for m, label in zip(scope, labels) if label == 2)
        out.append((a, b))
    return out
