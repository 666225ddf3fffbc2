"""Exact rational distributions over message tuples (and their t-fold products)."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import config
from ic_engine.bits import as_fraction
from ic_engine.errors import BudgetExceededError, InstanceValidationError
from ic_engine.model.instance import TupleIndex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Distribution:
    """Dense table of exact probabilities, one per tuple in `index` order."""

    index: TupleIndex
    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.probs) != self.index.size:
            raise InstanceValidationError(
                f"distribution over {self.index.scope} needs {self.index.size} entries, got {len(self.probs)}"
            )
        for position, value in enumerate(self.probs):
            if value <= 0:
                label = self.index.label(self.index.tuple_of_index(position))
                raise InstanceValidationError(f"full support violated: P({label}) = {value}")
        total = sum(self.probs, Fraction(0))
        if total != 1:
            raise InstanceValidationError(f"probabilities sum to {total}, not 1")

    @property
    def scope(self) -> tuple[int, ...]:
        return self.index.scope

    @property
    def q(self) -> int:
        return self.index.q

    @property
    def t(self) -> int:
        return self.index.t

    def prob(self, x: tuple[int, ...]) -> Fraction:
        return self.probs[self.index.index_of_tuple(x)]

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        return zip(self.index.tuples(), self.probs)

    def is_uniform(self) -> bool:
        first = self.probs[0]
        return all(value == first for value in self.probs)

    # ---------------------------
    # Constructors
    # ---------------------------
    @classmethod
    def from_function(cls, index: TupleIndex, weight: Callable[[tuple[int, ...]], Fraction]) -> Distribution:
        return cls(index, tuple(Fraction(weight(x)) for x in index.tuples()))

    @classmethod
    def uniform(cls, scope: Sequence[int], q: int, t: int = 1) -> Distribution:
        index = TupleIndex(tuple(scope), q, t)
        mass = Fraction(1, index.size)
        return cls(index, (mass,) * index.size)

    @classmethod
    def product(cls, scope: Sequence[int], q: int, vectors: Sequence[Sequence[int | str | Fraction]]) -> Distribution:
        """Independent messages, one rational vector of length q per message in `scope`."""
        if len(vectors) != len(scope):
            raise InstanceValidationError(f"product distribution needs {len(scope)} vectors, got {len(vectors)}")
        parsed: list[list[Fraction]] = []
        for message, vector in zip(scope, vectors):
            if len(vector) != q:
                raise InstanceValidationError(f"marginal of message {message} needs {q} entries, got {len(vector)}")
            entries = [as_fraction(value) for value in vector]
            if sum(entries, Fraction(0)) != 1:
                raise InstanceValidationError(f"marginal of message {message} does not sum to 1")
            parsed.append(entries)
        index = TupleIndex(tuple(scope), q, 1)
        return cls.from_function(index, lambda x: math.prod((parsed[k][s] for k, s in enumerate(x)), start=Fraction(1)))

    @classmethod
    def joint(cls, scope: Sequence[int], q: int, table: Mapping[str, int | str | Fraction]) -> Distribution:
        """Full joint table keyed by tuple strings ("010", or "3,11,0" when q > 10)."""
        index = TupleIndex(tuple(scope), q, 1)
        probs: list[Fraction | None] = [None] * index.size
        for label, value in table.items():
            position = index.index_of_tuple(index.parse_label(label))
            if probs[position] is not None:
                raise InstanceValidationError(f"joint table lists {label!r} twice")
            probs[position] = as_fraction(value)
        for position, value in enumerate(probs):
            if value is None:
                label = index.label(index.tuple_of_index(position))
                raise InstanceValidationError(f"full support violated: joint table has no entry for {label!r}")
        return cls(index, tuple(probs))  # type: ignore[arg-type]


@dataclass(frozen=True)
class LazyProductDistribution:
    """t-fold memoryless extension evaluated on demand (never materialized)."""

    base: Distribution
    t: int

    @property
    def index(self) -> TupleIndex:
        return TupleIndex(self.base.scope, self.base.q, self.t)

    @property
    def scope(self) -> tuple[int, ...]:
        return self.base.scope

    @property
    def q(self) -> int:
        return self.base.q

    def prob(self, x: tuple[int, ...]) -> Fraction:
        index = self.index
        index.index_of_tuple(x)
        value = Fraction(1)
        for j in range(self.t):
            value *= self.base.prob(index.symbol_slice(x, j))
        return value

    def items(self) -> Iterator[tuple[tuple[int, ...], Fraction]]:
        for x in self.index.tuples():
            yield x, self.prob(x)

    def is_uniform(self) -> bool:
        return self.base.is_uniform()


AnyDistribution = Distribution | LazyProductDistribution


def product_extend(
    dist: Distribution,
    t: int,
    *,
    cap: int | None = None,
    materialize: bool = False,
) -> AnyDistribution:
    """P_{X_S^t}(x) = prod_j P_{X_S}(x_{S,j}).

    Above `cap` tuples a lazy evaluator is returned, or BudgetExceededError is
    raised when `materialize` is set.
    """
    if dist.t != 1:
        raise InstanceValidationError(f"product_extend expects a single-letter distribution, got t={dist.t}")
    if t < 1:
        raise InstanceValidationError(f"t must be positive, got {t}")
    if t == 1:
        return dist
    cap = config.DISTRIBUTION_CAP if cap is None else cap
    index = TupleIndex(dist.scope, dist.q, t)
    if index.size > cap:
        if materialize:
            raise BudgetExceededError(
                f"X_S^t has {index.size} tuples, above the materialization cap {cap}", budget=cap
            )
        logger.warning("X_S^%s has %s tuples (cap %s); returning a lazy product distribution", t, index.size, cap)
        return LazyProductDistribution(dist, t)
    base = dist.probs
    width = len(dist.scope)
    single = TupleIndex(dist.scope, dist.q, 1)

    def weight(x: tuple[int, ...]) -> Fraction:
        value = Fraction(1)
        for j in range(t):
            value *= base[single.index_of_tuple(tuple(x[k * t + j] for k in range(width)))]
        return value

    return Distribution.from_function(index, weight)


def _check_subset(dist: AnyDistribution, subset: Iterable[int]) -> tuple[int, ...]:
    members = tuple(sorted(set(subset)))
    missing = [item for item in members if item not in dist.scope]
    if missing:
        raise InstanceValidationError(f"{missing} not contained in distribution scope {dist.scope}")
    return members


def marginal(dist: AnyDistribution, subset: Iterable[int]) -> AnyDistribution:
    members = _check_subset(dist, subset)
    if members == dist.scope:
        return dist
    if isinstance(dist, LazyProductDistribution):
        return LazyProductDistribution(marginal(dist.base, members), dist.t)  # type: ignore[arg-type]
    target = dist.index.sub_index(members)
    sums = [Fraction(0)] * target.size
    for x, p in dist.items():
        sums[target.index_of_tuple(dist.index.project(x, members))] += p
    return Distribution(target, tuple(sums))


def conditional(dist: AnyDistribution, known: Iterable[int], a: tuple[int, ...]) -> Distribution:
    """P_{X_B | X_A = a} with B = scope \\ A, over X_B^t."""
    members = _check_subset(dist, known)
    rest = tuple(item for item in dist.scope if item not in members)
    index = dist.index
    known_index = index.sub_index(members)
    known_index.index_of_tuple(a)
    target = index.sub_index(rest)
    cells = [Fraction(0)] * target.size
    for x, p in dist.items():
        if index.project(x, members) == a:
            cells[target.index_of_tuple(index.project(x, rest))] += p
    total = sum(cells, Fraction(0))
    return Distribution(target, tuple(cell / total for cell in cells))
