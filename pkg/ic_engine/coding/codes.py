"""Deterministic and stochastic index codes and their constructors."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction

from ic_engine.bits import as_fraction
from ic_engine.errors import InstanceValidationError
from ic_engine.model.instance import Instance, TupleIndex

logger = logging.getLogger(__name__)

Transition = tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class DeterministicCode:
    """f: X_S^t -> {1..M}; `table[v]` is the codeword of the tuple with index v."""

    index: TupleIndex
    table: tuple[int, ...]
    size: int
    parts: tuple[int, int] | None = None
    claims_zero_error: bool = False

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InstanceValidationError(f"codebook size must be positive, got {self.size}")
        if len(self.table) != self.index.size:
            raise InstanceValidationError(
                f"encoder must map all {self.index.size} tuples, got {len(self.table)} entries"
            )
        for v, y in enumerate(self.table):
            if not 1 <= y <= self.size:
                label = self.index.label(self.index.tuple_of_index(v))
                raise InstanceValidationError(f"codeword {y} for {label} is outside 1..{self.size}")
        if self.parts is not None and self.parts[0] * self.parts[1] != self.size:
            raise InstanceValidationError(f"pair structure {self.parts} does not multiply to M = {self.size}")

    @property
    def t(self) -> int:
        return self.index.t

    @property
    def scope(self) -> tuple[int, ...]:
        return self.index.scope

    @classmethod
    def from_function(
        cls, index: TupleIndex, encoder: Callable[[tuple[int, ...]], int], size: int | None = None
    ) -> DeterministicCode:
        table = tuple(int(encoder(x)) for x in index.tuples())
        return cls(index, table, size if size is not None else max(table))

    def encode(self, x: tuple[int, ...]) -> int:
        return self.table[self.index.index_of_tuple(x)]

    def transitions_at(self, v: int) -> Transition:
        return ((self.table[v], Fraction(1)),)

    def preimage(self, y: int) -> tuple[int, ...]:
        return tuple(v for v, value in enumerate(self.table) if value == y)

    def used_codewords(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.table)))

    def pair(self, y: int) -> tuple[int, int]:
        """(y1, y2) of a composite codeword y = (y1 - 1)·M2 + y2."""
        if self.parts is None:
            raise InstanceValidationError("code has no (y1, y2) pair structure")
        y1, y2 = divmod(y - 1, self.parts[1])
        return y1 + 1, y2 + 1

    def same_map(self, other: DeterministicCode) -> bool:
        return self.index == other.index and self.table == other.table and self.size == other.size


@dataclass(frozen=True)
class StochasticCode:
    """Per-tuple exact distribution over {1..M}; rows[v] lists (y, P(y | x)) with P > 0."""

    index: TupleIndex
    size: int
    rows: tuple[Transition, ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.index.size:
            raise InstanceValidationError(f"encoder must cover all {self.index.size} tuples, got {len(self.rows)}")
        for v, row in enumerate(self.rows):
            label = self.index.label(self.index.tuple_of_index(v))
            if sum((p for _, p in row), Fraction(0)) != 1:
                raise InstanceValidationError(f"encoder distribution at {label} does not sum to 1")
            for y, p in row:
                if not 1 <= y <= self.size or p <= 0:
                    raise InstanceValidationError(f"bad encoder entry ({y}, {p}) at {label}")

    @property
    def t(self) -> int:
        return self.index.t

    @property
    def scope(self) -> tuple[int, ...]:
        return self.index.scope

    def transitions_at(self, v: int) -> Transition:
        return self.rows[v]

    @classmethod
    def from_deterministic(cls, code: DeterministicCode) -> StochasticCode:
        return cls(code.index, code.size, tuple(((y, Fraction(1)),) for y in code.table))

    @classmethod
    def from_rows(cls, index: TupleIndex, size: int, rows: Sequence[dict[int, int | str | Fraction]]) -> StochasticCode:
        parsed = []
        for row in rows:
            merged = {int(y): as_fraction(p) for y, p in row.items()}
            parsed.append(tuple(sorted((y, p) for y, p in merged.items() if p != 0)))
        return cls(index, size, tuple(parsed))

    @classmethod
    def mixture(cls, codes: Sequence[DeterministicCode], weights: Sequence[Fraction | int | str]) -> StochasticCode:
        """Use codes[k] with probability weights[k], independently per tuple."""
        if not codes or len(codes) != len(weights):
            raise InstanceValidationError("a mixture needs one weight per code")
        shares = [as_fraction(w) for w in weights]
        if sum(shares, Fraction(0)) != 1 or any(w < 0 for w in shares):
            raise InstanceValidationError("mixture weights must be non-negative and sum to 1")
        index = codes[0].index
        if any(code.index != index for code in codes):
            raise InstanceValidationError("mixed codes must share scope, alphabet and t")
        size = max(code.size for code in codes)
        rows = []
        for v in range(index.size):
            cell: dict[int, Fraction] = {}
            for code, share in zip(codes, shares):
                if share:
                    cell[code.table[v]] = cell.get(code.table[v], Fraction(0)) + share
            rows.append(tuple(sorted(cell.items())))
        return cls(index, size, tuple(rows))


Code = DeterministicCode | StochasticCode


# ---------------------------
# Constructors
# ---------------------------
def coloring_code(index: TupleIndex, coloring: Sequence[int]) -> DeterministicCode:
    """Colour c (0-based) becomes codeword c + 1."""
    if len(coloring) != index.size:
        raise InstanceValidationError(f"colouring covers {len(coloring)} vertices, expected {index.size}")
    table = tuple(int(color) + 1 for color in coloring)
    return DeterministicCode(index, table, max(table))


def identity_code(instance: Instance, subset: Iterable[int] | None = None, t: int = 1) -> DeterministicCode:
    index = instance.tuple_index(subset, t)
    return DeterministicCode(index, tuple(range(1, index.size + 1)), index.size)


def constant_code(instance: Instance, subset: Iterable[int] | None = None, t: int = 1) -> DeterministicCode:
    index = instance.tuple_index(subset, t)
    return DeterministicCode(index, (1,) * index.size, 1)


def composite_code(code_p: DeterministicCode, code_q: DeterministicCode, instance: Instance) -> DeterministicCode:
    """x ↦ (f1(x_P), f2(x_Q)) flattened as (y1 - 1)·M2 + y2, with M = M1·M2."""
    if code_p.t != code_q.t:
        raise InstanceValidationError(f"composite parts disagree on t: {code_p.t} vs {code_q.t}")
    if set(code_p.scope) & set(code_q.scope):
        raise InstanceValidationError("composite parts must cover disjoint message sets")
    if tuple(sorted(code_p.scope + code_q.scope)) != instance.messages:
        raise InstanceValidationError("composite parts must together cover every message")
    index = instance.tuple_index(None, code_p.t)
    m2 = code_q.size

    def encoder(x: tuple[int, ...]) -> int:
        y1 = code_p.encode(index.project(x, code_p.scope))
        y2 = code_q.encode(index.project(x, code_q.scope))
        return (y1 - 1) * m2 + y2

    table = tuple(encoder(x) for x in index.tuples())
    return DeterministicCode(index, table, code_p.size * m2, parts=(code_p.size, m2))


def refine_code(code: DeterministicCode, y: int) -> DeterministicCode:
    """Split the class of codeword y: its upper half (by tuple index) moves to the new codeword M + 1."""
    members = code.preimage(y)
    if len(members) < 2:
        raise InstanceValidationError(f"codeword {y} has fewer than two tuples; nothing to split")
    moved = set(members[len(members) // 2 :])
    table = tuple(code.size + 1 if v in moved else value for v, value in enumerate(code.table))
    return DeterministicCode(code.index, table, code.size + 1)
